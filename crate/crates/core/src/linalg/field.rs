use std::fmt;

use crate::error::{Error, Result};

/// An odd prime modulus `ℓ`, validated on construction.
///
/// All residues handled by the crate are `u32` values in `[0, ℓ)`; the
/// prime carries the arithmetic.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Prime(u32);

impl Prime {
    pub fn new(p: u32) -> Result<Self> {
        if !(3..=(1 << 16)).contains(&p) || !is_prime(p) {
            return Err(Error::BadModulus(p));
        }
        Ok(Prime(p))
    }

    #[inline]
    pub fn get(self) -> u32 {
        self.0
    }

    /// Reduces an arbitrary signed integer into `[0, ℓ)`.
    #[inline]
    pub fn reduce(self, x: i64) -> u32 {
        x.rem_euclid(self.0 as i64) as u32
    }

    #[inline]
    pub fn add(self, a: u32, b: u32) -> u32 {
        let s = a + b;
        if s >= self.0 {
            s - self.0
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(self, a: u32, b: u32) -> u32 {
        if a >= b {
            a - b
        } else {
            a + self.0 - b
        }
    }

    #[inline]
    pub fn neg(self, a: u32) -> u32 {
        if a == 0 {
            0
        } else {
            self.0 - a
        }
    }

    #[inline]
    pub fn mul(self, a: u32, b: u32) -> u32 {
        ((a as u64 * b as u64) % self.0 as u64) as u32
    }

    pub fn pow(self, mut base: u32, mut exp: u64) -> u32 {
        let mut acc = 1 % self.0;
        base %= self.0;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        acc
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(self, a: u32) -> Option<u32> {
        if a % self.0 == 0 {
            None
        } else {
            Some(self.pow(a, self.0 as u64 - 2))
        }
    }

    /// Euler's criterion: `+1` for nonzero squares, `-1` for nonsquares, `0` for zero.
    pub fn legendre(self, a: u32) -> i8 {
        let a = a % self.0;
        if a == 0 {
            return 0;
        }
        if self.pow(a, (self.0 as u64 - 1) / 2) == 1 {
            1
        } else {
            -1
        }
    }

    /// Multiplicative order of a nonzero residue.
    pub fn mult_order(self, a: u32) -> Option<u64> {
        let a = a % self.0;
        if a == 0 {
            return None;
        }
        let mut x = a;
        let mut k = 1u64;
        while x != 1 {
            x = self.mul(x, a);
            k += 1;
        }
        Some(k)
    }

    /// Prints `ℓ - 1` as `-1` and small negatives likewise, for readable output.
    pub fn signed(self, a: u32) -> i64 {
        if a > self.0 / 2 {
            a as i64 - self.0 as i64
        } else {
            a as i64
        }
    }
}

impl fmt::Display for Prime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

pub fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u32;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}
