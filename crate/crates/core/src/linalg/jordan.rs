use std::fmt;

use super::field::Prime;
use super::matrix::Matrix;
use crate::error::{Error, Result};

/// Jordan type of a local monodromy matrix: a multiset of
/// `(eigenvalue, block size)` pairs, kept sorted.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct JordanData {
    blocks: Vec<(u32, usize)>,
}

impl JordanData {
    pub fn new(mut blocks: Vec<(u32, usize)>) -> Self {
        blocks.retain(|&(_, s)| s > 0);
        blocks.sort_unstable();
        JordanData { blocks }
    }

    pub fn blocks(&self) -> &[(u32, usize)] {
        &self.blocks
    }

    /// Total size, i.e. the rank of the local system.
    pub fn total(&self) -> usize {
        self.blocks.iter().map(|&(_, s)| s).sum()
    }

    /// Number of blocks with eigenvalue `a`; for `a = 1` this is the
    /// dimension of the fixed space.
    pub fn blocks_with_eigenvalue(&self, a: u32) -> usize {
        self.blocks.iter().filter(|&&(e, _)| e == a).count()
    }

    pub fn fixed_dim(&self) -> usize {
        self.blocks_with_eigenvalue(1)
    }

    /// Codimension of the fixed space.
    pub fn drop(&self) -> usize {
        self.total() - self.fixed_dim()
    }

    /// Blocks other than trivial `(1, 1)` blocks.
    pub fn non_trivial(&self) -> JordanData {
        JordanData::new(
            self.blocks
                .iter()
                .copied()
                .filter(|&b| b != (1, 1))
                .collect(),
        )
    }

    pub fn max_block(&self) -> usize {
        self.blocks.iter().map(|&(_, s)| s).max().unwrap_or(0)
    }

    pub fn eigenvalues(&self) -> Vec<u32> {
        let mut e: Vec<u32> = self.blocks.iter().map(|&(a, _)| a).collect();
        e.dedup();
        e
    }

    /// `rank((A − a)^k)` as implied by the block structure.
    pub fn rank_of_power(&self, a: u32, k: usize) -> usize {
        self.total()
            - self
                .blocks
                .iter()
                .filter(|&&(e, _)| e == a)
                .map(|&(_, s)| s.min(k))
                .sum::<usize>()
    }

    /// Adds `extra` trivial blocks.
    pub fn with_trivial(&self, extra: usize) -> JordanData {
        let mut b = self.blocks.clone();
        b.extend(std::iter::repeat((1, 1)).take(extra));
        JordanData::new(b)
    }
}

impl fmt::Display for JordanData {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .blocks
            .iter()
            .map(|(a, s)| format!("({a},{s})"))
            .collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

/// Jordan type of an invertible matrix whose spectrum lies in `F_ℓ`.
///
/// Eigenvalues are found by scanning `F_ℓ^×`; block counts come from the
/// rank sequence of `(A − a)^k`.
pub fn jordan_type(a: &Matrix) -> Result<JordanData> {
    if !a.is_square() {
        return Err(Error::Shape("jordan_type of a non-square matrix".into()));
    }
    let n = a.rows();
    let prime: Prime = a.prime();
    let mut blocks = Vec::new();
    let mut covered = 0;
    for ev in 1..prime.get() {
        let shifted = a.minus_scalar(ev);
        let mut ranks = vec![n];
        let mut power = Matrix::identity(prime, n);
        loop {
            power = power.mul_mat(&shifted);
            let r = power.rank();
            let prev = *ranks.last().unwrap();
            ranks.push(r);
            if r == prev {
                break;
            }
        }
        let gen_dim = n - *ranks.last().unwrap();
        if gen_dim == 0 {
            continue;
        }
        covered += gen_dim;
        // ≥k blocks: ranks[k-1] - ranks[k]; exactly k: difference of consecutive
        let at_least: Vec<usize> = ranks.windows(2).map(|w| w[0] - w[1]).collect();
        for k in 1..=at_least.len() {
            let next = at_least.get(k).copied().unwrap_or(0);
            let exact = at_least[k - 1] - next;
            blocks.extend(std::iter::repeat((ev, k)).take(exact));
        }
    }
    if covered != n {
        return Err(Error::NonSplitSpectrum {
            found: covered,
            dim: n,
        });
    }
    Ok(JordanData::new(blocks))
}

/// Jordan block `J(a, size)` in upper-triangular form.
pub fn jordan_block(prime: Prime, a: u32, size: usize) -> Matrix {
    let mut m = Matrix::scalar(prime, size, a);
    for i in 0..size.saturating_sub(1) {
        m.set(i, i + 1, 1);
    }
    m
}

/// Block-diagonal realisation of a Jordan type.
pub fn jordan_matrix(prime: Prime, data: &JordanData) -> Matrix {
    let blocks: Vec<Matrix> = data
        .blocks()
        .iter()
        .map(|&(a, s)| jordan_block(prime, a, s))
        .collect();
    Matrix::block_diag(prime, &blocks)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(p: u32) -> Prime {
        Prime::new(p).unwrap()
    }

    #[test]
    fn identity_and_unipotent() {
        let p = f(5);
        let id = jordan_type(&Matrix::identity(p, 3)).unwrap();
        assert_eq!(id.blocks(), &[(1, 1), (1, 1), (1, 1)]);
        let u = Matrix::from_rows(p, &[[1, 1], [0, 1]]).unwrap();
        assert_eq!(jordan_type(&u).unwrap().blocks(), &[(1, 2)]);
    }

    #[test]
    fn square_root_of_minus_one() {
        // x^2 + 1 = (x - 2)(x + 2) mod 5
        let p = f(5);
        assert_eq!(p.mul(2, 2), 4);
        assert_eq!(p.mul(3, 3), 4);
        let a = Matrix::from_rows(p, &[[0, 4], [1, 0]]).unwrap();
        assert_eq!(jordan_type(&a).unwrap().blocks(), &[(2, 1), (3, 1)]);
    }

    #[test]
    fn non_split_is_an_error() {
        // x^2 + 1 is irreducible mod 3
        let p = f(3);
        let a = Matrix::from_rows(p, &[[0, 2], [1, 0]]).unwrap();
        assert!(matches!(
            jordan_type(&a),
            Err(Error::NonSplitSpectrum { found: 0, dim: 2 })
        ));
    }

    #[test]
    fn mixed_blocks_round_trip() {
        let p = f(7);
        let data = JordanData::new(vec![(1, 3), (1, 1), (6, 2), (3, 1)]);
        let m = jordan_matrix(p, &data);
        assert_eq!(jordan_type(&m).unwrap(), data);
        assert_eq!(data.drop(), 5);
        assert_eq!(data.non_trivial().blocks(), &[(1, 3), (3, 1), (6, 2)]);
    }
}
