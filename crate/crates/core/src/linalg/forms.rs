use std::fmt;

use super::field::Prime;
use super::matrix::{dot, Matrix};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Parity {
    Symmetric,
    Alternating,
}

impl fmt::Display for Parity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Parity::Symmetric => "symmetric",
            Parity::Alternating => "alternating",
        })
    }
}

/// A bilinear pairing `⟨x, y⟩ = xᵀ·G·y` tagged symmetric or alternating.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BilinearForm {
    gram: Matrix,
    parity: Parity,
}

impl BilinearForm {
    pub fn new(gram: Matrix, parity: Parity) -> Result<Self> {
        if !gram.is_square() {
            return Err(Error::Shape("Gram matrix must be square".into()));
        }
        let t = gram.transpose();
        let ok = match parity {
            Parity::Symmetric => t == gram,
            Parity::Alternating => t == gram.neg() && (0..gram.rows()).all(|i| gram.get(i, i) == 0),
        };
        if !ok {
            return Err(Error::BadForm(format!("Gram matrix is not {parity}")));
        }
        Ok(BilinearForm { gram, parity })
    }

    /// Classifies a Gram matrix as symmetric or alternating, if it is either.
    pub fn detect(gram: Matrix) -> Result<Self> {
        if gram.transpose() == gram {
            Self::new(gram, Parity::Symmetric)
        } else {
            Self::new(gram, Parity::Alternating)
        }
    }

    /// The dot product `Σ x_i y_i`.
    pub fn standard_symmetric(prime: Prime, n: usize) -> Self {
        BilinearForm {
            gram: Matrix::identity(prime, n),
            parity: Parity::Symmetric,
        }
    }

    /// `⟨e_{2i}, e_{2i+1}⟩ = 1 = −⟨e_{2i+1}, e_{2i}⟩`.
    pub fn standard_alternating(prime: Prime, n: usize) -> Result<Self> {
        if n % 2 == 1 {
            return Err(Error::BadForm(
                "alternating forms need even dimension".into(),
            ));
        }
        let mut g = Matrix::zeros(prime, n, n);
        for i in (0..n).step_by(2) {
            g.set(i, i + 1, 1);
            g.set(i + 1, i, prime.neg(1));
        }
        Ok(BilinearForm {
            gram: g,
            parity: Parity::Alternating,
        })
    }

    /// Symmetric form with Gram matrix `diag(entries)`.
    pub fn diagonal(prime: Prime, entries: &[u32]) -> Self {
        let mut g = Matrix::zeros(prime, entries.len(), entries.len());
        for (i, &e) in entries.iter().enumerate() {
            g.set(i, i, e);
        }
        BilinearForm {
            gram: g,
            parity: Parity::Symmetric,
        }
    }

    /// Symmetric form on `2m` coordinates `e_1..e_m, f_1..f_m` with
    /// `⟨e_i, f_i⟩ = 1` and everything else zero.
    pub fn hyperbolic(prime: Prime, m: usize) -> Self {
        let mut g = Matrix::zeros(prime, 2 * m, 2 * m);
        for i in 0..m {
            g.set(i, m + i, 1);
            g.set(m + i, i, 1);
        }
        BilinearForm {
            gram: g,
            parity: Parity::Symmetric,
        }
    }

    pub fn gram(&self) -> &Matrix {
        &self.gram
    }

    pub fn parity(&self) -> Parity {
        self.parity
    }

    pub fn dim(&self) -> usize {
        self.gram.rows()
    }

    pub fn prime(&self) -> Prime {
        self.gram.prime()
    }

    pub fn pair(&self, x: &[u32], y: &[u32]) -> u32 {
        dot(self.prime(), x, &self.gram.apply(y))
    }

    pub fn is_non_degenerate(&self) -> bool {
        self.gram.det() != 0
    }
}

/// Basis of `{M : Aᵀ·M·A = M for every generator A}`.
pub fn invariant_forms(gens: &[Matrix]) -> Result<Vec<Matrix>> {
    let Some(first) = gens.first() else {
        return Err(Error::Shape("invariant_forms needs a generator".into()));
    };
    let n = first.rows();
    let prime = first.prime();
    if gens.iter().any(|g| !g.is_square() || g.rows() != n) {
        return Err(Error::Shape("generators must be square of one size".into()));
    }
    let nn = n * n;
    // unknown M_{ij} at column i*n+j; equation (p,q) per generator:
    // Σ_{ij} A_{ip} A_{jq} M_{ij} − M_{pq} = 0
    let mut sys = Matrix::zeros(prime, gens.len() * nn, nn);
    for (g_idx, a) in gens.iter().enumerate() {
        for pp in 0..n {
            for q in 0..n {
                let row = g_idx * nn + pp * n + q;
                for i in 0..n {
                    let aip = a.get(i, pp);
                    if aip == 0 {
                        continue;
                    }
                    for j in 0..n {
                        let c = prime.mul(aip, a.get(j, q));
                        let col = i * n + j;
                        let v = prime.add(sys.get(row, col), c);
                        sys.set(row, col, v);
                    }
                }
                let col = pp * n + q;
                let v = prime.sub(sys.get(row, col), 1);
                sys.set(row, col, v);
            }
        }
    }
    let ker = sys.kernel();
    Ok(ker
        .basis()
        .iter()
        .map(|v| Matrix::from_residues(prime, n, n, v.clone()).expect("shape"))
        .collect())
}

/// The unique (up to scalar) invariant pairing of a generator set.
///
/// Fails unless the invariant-form space is one-dimensional and its
/// generator is non-degenerate and symmetric or alternating.
pub fn unique_invariant_form(gens: &[Matrix]) -> Result<BilinearForm> {
    let forms = invariant_forms(gens)?;
    if forms.len() != 1 {
        return Err(Error::NoUniquePairing(forms.len()));
    }
    let gram = forms.into_iter().next().unwrap();
    if gram.det() == 0 {
        return Err(Error::BadForm("invariant form is degenerate".into()));
    }
    BilinearForm::detect(gram)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(p: u32) -> Prime {
        Prime::new(p).unwrap()
    }

    #[test]
    fn identity_fixes_all_forms() {
        let p = f(5);
        assert_eq!(invariant_forms(&[Matrix::identity(p, 2)]).unwrap().len(), 4);
        assert_eq!(
            invariant_forms(&[Matrix::scalar(p, 2, 4)]).unwrap().len(),
            4
        );
    }

    #[test]
    fn sl2_generators_fix_only_the_alternating_form() {
        let p = f(5);
        let u = Matrix::from_rows(p, &[[1, 1], [0, 1]]).unwrap();
        let l = Matrix::from_rows(p, &[[1, 0], [1, 1]]).unwrap();
        // brute force over all 625 Gram matrices
        let mut sols = Vec::new();
        for code in 0..625u32 {
            let e = vec![code % 5, (code / 5) % 5, (code / 25) % 5, code / 125];
            let m = Matrix::from_residues(p, 2, 2, e).unwrap();
            if u.preserves(&m) && l.preserves(&m) {
                sols.push(m);
            }
        }
        assert_eq!(sols.len(), 5);
        let basis = invariant_forms(&[u.clone(), l.clone()]).unwrap();
        assert_eq!(basis.len(), 1);
        let std = Matrix::from_rows(p, &[[0, 1], [4, 0]]).unwrap();
        assert!(sols.contains(&std));
        let b = &basis[0];
        assert!((1..5).any(|c| b.scale(c) == std));
        let form = unique_invariant_form(&[u, l]).unwrap();
        assert_eq!(form.parity(), Parity::Alternating);
    }

    #[test]
    fn form_parity_checks() {
        let p = f(7);
        let alt = BilinearForm::standard_alternating(p, 4).unwrap();
        assert_eq!(alt.parity(), Parity::Alternating);
        assert!(alt.is_non_degenerate());
        assert_eq!(alt.pair(&[1, 0, 0, 0], &[0, 1, 0, 0]), 1);
        assert!(BilinearForm::standard_alternating(p, 3).is_err());
        let bad = Matrix::from_rows(p, &[[1, 2], [3, 1]]).unwrap();
        assert!(BilinearForm::detect(bad).is_err());
    }
}
