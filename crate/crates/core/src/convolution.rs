//! Punctured tuples and the middle convolution `MC_λ`.

use std::fmt;

use crate::error::{Error, Result};
use crate::linalg::{jordan_type, JordanData, Matrix, Prime, Subspace};

/// Puncture label: a residue of `F_ℓ` or an opaque symbol.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Label {
    Residue(u32),
    Symbol(String),
}

impl Label {
    /// Parses a decimal residue or a bare symbol.
    pub fn parse(s: &str) -> Result<Label> {
        let s = s.trim();
        if s.is_empty() || s.chars().any(|c| c.is_whitespace() || c == '#' || c == ',') {
            return Err(Error::Invalid(format!("bad puncture label {s:?}")));
        }
        if s.chars().all(|c| c.is_ascii_digit()) {
            let v: u32 = s
                .parse()
                .map_err(|_| Error::Invalid(format!("bad puncture label {s:?}")))?;
            Ok(Label::Residue(v))
        } else if s.eq_ignore_ascii_case("inf") || s == "∞" {
            Err(Error::Invalid("∞ is never a stored puncture".into()))
        } else {
            Ok(Label::Symbol(s.to_string()))
        }
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Label::Residue(r) => write!(f, "{r}"),
            Label::Symbol(s) => f.write_str(s),
        }
    }
}

/// An ordered tuple of local monodromies `A_1, …, A_r` at finite punctures;
/// the matrix at ∞ is derived so that `A_1·…·A_r·A_∞ = 1`.
///
/// Punctures are ordered by ascending residue, then symbols in insertion
/// order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PuncturedTuple {
    prime: Prime,
    rank: usize,
    punctures: Vec<(Label, Matrix)>,
    infinity: Matrix,
}

impl PuncturedTuple {
    pub fn new(prime: Prime, rank: usize, punctures: Vec<(Label, Matrix)>) -> Result<Self> {
        for (i, (label, m)) in punctures.iter().enumerate() {
            if let Label::Residue(r) = label {
                if *r >= prime.get() {
                    return Err(Error::ResidueOutOfRange {
                        value: *r as u64,
                        prime: prime.get(),
                    });
                }
            }
            if punctures[..i].iter().any(|(l, _)| l == label) {
                return Err(Error::Invalid(format!("repeated puncture label {label}")));
            }
            if !m.is_square() || m.rows() != rank || m.prime() != prime {
                return Err(Error::Shape(format!(
                    "matrix at {label} is not {rank}x{rank} over F_{prime}"
                )));
            }
            if !m.is_invertible() {
                return Err(Error::Singular);
            }
        }
        let mut punctures = punctures;
        // stable: symbols keep insertion order
        punctures.sort_by_key(|(l, _)| match l {
            Label::Residue(r) => (0, *r),
            Label::Symbol(_) => (1, 0),
        });
        let product = punctures
            .iter()
            .fold(Matrix::identity(prime, rank), |acc, (_, m)| acc.mul_mat(m));
        let infinity = product.inverse()?;
        Ok(PuncturedTuple {
            prime,
            rank,
            punctures,
            infinity,
        })
    }

    pub fn prime(&self) -> Prime {
        self.prime
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn len(&self) -> usize {
        self.punctures.len()
    }

    pub fn is_empty(&self) -> bool {
        self.punctures.is_empty()
    }

    pub fn punctures(&self) -> &[(Label, Matrix)] {
        &self.punctures
    }

    pub fn labels(&self) -> Vec<Label> {
        self.punctures.iter().map(|(l, _)| l.clone()).collect()
    }

    pub fn matrices(&self) -> Vec<Matrix> {
        self.punctures.iter().map(|(_, m)| m.clone()).collect()
    }

    pub fn matrix_at(&self, label: &Label) -> Option<&Matrix> {
        self.punctures
            .iter()
            .find(|(l, _)| l == label)
            .map(|(_, m)| m)
    }

    pub fn infinity(&self) -> &Matrix {
        &self.infinity
    }

    /// `A_1·…·A_r·A_∞ == 1`.
    pub fn product_is_identity(&self) -> bool {
        self.punctures
            .iter()
            .fold(Matrix::identity(self.prime, self.rank), |acc, (_, m)| {
                acc.mul_mat(m)
            })
            .mul_mat(&self.infinity)
            .is_identity()
    }

    /// Jordan data at every finite puncture.
    pub fn local_jordan(&self) -> Result<Vec<(Label, JordanData)>> {
        self.punctures
            .iter()
            .map(|(l, m)| Ok((l.clone(), jordan_type(m)?)))
            .collect()
    }

    pub fn infinity_jordan(&self) -> Result<JordanData> {
        jordan_type(&self.infinity)
    }

    /// Finite punctures with non-identity monodromy.
    pub fn ramified_count(&self) -> usize {
        self.punctures
            .iter()
            .filter(|(_, m)| !m.is_identity())
            .count()
    }
}

/// Rank of `MC_λ` predicted from local data: the sum over finite punctures
/// of the codimension of the fixed space, minus the dimension of the fixed
/// space of `λ·A_∞⁻¹`, i.e. the number of ∞-blocks with eigenvalue `λ`.
pub fn predict_rank(
    finite: &[JordanData],
    infinity: &JordanData,
    lambda: u32,
    prime: Prime,
) -> Result<i64> {
    let n = infinity.total();
    if finite.iter().any(|d| d.total() != n) {
        return Err(Error::Shape("local data of different ranks".into()));
    }
    let lambda = lambda % prime.get();
    if lambda == 0 {
        return Err(Error::Invalid("λ must be nonzero".into()));
    }
    let codims: usize = finite.iter().map(JordanData::drop).sum();
    Ok(codims as i64 - infinity.blocks_with_eigenvalue(lambda) as i64)
}

/// Image of the non-trivial Jordan blocks at a finite puncture under `MC_λ`:
/// `U_n ↦ U_{n−1} ⊗ λ`, `U_n ⊗ λ⁻¹ ↦ U_{n+1}`, any other block `B ↦ B ⊗ λ`.
/// Trivial blocks are not mapped; their number follows from the output rank.
pub fn map_local_jordan(data: &JordanData, lambda: u32, prime: Prime) -> Result<JordanData> {
    let inv = prime
        .inv(lambda)
        .ok_or_else(|| Error::Invalid("λ must be nonzero".into()))?;
    if lambda == 1 {
        return Ok(data.non_trivial());
    }
    let mapped = data
        .non_trivial()
        .blocks()
        .iter()
        .map(|&(a, n)| {
            if a == 1 {
                (lambda, n - 1)
            } else if a == inv {
                (1, n + 1)
            } else {
                (prime.mul(a, lambda), n)
            }
        })
        .collect();
    Ok(JordanData::new(mapped))
}

/// Quadratic twist: negates the monodromy at each listed puncture, inserting
/// `−1` at labels that were not punctures and dropping punctures whose
/// monodromy becomes trivial.
pub fn twist_quadratic(t: &PuncturedTuple, points: &[Label]) -> Result<PuncturedTuple> {
    for (i, l) in points.iter().enumerate() {
        if points[..i].contains(l) {
            return Err(Error::Invalid(format!("repeated twist point {l}")));
        }
    }
    let mut punctures = t.punctures.clone();
    for l in points {
        match punctures.iter().position(|(x, _)| x == l) {
            Some(i) => {
                let m = punctures[i].1.neg();
                if m.is_identity() {
                    // twisting −1 away leaves no puncture
                    punctures.remove(i);
                } else {
                    punctures[i].1 = m;
                }
            }
            None => punctures.push((l.clone(), Matrix::scalar(t.prime, t.rank, t.prime.neg(1)))),
        }
    }
    let out = PuncturedTuple::new(t.prime, t.rank, punctures)?;
    debug_assert!(out.product_is_identity());
    Ok(out)
}

/// Middle convolution `MC_λ(T)`.
///
/// On `V^r`, `B_k` is the identity outside the `k`-th block row, which is
/// `(λ(A_1 − 1), …, λ(A_{k−1} − 1), λA_k, A_{k+1} − 1, …, A_r − 1)`. The
/// result is the action on the quotient by `K + L`, where `K` is the
/// blockwise sum of the `ker(A_j − 1)` and `L` the common fixed space of the
/// `B_k`. The output rank is checked against [`predict_rank`]. `MC_1` is the
/// identity.
pub fn middle_convolve(t: &PuncturedTuple, lambda: u32) -> Result<PuncturedTuple> {
    let prime = t.prime;
    if lambda == 0 || lambda >= prime.get() {
        return Err(Error::Invalid(format!(
            "λ = {lambda} is not a nonzero residue mod {prime}"
        )));
    }
    if t.rank == 1 && t.ramified_count() < 2 {
        return Err(Error::NotInCategory(
            "rank-one tuple needs at least two ramified finite punctures".into(),
        ));
    }
    if lambda == 1 {
        return Ok(t.clone());
    }
    let n = t.rank;
    let r = t.len();
    let big = n * r;
    let mats = t.matrices();
    let ones: Vec<Matrix> = mats.iter().map(|a| a.minus_scalar(1)).collect();

    let mut bs = Vec::with_capacity(r);
    for k in 0..r {
        let mut b = Matrix::identity(prime, big);
        for j in 0..r {
            let block = if j < k {
                ones[j].scale(lambda)
            } else if j == k {
                mats[k].scale(lambda)
            } else {
                ones[j].clone()
            };
            for a in 0..n {
                for c in 0..n {
                    b.set(k * n + a, j * n + c, block.get(a, c));
                }
            }
        }
        bs.push(b);
    }

    // K: ker(A_j − 1) embedded in block j
    let mut k_vecs = Vec::new();
    for (j, one) in ones.iter().enumerate() {
        for v in one.kernel().basis() {
            let mut w = vec![0u32; big];
            w[j * n..(j + 1) * n].copy_from_slice(v);
            k_vecs.push(w);
        }
    }
    let k_space = Subspace::from_vectors(prime, big, k_vecs);
    // L: common fixed space
    let l_space = bs
        .iter()
        .map(|b| b.minus_scalar(1).kernel())
        .reduce(|acc, s| acc.intersection(&s))
        .unwrap_or_else(|| Subspace::full(prime, big));
    let w = k_space.sum(&l_space);
    debug_assert!(bs.iter().all(|b| w.is_invariant_under(b)));

    let predicted = {
        let codims: usize = ones.iter().map(|o| o.rank()).sum();
        let fixed_inf = t.infinity.minus_scalar(lambda).kernel().dim();
        codims as i64 - fixed_inf as i64
    };
    let got = big - w.dim();
    if predicted < 0 || got as i64 != predicted {
        return Err(Error::DegenerateQuotient {
            got,
            predicted: predicted.max(0) as usize,
        });
    }
    let out: Vec<(Label, Matrix)> = t
        .punctures
        .iter()
        .zip(&bs)
        .map(|((l, _), b)| (l.clone(), w.quotient_action(b)))
        .collect();
    if got == 0 {
        return Err(Error::NotInCategory("convolution has rank zero".into()));
    }
    PuncturedTuple::new(prime, got, out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(p: u32) -> Prime {
        Prime::new(p).unwrap()
    }

    fn scalar_tuple(p: Prime, entries: &[(u32, u32)]) -> PuncturedTuple {
        PuncturedTuple::new(
            p,
            1,
            entries
                .iter()
                .map(|&(l, a)| (Label::Residue(l), Matrix::scalar(p, 1, a)))
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn kummer_convolution_gives_two_transvections() {
        let p = f(5);
        let t = scalar_tuple(p, &[(0, 4), (1, 4)]);
        assert!(t.infinity().is_identity());
        let mc = middle_convolve(&t, 4).unwrap();
        assert_eq!(mc.rank(), 2);
        for (_, m) in mc.punctures() {
            assert_eq!(m.det(), 1);
            assert_eq!(m.minus_scalar(1).rank(), 1);
        }
        assert!(mc.product_is_identity());
    }

    #[test]
    fn predict_rank_examples() {
        let p = f(7);
        let minus = JordanData::new(vec![(6, 1)]);
        let triv = JordanData::new(vec![(1, 1)]);
        for g in 1..=3 {
            let finite = vec![minus.clone(); 2 * g];
            assert_eq!(predict_rank(&finite, &triv, 6, p).unwrap(), 2 * g as i64);
        }
        let bad = JordanData::new(vec![(1, 2)]);
        assert!(predict_rank(&[bad], &triv, 6, p).is_err());
    }

    #[test]
    fn map_local_jordan_examples() {
        let p = f(5);
        let m1 = JordanData::new(vec![(4, 1)]);
        assert_eq!(map_local_jordan(&m1, 4, p).unwrap().blocks(), &[(1, 2)]);
        let m2 = JordanData::new(vec![(4, 1), (4, 1)]);
        assert_eq!(
            map_local_jordan(&m2, 4, p).unwrap().blocks(),
            &[(1, 2), (1, 2)]
        );
        // a ∉ {1, λ⁻¹}: λ = 2, λ⁻¹ = 3, a = 4 ↦ 8 = 3
        let m3 = JordanData::new(vec![(4, 1)]);
        assert_eq!(map_local_jordan(&m3, 2, p).unwrap().blocks(), &[(3, 1)]);
        // U_3 ↦ U_2 ⊗ λ
        let u3 = JordanData::new(vec![(1, 3), (1, 1)]);
        assert_eq!(map_local_jordan(&u3, 2, p).unwrap().blocks(), &[(2, 2)]);
    }

    #[test]
    fn twist_examples() {
        let p = f(5);
        let t = scalar_tuple(p, &[(0, 4), (1, 4)]);
        let leg = middle_convolve(&t, 4).unwrap();
        let tw = twist_quadratic(&leg, &[Label::Residue(3)]).unwrap();
        assert_eq!(tw.len(), 3);
        assert_eq!(
            tw.matrix_at(&Label::Residue(3)).unwrap().as_scalar(),
            Some(4)
        );
        assert_eq!(tw.infinity(), &leg.infinity().neg());
        let back = twist_quadratic(&tw, &[Label::Residue(3)]).unwrap();
        assert_eq!(back, leg);
        // twisting at an existing transvection puncture: −T has drop 2
        let at0 = twist_quadratic(&leg, &[Label::Residue(0)]).unwrap();
        let m = at0.matrix_at(&Label::Residue(0)).unwrap();
        assert_eq!(m, &leg.matrix_at(&Label::Residue(0)).unwrap().neg());
        assert_eq!(m.minus_scalar(1).rank(), 2);
        assert!(twist_quadratic(&leg, &[Label::Residue(3), Label::Residue(3)]).is_err());
    }

    #[test]
    fn rank_one_with_one_ramified_point_is_rejected() {
        let p = f(5);
        let t = scalar_tuple(p, &[(0, 4), (1, 1)]);
        assert!(matches!(
            middle_convolve(&t, 4),
            Err(Error::NotInCategory(_))
        ));
        assert!(middle_convolve(&t, 0).is_err());
    }

    #[test]
    fn labels_are_ordered() {
        let p = f(7);
        let t = PuncturedTuple::new(
            p,
            1,
            vec![
                (Label::Symbol("b".into()), Matrix::scalar(p, 1, 2)),
                (Label::Residue(5), Matrix::scalar(p, 1, 3)),
                (Label::Symbol("a".into()), Matrix::scalar(p, 1, 4)),
                (Label::Residue(2), Matrix::scalar(p, 1, 5)),
            ],
        )
        .unwrap();
        let labels: Vec<String> = t.labels().iter().map(|l| l.to_string()).collect();
        assert_eq!(labels, vec!["2", "5", "b", "a"]);
        assert!(Label::parse("inf").is_err());
        assert_eq!(Label::parse("12").unwrap(), Label::Residue(12));
    }
}
