//! Builders for the hyperelliptic and quadratic-twist monodromy systems.

use crate::classical::{classify_element, ElementClass, FormSpace};
use crate::convolution::{middle_convolve, twist_quadratic, Label, PuncturedTuple};
use crate::error::{Error, Result};
use crate::linalg::{unique_invariant_form, BilinearForm, Matrix, Parity, Prime};

/// A tuple together with its invariant pairing and local classification.
#[derive(Clone, Debug)]
pub struct MonodromySystem {
    pub tuple: PuncturedTuple,
    pub pairing: BilinearForm,
    /// Classification of each finite puncture, in tuple order.
    pub classifications: Vec<(Label, ElementClass)>,
    pub expected_dim: usize,
}

impl MonodromySystem {
    fn build(tuple: PuncturedTuple, expected_dim: usize, parity: Parity) -> Result<Self> {
        if tuple.rank() != expected_dim {
            return Err(Error::Invalid(format!(
                "system has rank {}, expected {expected_dim}",
                tuple.rank()
            )));
        }
        let pairing = unique_invariant_form(&tuple.matrices())?;
        if pairing.parity() != parity {
            return Err(Error::BadForm(format!(
                "invariant pairing is {}, expected {parity}",
                pairing.parity()
            )));
        }
        let space = FormSpace::new(pairing.clone())?;
        let classifications = tuple
            .punctures()
            .iter()
            .map(|(l, m)| Ok((l.clone(), classify_element(m, &space)?)))
            .collect::<Result<_>>()?;
        Ok(MonodromySystem {
            tuple,
            pairing,
            classifications,
            expected_dim,
        })
    }

    pub fn space(&self) -> FormSpace {
        FormSpace::new(self.pairing.clone()).expect("pairing checked at construction")
    }

    pub fn generators(&self) -> Vec<Matrix> {
        self.tuple.matrices()
    }

    pub fn dim(&self) -> usize {
        self.tuple.rank()
    }
}

/// Rank-one tuple with monodromy `−1` at every point.
pub fn kummer_tuple(points: &[Label], prime: Prime) -> Result<PuncturedTuple> {
    if points.len() < 2 {
        return Err(Error::BadLocus(
            "a Kummer tuple needs at least two points".into(),
        ));
    }
    let minus = Matrix::scalar(prime, 1, prime.neg(1));
    let punctures = points.iter().map(|l| (l.clone(), minus.clone())).collect();
    PuncturedTuple::new(prime, 1, punctures)
}

/// Default puncture labels for `count` points: residues `0, 1, …` while
/// they last, then symbols `p<ℓ>, p<ℓ+1>, …`.
pub fn default_points(count: usize, prime: Prime) -> Vec<Label> {
    (0..count)
        .map(|i| {
            if i < prime.get() as usize {
                Label::Residue(i as u32)
            } else {
                Label::Symbol(format!("p{i}"))
            }
        })
        .collect()
}

/// `MC_{−1}` of the Kummer tuple at `2g` points.
pub fn hyperelliptic_system(
    genus: usize,
    prime: Prime,
    points: Option<&[Label]>,
) -> Result<MonodromySystem> {
    if genus == 0 {
        return Err(Error::Invalid("genus must be positive".into()));
    }
    let owned;
    let points = match points {
        Some(p) => p,
        None => {
            owned = default_points(2 * genus, prime);
            &owned
        }
    };
    if points.len() != 2 * genus {
        return Err(Error::BadLocus(format!(
            "genus {genus} needs {} points, got {}",
            2 * genus,
            points.len()
        )));
    }
    let kummer = kummer_tuple(points, prime)?;
    let tuple = middle_convolve(&kummer, prime.neg(1))?;
    MonodromySystem::build(tuple, 2 * genus, Parity::Alternating)
}

/// Dimension of the twist-family system with `d − 1` roots: `2d` or `2d − 1`.
pub fn twist_family_dim(d: usize) -> usize {
    if d.is_multiple_of(2) {
        2 * d
    } else {
        2 * d - 1
    }
}

/// `(deg M_f, deg A_f)` of the Legendre twist family of degree `d`.
pub fn twist_family_degrees(d: usize) -> (usize, usize) {
    if d.is_multiple_of(2) {
        (2, d + 1)
    } else {
        (3, d)
    }
}

/// `deg_M + 2·deg_A + 4·(genus − 1)`.
pub fn dim_formula(deg_m: usize, deg_a: usize, genus: usize) -> Result<usize> {
    let v = deg_m as i64 + 2 * deg_a as i64 + 4 * (genus as i64 - 1);
    if v < 0 {
        return Err(Error::NegativeDimension(v));
    }
    Ok(v as usize)
}

/// `MC_{−1}` of the Legendre tuple twisted at the roots of `g`.
pub fn twist_family_system(roots: &[Label], prime: Prime) -> Result<MonodromySystem> {
    if prime.get() < 5 {
        return Err(Error::Invalid(format!(
            "twist families need ℓ ≥ 5, got {prime}"
        )));
    }
    if roots.is_empty() {
        return Err(Error::BadLocus("at least one root is required".into()));
    }
    for (i, l) in roots.iter().enumerate() {
        match l {
            Label::Residue(0) | Label::Residue(1) => {
                return Err(Error::BadLocus(format!("root {l} lies on {{0, 1}}")))
            }
            Label::Residue(_) => {}
            Label::Symbol(_) => return Err(Error::BadLocus(format!("root {l} is not a residue"))),
        }
        if roots[..i].contains(l) {
            return Err(Error::BadLocus(format!("repeated root {l}")));
        }
    }
    let legendre = hyperelliptic_system(1, prime, Some(&[Label::Residue(0), Label::Residue(1)]))?;
    let twisted = twist_quadratic(&legendre.tuple, roots)?;
    let tuple = middle_convolve(&twisted, prime.neg(1))?;
    let d = roots.len() + 1;
    MonodromySystem::build(tuple, twist_family_dim(d), Parity::Symmetric)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classical::ElementTag;

    fn f(p: u32) -> Prime {
        Prime::new(p).unwrap()
    }

    fn residues(v: &[u32]) -> Vec<Label> {
        v.iter().map(|&x| Label::Residue(x)).collect()
    }

    #[test]
    fn kummer_examples() {
        let t = kummer_tuple(&residues(&[0, 1]), f(5)).unwrap();
        assert!(t.infinity().is_identity());
        let t = kummer_tuple(&residues(&[0, 1, 2]), f(5)).unwrap();
        assert_eq!(t.infinity().get(0, 0), 4);
        assert!(kummer_tuple(&residues(&[0]), f(5)).is_err());
    }

    #[test]
    fn hyperelliptic_genus_one() {
        for p in [3, 5, 7, 11] {
            let s = hyperelliptic_system(1, f(p), None).unwrap();
            assert_eq!(s.dim(), 2);
            assert_eq!(s.pairing.parity(), Parity::Alternating);
            assert!(s
                .classifications
                .iter()
                .all(|(_, c)| c.tag == ElementTag::Transvection));
        }
    }

    #[test]
    fn symbols_beyond_the_field() {
        let s = hyperelliptic_system(2, f(3), None).unwrap();
        assert_eq!(s.dim(), 4);
        assert_eq!(s.tuple.labels()[3], Label::Symbol("p3".into()));
    }

    #[test]
    fn twist_dimensions() {
        let s = twist_family_system(&residues(&[2]), f(5)).unwrap();
        assert_eq!(s.dim(), 4);
        let s = twist_family_system(&residues(&[2, 3]), f(5)).unwrap();
        assert_eq!(s.dim(), 5);
        let tags: Vec<ElementTag> = s.classifications.iter().map(|(_, c)| c.tag).collect();
        assert_eq!(
            tags,
            vec![
                ElementTag::Reflection,
                ElementTag::Reflection,
                ElementTag::IsotropicShear,
                ElementTag::IsotropicShear
            ]
        );
    }

    #[test]
    fn twist_bad_locus() {
        assert!(matches!(
            twist_family_system(&residues(&[1, 3]), f(5)),
            Err(Error::BadLocus(_))
        ));
        assert!(twist_family_system(&residues(&[2]), f(3)).is_err());
    }

    #[test]
    fn dim_formula_examples() {
        for d in 2..8 {
            let (m, a) = twist_family_degrees(d);
            assert_eq!(dim_formula(m, a, 0).unwrap(), twist_family_dim(d));
        }
        assert_eq!(dim_formula(0, 1, 0), Err(Error::NegativeDimension(-2)));
    }
}
