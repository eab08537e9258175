//! Geometry of symplectic and orthogonal spaces over `F_ℓ`.
//!
//! Elements are classified by their drop (codimension of the fixed space):
//! drop-1 isometries are pseudoreflections, split by determinant into
//! reflections and transvections; non-trivial unipotent isometries with
//! `(σ − 1)² = 0` are isotropic shears.

use std::fmt;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::{Error, Result};
use crate::linalg::{dot, BilinearForm, Matrix, Parity, Prime, Subspace};

/// A non-degenerate symmetric or alternating space `(V, ⟨·,·⟩)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FormSpace {
    form: BilinearForm,
}

impl FormSpace {
    pub fn new(form: BilinearForm) -> Result<Self> {
        if !form.is_non_degenerate() {
            return Err(Error::BadForm("form is degenerate".into()));
        }
        if form.parity() == Parity::Alternating && form.dim() % 2 == 1 {
            return Err(Error::BadForm(
                "alternating form on an odd-dimensional space".into(),
            ));
        }
        Ok(FormSpace { form })
    }

    pub fn symplectic(prime: Prime, dim: usize) -> Result<Self> {
        Self::new(BilinearForm::standard_alternating(prime, dim)?)
    }

    /// Orthogonal space with the standard dot product.
    pub fn orthogonal(prime: Prime, dim: usize) -> Result<Self> {
        Self::new(BilinearForm::standard_symmetric(prime, dim))
    }

    pub fn form(&self) -> &BilinearForm {
        &self.form
    }

    pub fn gram(&self) -> &Matrix {
        self.form.gram()
    }

    pub fn parity(&self) -> Parity {
        self.form.parity()
    }

    pub fn dim(&self) -> usize {
        self.form.dim()
    }

    pub fn prime(&self) -> Prime {
        self.form.prime()
    }

    pub fn pair(&self, x: &[u32], y: &[u32]) -> u32 {
        self.form.pair(x, y)
    }

    pub fn is_isometry(&self, g: &Matrix) -> bool {
        g.is_square() && g.rows() == self.dim() && g.preserves(self.gram())
    }

    fn check_isometry(&self, g: &Matrix) -> Result<()> {
        if self.is_isometry(g) {
            Ok(())
        } else {
            Err(Error::NotAnIsometry)
        }
    }

    /// Reflection `x ↦ x − 2⟨x,r⟩/⟨r,r⟩·r` in an anisotropic root (symmetric spaces).
    pub fn reflection(&self, root: &[u32]) -> Result<Matrix> {
        if self.parity() != Parity::Symmetric {
            return Err(Error::BadForm("reflections need a symmetric form".into()));
        }
        let p = self.prime();
        let q = self.pair(root, root);
        let inv = p
            .inv(q)
            .ok_or_else(|| Error::Invalid("root is isotropic".into()))?;
        let c = p.neg(p.mul(2, inv));
        Ok(self.rank_one_update(root, c))
    }

    /// Transvection `x ↦ x + c⟨x,v⟩·v` (alternating spaces).
    pub fn transvection(&self, v: &[u32], c: u32) -> Result<Matrix> {
        if self.parity() != Parity::Alternating {
            return Err(Error::BadForm(
                "transvections need an alternating form".into(),
            ));
        }
        Ok(self.rank_one_update(v, c))
    }

    /// `I + c·v·(G v)ᵀ`, i.e. `x ↦ x + c⟨x, v⟩ v`.
    fn rank_one_update(&self, v: &[u32], c: u32) -> Matrix {
        let p = self.prime();
        let n = self.dim();
        // ⟨x, v⟩ = xᵀ G v = (G v) · x
        let gv = self.gram().apply(v);
        let mut m = Matrix::identity(p, n);
        for i in 0..n {
            for j in 0..n {
                let add = p.mul(c, p.mul(v[i], gv[j]));
                m.set(i, j, p.add(m.get(i, j), add));
            }
        }
        m
    }

    /// Siegel element `x ↦ x + ⟨x,w⟩u − ⟨x,u⟩w` for isotropic, mutually
    /// orthogonal `u, w` (symmetric spaces); an isotropic shear of drop 2.
    pub fn siegel(&self, u: &[u32], w: &[u32]) -> Result<Matrix> {
        let p = self.prime();
        if self.parity() != Parity::Symmetric
            || self.pair(u, u) != 0
            || self.pair(w, w) != 0
            || self.pair(u, w) != 0
        {
            return Err(Error::Invalid(
                "siegel element needs orthogonal isotropic vectors".into(),
            ));
        }
        let n = self.dim();
        let gu = self.gram().apply(u);
        let gw = self.gram().apply(w);
        let mut m = Matrix::identity(p, n);
        for i in 0..n {
            for j in 0..n {
                let add = p.sub(p.mul(u[i], gw[j]), p.mul(w[i], gu[j]));
                m.set(i, j, p.add(m.get(i, j), add));
            }
        }
        Ok(m)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ElementTag {
    Identity,
    Reflection,
    Transvection,
    IsotropicShear,
    Other,
}

impl fmt::Display for ElementTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ElementTag::Identity => "Identity",
            ElementTag::Reflection => "Reflection",
            ElementTag::Transvection => "Transvection",
            ElementTag::IsotropicShear => "IsotropicShear",
            ElementTag::Other => "Other",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct ElementClass {
    pub tag: ElementTag,
    pub drop: usize,
}

impl ElementClass {
    pub fn is_pseudoreflection(&self) -> bool {
        matches!(self.tag, ElementTag::Reflection | ElementTag::Transvection)
    }
}

impl fmt::Display for ElementClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (drop {})", self.tag, self.drop)
    }
}

/// Codimension of the fixed space, `rank(γ − 1)`.
pub fn drop(g: &Matrix, space: &FormSpace) -> Result<usize> {
    space.check_isometry(g)?;
    Ok(g.minus_scalar(1).rank())
}

pub fn classify_element(g: &Matrix, space: &FormSpace) -> Result<ElementClass> {
    let d = drop(g, space)?;
    let p = space.prime();
    let tag = if d == 0 {
        ElementTag::Identity
    } else if d == 1 {
        if g.det() == 1 {
            ElementTag::Transvection
        } else {
            debug_assert_eq!(g.det(), p.neg(1));
            ElementTag::Reflection
        }
    } else {
        let n = g.minus_scalar(1);
        if n.mul_mat(&n).is_zero() {
            debug_assert!(n.image().is_totally_isotropic(space.gram()));
            ElementTag::IsotropicShear
        } else {
            ElementTag::Other
        }
    };
    Ok(ElementClass { tag, drop: d })
}

/// `±1` value of the spinor norm or the determinant.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn from_legendre(l: i8) -> Sign {
        if l < 0 {
            Sign::Minus
        } else {
            Sign::Plus
        }
    }

    pub fn mul(self, other: Sign) -> Sign {
        if self == other {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }

    pub fn as_i8(self) -> i8 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }
}

/// Spinor norm of an orthogonal isometry: the product over the roots of a
/// reflection factorisation of the square class of `⟨r, r⟩`.
pub fn spinor_norm(g: &Matrix, space: &FormSpace) -> Result<Sign> {
    let roots = reflection_factorization(g, space, None::<&mut rand::rngs::ThreadRng>)?;
    Ok(spinor_of_roots(space, &roots))
}

pub fn spinor_of_roots(space: &FormSpace, roots: &[Vec<u32>]) -> Sign {
    let p = space.prime();
    roots.iter().fold(Sign::Plus, |acc, r| {
        acc.mul(Sign::from_legendre(p.legendre(space.pair(r, r))))
    })
}

/// Roots `r_1, …, r_k` with `g = refl(r_1)·…·refl(r_k)`.
///
/// Greedy Cartan–Dieudonné: while the residual `h` is not the identity,
/// pick `v` with `w = hv − v` anisotropic and peel off `refl(w)`, which
/// enlarges the fixed space. When the image of `h − 1` is totally isotropic
/// no such `v` exists; then one reflection in an anisotropic vector is
/// peeled off first. Passing an RNG shuffles every candidate list, which
/// yields a different factorisation of the same element.
pub fn reflection_factorization<R: Rng>(
    g: &Matrix,
    space: &FormSpace,
    mut rng: Option<&mut R>,
) -> Result<Vec<Vec<u32>>> {
    if space.parity() != Parity::Symmetric {
        return Err(Error::BadForm("spinor norm needs a symmetric form".into()));
    }
    space.check_isometry(g)?;
    let n = space.dim();
    let p = space.prime();
    let cap = 2 * n;
    let mut roots = Vec::new();
    let mut h = g.clone();

    // candidate vectors: e_i, then e_i + c·e_j
    let mut singles: Vec<Vec<u32>> = (0..n).map(|i| unit(n, i)).collect();
    let mut pairs: Vec<Vec<u32>> = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            for c in 1..p.get() {
                if i < j || c != 1 {
                    let mut v = unit(n, i);
                    v[j] = c;
                    pairs.push(v);
                }
            }
        }
    }

    while !h.is_identity() {
        if roots.len() >= cap {
            return Err(Error::InternalFactorizationFailure(cap));
        }
        if let Some(r) = rng.as_deref_mut() {
            singles.shuffle(r);
            pairs.shuffle(r);
        }
        let w = anisotropic_step(
            &h,
            space,
            singles.iter().chain(pairs.iter()),
            &singles,
            &pairs,
        );
        let root = match w {
            Some(w) => w,
            None => {
                // image of h − 1 is totally isotropic; pick a reflection that unblocks
                let unblock = singles
                    .iter()
                    .chain(pairs.iter())
                    .filter(|a| space.pair(a, a) != 0)
                    .find(|a| {
                        let cand = space.reflection(a).expect("anisotropic").mul_mat(&h);
                        !is_stuck(&cand, space, &singles, &pairs)
                    })
                    .cloned();
                unblock.ok_or(Error::InternalFactorizationFailure(cap))?
            }
        };
        h = space.reflection(&root)?.mul_mat(&h);
        roots.push(root);
    }
    debug_assert!({
        let prod = roots.iter().fold(Matrix::identity(p, n), |acc, r| {
            acc.mul_mat(&space.reflection(r).unwrap())
        });
        prod == *g
    });
    Ok(roots)
}

/// Picks `w = hv − v` anisotropic, preferring a choice whose residual
/// `refl(w)·h` is not stuck; falls back to the first anisotropic `w`.
fn anisotropic_step<'a>(
    h: &Matrix,
    space: &FormSpace,
    candidates: impl Iterator<Item = &'a Vec<u32>>,
    singles: &[Vec<u32>],
    pairs: &[Vec<u32>],
) -> Option<Vec<u32>> {
    let mut fallback = None;
    for w in anisotropic_moves(h, space, candidates) {
        let next = space.reflection(&w).expect("anisotropic").mul_mat(h);
        if !is_stuck(&next, space, singles, pairs) {
            return Some(w);
        }
        fallback.get_or_insert(w);
    }
    fallback
}

fn anisotropic_moves<'a>(
    h: &Matrix,
    space: &FormSpace,
    candidates: impl Iterator<Item = &'a Vec<u32>>,
) -> Vec<Vec<u32>> {
    let p = space.prime();
    candidates
        .filter_map(|v| {
            let hv = h.apply(v);
            let w: Vec<u32> = hv.iter().zip(v).map(|(&a, &b)| p.sub(a, b)).collect();
            (w.iter().any(|&x| x != 0) && space.pair(&w, &w) != 0).then_some(w)
        })
        .collect()
}

/// Non-identity residual whose `h − 1` has totally isotropic image.
fn is_stuck(h: &Matrix, space: &FormSpace, singles: &[Vec<u32>], pairs: &[Vec<u32>]) -> bool {
    !h.is_identity() && anisotropic_moves(h, space, singles.iter().chain(pairs.iter())).is_empty()
}

fn unit(n: usize, i: usize) -> Vec<u32> {
    let mut v = vec![0; n];
    v[i] = 1;
    v
}

pub fn determinant_sign(g: &Matrix) -> Sign {
    if g.det() == 1 {
        Sign::Plus
    } else {
        Sign::Minus
    }
}

/// Isomorphism type of a non-degenerate quadratic space.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum WittType {
    /// Even dimension, maximal Witt index.
    Plus,
    /// Even dimension, Witt index one less than maximal.
    Minus,
    Odd,
}

pub fn witt_type(space: &FormSpace) -> Option<WittType> {
    if space.parity() != Parity::Symmetric {
        return None;
    }
    let n = space.dim();
    if n % 2 == 1 {
        return Some(WittType::Odd);
    }
    let p = space.prime();
    let m = n / 2;
    let mut disc = space.gram().det();
    if m % 2 == 1 {
        disc = p.neg(disc);
    }
    Some(if p.legendre(disc) == 1 {
        WittType::Plus
    } else {
        WittType::Minus
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GroupOrders {
    /// `|Sp(V)|` or `|O(V)|`.
    pub full_order: u128,
    /// `|DΓ|`: `Sp(V)` itself, or `Ω(V)`.
    pub derived_order: u128,
    /// `[Γ : DΓ]`, the number of cosets told apart by determinant and spinor norm.
    pub index_classes: u128,
    pub witt: Option<WittType>,
}

pub fn isometry_group_orders(space: &FormSpace) -> GroupOrders {
    let q = space.prime().get() as u128;
    let n = space.dim() as u32;
    let prod_even = |m: u32| (1..=m).map(|i| q.pow(2 * i) - 1).product::<u128>();
    match space.parity() {
        Parity::Alternating => {
            let m = n / 2;
            let full = q.pow(m * m) * prod_even(m);
            GroupOrders {
                full_order: full,
                derived_order: full,
                index_classes: 1,
                witt: None,
            }
        }
        Parity::Symmetric => {
            let witt = witt_type(space).expect("symmetric");
            let full = match witt {
                WittType::Odd => {
                    let m = (n - 1) / 2;
                    2 * q.pow(m * m) * prod_even(m)
                }
                WittType::Plus | WittType::Minus => {
                    let m = n / 2;
                    let eps_term = if witt == WittType::Plus {
                        q.pow(m) - 1
                    } else {
                        q.pow(m) + 1
                    };
                    2 * q.pow(m * (m - 1)) * eps_term * prod_even(m - 1)
                }
            };
            let index = if n == 1 { 2 } else { 4 };
            GroupOrders {
                full_order: full,
                derived_order: full / index,
                index_classes: index,
                witt: Some(witt),
            }
        }
    }
}

/// Subgroups of `O(V)` containing `Ω(V)`, named by their image under
/// `(det, spinor norm)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SubgroupClass {
    FullO,
    KerSpinor,
    KerSpinorDet,
    SO,
    Omega,
}

impl fmt::Display for SubgroupClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SubgroupClass::FullO => "FullO",
            SubgroupClass::KerSpinor => "KerSpinor",
            SubgroupClass::KerSpinorDet => "KerSpinorDet",
            SubgroupClass::SO => "SO",
            SubgroupClass::Omega => "Omega",
        })
    }
}

impl SubgroupClass {
    pub fn from_name(s: &str) -> Option<Self> {
        Some(match s {
            "FullO" => SubgroupClass::FullO,
            "KerSpinor" => SubgroupClass::KerSpinor,
            "KerSpinorDet" => SubgroupClass::KerSpinorDet,
            "SO" => SubgroupClass::SO,
            "Omega" => SubgroupClass::Omega,
            _ => return None,
        })
    }

    /// Index of the subgroup in `O(V)` (for `dim ≥ 2`).
    pub fn index_in_o(self) -> u128 {
        match self {
            SubgroupClass::FullO => 1,
            SubgroupClass::Omega => 4,
            _ => 2,
        }
    }
}

/// Image of `(det, spinor)` on the generators, closed under multiplication
/// inside `{±1} × {±1}`.
pub fn det_spinor_image(gens: &[Matrix], space: &FormSpace) -> Result<Vec<(Sign, Sign)>> {
    let mut image = vec![(Sign::Plus, Sign::Plus)];
    for g in gens {
        let v = (determinant_sign(g), spinor_norm(g, space)?);
        if !image.contains(&v) {
            let extra: Vec<_> = image
                .iter()
                .map(|&(a, b)| (a.mul(v.0), b.mul(v.1)))
                .collect();
            image.extend(extra);
            image.sort();
            image.dedup();
        }
    }
    Ok(image)
}

/// Identifies `⟨gens⟩` among the subgroups of `O(V)` containing `Ω(V)`.
///
/// `derived_contained` must be the outcome of a containment check
/// (see [`crate::group::contains_derived`]); the answer is meaningless otherwise.
pub fn subgroup_class(
    gens: &[Matrix],
    space: &FormSpace,
    derived_contained: bool,
) -> Result<SubgroupClass> {
    if !derived_contained {
        return Err(Error::PrecedenceViolation);
    }
    if space.parity() != Parity::Symmetric {
        return Err(Error::BadForm(
            "subgroup_class needs a symmetric form".into(),
        ));
    }
    for g in gens {
        space.check_isometry(g)?;
    }
    let image = det_spinor_image(gens, space)?;
    Ok(class_of_image(&image))
}

fn class_of_image(image: &[(Sign, Sign)]) -> SubgroupClass {
    use Sign::{Minus, Plus};
    if image.len() == 4 {
        SubgroupClass::FullO
    } else if image.contains(&(Minus, Plus)) {
        SubgroupClass::KerSpinor
    } else if image.contains(&(Minus, Minus)) {
        SubgroupClass::KerSpinorDet
    } else if image.contains(&(Plus, Minus)) {
        SubgroupClass::SO
    } else {
        SubgroupClass::Omega
    }
}

/// Whether `v` lies in the fixed space of `g`.
pub fn fixes(g: &Matrix, v: &[u32]) -> bool {
    g.apply(v) == v
}

/// Fixed space `V^g`.
pub fn fixed_space(g: &Matrix) -> Subspace {
    g.minus_scalar(1).kernel()
}

/// `⟨x, x⟩` for a vector under the space's pairing.
pub fn norm(space: &FormSpace, x: &[u32]) -> u32 {
    dot(space.prime(), x, &space.gram().apply(x))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn f(p: u32) -> Prime {
        Prime::new(p).unwrap()
    }

    fn o4_hyperbolic() -> FormSpace {
        // basis e1, e2, f1, f2 with ⟨e_i, f_i⟩ = 1
        FormSpace::new(BilinearForm::hyperbolic(f(5), 2)).unwrap()
    }

    /// f1 ↦ f1 + e2, f2 ↦ f2 − e1, fixing e1, e2.
    fn siegel_o4() -> Matrix {
        // columns are images of e1, e2, f1, f2
        Matrix::from_rows(
            f(5),
            &[[1, 0, 0, -1], [0, 1, 1, 0], [0, 0, 1, 0], [0, 0, 0, 1]],
        )
        .unwrap()
    }

    #[test]
    fn drop_examples() {
        let o3 = FormSpace::orthogonal(f(5), 3).unwrap();
        assert_eq!(drop(&Matrix::identity(f(5), 3), &o3).unwrap(), 0);
        let r = Matrix::from_rows(f(5), &[[-1, 0, 0], [0, 1, 0], [0, 0, 1]]).unwrap();
        assert_eq!(drop(&r, &o3).unwrap(), 1);
        let s = siegel_o4();
        assert_eq!(drop(&s, &o4_hyperbolic()).unwrap(), 2);
        let bad = Matrix::from_rows(f(5), &[[2, 0, 0], [0, 1, 0], [0, 0, 1]]).unwrap();
        assert_eq!(drop(&bad, &o3), Err(Error::NotAnIsometry));
    }

    #[test]
    fn classify_examples() {
        let p = f(5);
        let sp2 = FormSpace::new(
            BilinearForm::new(
                Matrix::from_rows(p, &[[0, 1], [-1, 0]]).unwrap(),
                Parity::Alternating,
            )
            .unwrap(),
        )
        .unwrap();
        let t = Matrix::from_rows(p, &[[1, 1], [0, 1]]).unwrap();
        assert_eq!(
            classify_element(&t, &sp2).unwrap().tag,
            ElementTag::Transvection
        );

        let o3 = FormSpace::orthogonal(p, 3).unwrap();
        let r = Matrix::from_rows(p, &[[-1, 0, 0], [0, 1, 0], [0, 0, 1]]).unwrap();
        assert_eq!(
            classify_element(&r, &o3).unwrap().tag,
            ElementTag::Reflection
        );

        let o4 = o4_hyperbolic();
        let s = siegel_o4();
        let c = classify_element(&s, &o4).unwrap();
        assert_eq!(
            c,
            ElementClass {
                tag: ElementTag::IsotropicShear,
                drop: 2
            }
        );
        let e1 = [1, 0, 0, 0];
        let e2 = [0, 1, 0, 0];
        assert_eq!(o4.pair(&e1, &e2), 0);
        assert_eq!(o4.pair(&e1, &e1), 0);
        assert_eq!(o4.pair(&e2, &e2), 0);
        assert_eq!(fixed_space(&s).dim(), 2,);
        // same element through the generic constructor
        assert_eq!(o4.siegel(&e2, &e1).unwrap(), s);
    }

    #[test]
    fn spinor_examples() {
        let p = f(5);
        let o3 = FormSpace::orthogonal(p, 3).unwrap();
        assert_eq!(
            spinor_norm(&Matrix::identity(p, 3), &o3).unwrap(),
            Sign::Plus
        );
        // ⟨r,r⟩ = 1 (square) and ⟨r,r⟩ = 2 (nonsquare mod 5)
        let r1 = o3.reflection(&[1, 0, 0]).unwrap();
        assert_eq!(spinor_norm(&r1, &o3).unwrap(), Sign::Plus);
        let r2 = o3.reflection(&[1, 1, 0]).unwrap();
        assert_eq!(p.legendre(2), -1);
        assert_eq!(spinor_norm(&r2, &o3).unwrap(), Sign::Minus);
        // −1 = refl(e1)·refl(e2)·refl(e3), each ⟨e_i,e_i⟩ = 1
        let minus = Matrix::scalar(p, 3, 4);
        let explicit = o3
            .reflection(&[1, 0, 0])
            .unwrap()
            .mul_mat(&o3.reflection(&[0, 1, 0]).unwrap())
            .mul_mat(&o3.reflection(&[0, 0, 1]).unwrap());
        assert_eq!(explicit, minus);
        assert_eq!(spinor_norm(&minus, &o3).unwrap(), Sign::Plus);
    }

    #[test]
    fn spinor_of_siegel_element_needs_the_unblocking_step() {
        let o4 = o4_hyperbolic();
        let s = siegel_o4();
        let roots = reflection_factorization(&s, &o4, None::<&mut ChaCha8Rng>).unwrap();
        assert!(roots.len() <= 8);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let base = spinor_of_roots(&o4, &roots);
        for _ in 0..10 {
            let other = reflection_factorization(&s, &o4, Some(&mut rng)).unwrap();
            assert_eq!(spinor_of_roots(&o4, &other), base);
        }
    }

    #[test]
    fn order_examples() {
        let p3 = f(3);
        let p5 = f(5);
        assert_eq!(
            isometry_group_orders(&FormSpace::symplectic(p3, 2).unwrap()).full_order,
            24
        );
        assert_eq!(
            isometry_group_orders(&FormSpace::orthogonal(p5, 3).unwrap()).full_order,
            240
        );
        assert_eq!(
            isometry_group_orders(&FormSpace::symplectic(p3, 4).unwrap()).full_order,
            51840
        );
        let o4 = isometry_group_orders(&o4_hyperbolic());
        assert_eq!(o4.witt, Some(WittType::Plus));
        assert_eq!(o4.full_order, 2 * 25 * 24 * 24);
        assert_eq!(o4.derived_order, o4.full_order / 4);
    }

    #[test]
    fn subgroup_class_requires_containment_flag() {
        let o3 = FormSpace::orthogonal(f(5), 3).unwrap();
        let r = o3.reflection(&[1, 0, 0]).unwrap();
        assert_eq!(
            subgroup_class(&[r.clone()], &o3, false),
            Err(Error::PrecedenceViolation)
        );
        assert_eq!(
            subgroup_class(&[r.clone()], &o3, true).unwrap(),
            SubgroupClass::KerSpinor
        );
        let r2 = o3.reflection(&[1, 1, 0]).unwrap();
        assert_eq!(
            subgroup_class(&[r.clone(), r2.clone()], &o3, true).unwrap(),
            SubgroupClass::FullO
        );
        assert_eq!(
            subgroup_class(&[r2.clone()], &o3, true).unwrap(),
            SubgroupClass::KerSpinorDet
        );
        assert_eq!(
            subgroup_class(&[r.mul_mat(&r2)], &o3, true).unwrap(),
            SubgroupClass::SO
        );
        assert_eq!(
            subgroup_class(&[], &o3, true).unwrap(),
            SubgroupClass::Omega
        );
    }
}
