//! Big-monodromy certificates from generator data.
//!
//! [`certify`] checks irreducibility, drop bounds, the order-or-pseudoreflection
//! condition, the size bound on `S_0` and the presence of a witness element
//! among the generators. [`cross_validate`] compares the outcome with an exact
//! stabiliser-chain computation.

use std::fmt;

use crate::classical::{
    classify_element, drop, isometry_group_orders, subgroup_class, ElementTag, FormSpace,
    SubgroupClass,
};
use crate::error::{Error, Result};
use crate::families::MonodromySystem;
use crate::group::{
    contains_derived, element_order, gcd, is_irreducible, GeneratedGroup, Irreducibility,
};
use crate::linalg::{Matrix, Parity, Subspace};

#[derive(Clone, Debug)]
pub struct Hypotheses {
    pub space: FormSpace,
    pub gens: Vec<Matrix>,
    /// Indices into `gens`.
    pub s0: Vec<usize>,
    pub r: usize,
    pub seed: u64,
}

impl Hypotheses {
    pub fn new(space: FormSpace, gens: Vec<Matrix>, s0: Vec<usize>, r: usize) -> Result<Self> {
        if r == 0 {
            return Err(Error::Invalid("r must be positive".into()));
        }
        if gens.is_empty() {
            return Err(Error::Invalid("at least one generator is required".into()));
        }
        for g in &gens {
            if !space.is_isometry(g) {
                return Err(Error::NotAnIsometry);
            }
        }
        let mut s0 = s0;
        s0.sort_unstable();
        s0.dedup();
        if let Some(&i) = s0.iter().find(|&&i| i >= gens.len()) {
            return Err(Error::Invalid(format!(
                "S0 index {i} out of range for {} generators",
                gens.len()
            )));
        }
        Ok(Hypotheses {
            space,
            gens,
            s0,
            r,
            seed: 0,
        })
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn group(&self) -> Result<GeneratedGroup> {
        Ok(
            GeneratedGroup::new(self.space.prime(), self.space.dim(), self.gens.clone())?
                .with_seed(self.seed),
        )
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CheckKind {
    Irreducibility,
    Drop,
    Order,
    S0Bound,
    Witness,
}

impl CheckKind {
    pub fn key(self) -> &'static str {
        match self {
            CheckKind::Irreducibility => "IRREDUCIBILITY",
            CheckKind::Drop => "DROP",
            CheckKind::Order => "ORDER",
            CheckKind::S0Bound => "S0_BOUND",
            CheckKind::Witness => "WITNESS",
        }
    }

    pub fn reason(self) -> &'static str {
        match self {
            CheckKind::Irreducibility => "irreducibility",
            CheckKind::Drop => "drop",
            CheckKind::Order => "order",
            CheckKind::S0Bound => "s0-bound",
            CheckKind::Witness => "no-witness",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Check {
    pub kind: CheckKind,
    pub passed: bool,
    pub evidence: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Conclusion {
    FullSp,
    OrthogonalBig(Option<SubgroupClass>),
    NotCertified(String),
}

impl Conclusion {
    pub fn is_big(&self) -> bool {
        !matches!(self, Conclusion::NotCertified(_))
    }
}

impl fmt::Display for Conclusion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Conclusion::FullSp => f.write_str("FullSp"),
            Conclusion::OrthogonalBig(Some(c)) => write!(f, "OrthogonalBig({c})"),
            Conclusion::OrthogonalBig(None) => f.write_str("OrthogonalBig"),
            Conclusion::NotCertified(r) => write!(f, "NotCertified({r})"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Certificate {
    pub checks: Vec<Check>,
    pub conclusion: Conclusion,
}

fn factorial(n: usize) -> u64 {
    (1..=n as u64).product()
}

fn join<T: fmt::Display>(items: &[T]) -> String {
    items
        .iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join(",")
}

fn check_irreducible(h: &Hypotheses) -> Result<Check> {
    let evidence;
    let passed;
    match is_irreducible(&h.group()?) {
        Ok(Irreducibility::Irreducible) => {
            passed = true;
            evidence = format!("no invariant subspace in dimension {}", h.space.dim());
        }
        Ok(Irreducibility::Reducible(w)) => {
            passed = false;
            evidence = format!("invariant subspace of dimension {}", w.dim());
        }
        Err(e @ Error::Inconclusive(_)) => {
            passed = false;
            evidence = e.to_string();
        }
        Err(e) => return Err(e),
    }
    Ok(Check {
        kind: CheckKind::Irreducibility,
        passed,
        evidence,
    })
}

/// Evaluates the hypotheses on the generators.
pub fn certify(h: &Hypotheses) -> Result<Certificate> {
    let space = &h.space;
    let p = space.prime();
    let mut checks = Vec::new();

    checks.push(check_irreducible(h)?);

    let drops = h
        .gens
        .iter()
        .map(|g| drop(g, space))
        .collect::<Result<Vec<_>>>()?;
    let max_drop = drops.iter().copied().max().unwrap_or(0);
    checks.push(Check {
        kind: CheckKind::Drop,
        passed: max_drop <= h.r,
        evidence: format!("drops [{}], r = {}", join(&drops), h.r),
    });

    let classes = h
        .gens
        .iter()
        .map(|g| classify_element(g, space))
        .collect::<Result<Vec<_>>>()?;
    let fact = factorial(h.r + 1);
    let mut order_ok = true;
    let mut parts = Vec::new();
    for (i, g) in h.gens.iter().enumerate() {
        if h.s0.contains(&i) {
            parts.push(format!("{i}:S0"));
            continue;
        }
        if classes[i].is_pseudoreflection() {
            parts.push(format!("{i}:{}", classes[i].tag));
            continue;
        }
        match element_order(g) {
            Ok(o) if gcd(o, fact) == 1 => parts.push(format!("{i}:order {o}")),
            Ok(o) => {
                order_ok = false;
                parts.push(format!("{i}:order {o} shares a factor with {fact}"));
            }
            Err(e @ Error::OrderOverflow(_)) => {
                order_ok = false;
                parts.push(format!("{i}:{e}"));
            }
            Err(e) => return Err(e),
        }
    }
    checks.push(Check {
        kind: CheckKind::Order,
        passed: order_ok,
        evidence: format!("(r+1)! = {fact}; {}", parts.join(" ")),
    });

    let bound = 2 * (h.r + 1) * h.s0.len();
    checks.push(Check {
        kind: CheckKind::S0Bound,
        passed: bound <= space.dim(),
        evidence: format!("2(r+1)|S0| = {bound}, dim = {}", space.dim()),
    });

    let has = |t: ElementTag| classes.iter().position(|c| c.tag == t);
    let (passed, evidence) = match space.parity() {
        Parity::Alternating => match has(ElementTag::Transvection) {
            Some(i) => (true, format!("transvection at generator {i}")),
            None => (false, "no transvection among the generators".to_string()),
        },
        Parity::Symmetric => {
            if p.get() < 5 {
                (false, format!("symmetric case needs prime >= 5, got {p}"))
            } else {
                match (has(ElementTag::Reflection), has(ElementTag::IsotropicShear)) {
                    (Some(i), Some(j)) => (
                        true,
                        format!("reflection at generator {i}, isotropic shear at generator {j}"),
                    ),
                    (None, _) => (false, "no reflection among the generators".to_string()),
                    (_, None) => (false, "no isotropic shear among the generators".to_string()),
                }
            }
        }
    };
    checks.push(Check {
        kind: CheckKind::Witness,
        passed,
        evidence,
    });

    let conclusion = match checks.iter().find(|c| !c.passed) {
        Some(c) => Conclusion::NotCertified(c.kind.reason().to_string()),
        None => match space.parity() {
            Parity::Alternating => Conclusion::FullSp,
            Parity::Symmetric => {
                Conclusion::OrthogonalBig(Some(subgroup_class(&h.gens, space, true)?))
            }
        },
    };
    Ok(Certificate { checks, conclusion })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Agreement {
    /// Certificate and exact computation say the same thing.
    Agree,
    /// Not certified, yet the exact group is big.
    Conservative,
    /// Certified big but the exact group is not.
    Disagree,
}

impl fmt::Display for Agreement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Agreement::Agree => "yes",
            Agreement::Conservative => "conservative",
            Agreement::Disagree => "no",
        })
    }
}

#[derive(Clone, Debug)]
pub struct CrossValidation {
    pub certificate: Certificate,
    pub exact_order: u128,
    pub derived_contained: bool,
    /// Symmetric case only, when `Ω(V) ≤ G`.
    pub exact_class: Option<SubgroupClass>,
    pub agreement: Agreement,
}

impl CrossValidation {
    /// Name of the exact group: a subgroup class, `FullSp`, or `none`.
    pub fn exact_class_name(&self) -> String {
        match (self.exact_class, self.derived_contained) {
            (Some(c), _) => c.to_string(),
            (None, true) => "FullSp".to_string(),
            (None, false) => "none".to_string(),
        }
    }
}

/// Runs [`certify`] and compares it with the exact group.
pub fn cross_validate(h: &Hypotheses) -> Result<CrossValidation> {
    let certificate = certify(h)?;
    let group = h.group()?;
    let exact_order = group.order()?;
    let derived_contained = contains_derived(&group, &h.space)?;
    let exact_class = match h.space.parity() {
        Parity::Symmetric if derived_contained => Some(subgroup_class(&h.gens, &h.space, true)?),
        _ => None,
    };
    if h.space.parity() == Parity::Alternating {
        debug_assert_eq!(
            derived_contained,
            exact_order == isometry_group_orders(&h.space).full_order
        );
    }
    let agreement = match &certificate.conclusion {
        Conclusion::NotCertified(_) if derived_contained => Agreement::Conservative,
        Conclusion::NotCertified(_) => Agreement::Agree,
        Conclusion::FullSp => {
            if derived_contained {
                Agreement::Agree
            } else {
                Agreement::Disagree
            }
        }
        Conclusion::OrthogonalBig(claimed) => {
            let ok = derived_contained
                && exact_class != Some(SubgroupClass::SO)
                && exact_class != Some(SubgroupClass::Omega)
                && claimed.is_none_or(|c| Some(c) == exact_class);
            if ok {
                Agreement::Agree
            } else {
                Agreement::Disagree
            }
        }
    };
    Ok(CrossValidation {
        certificate,
        exact_order,
        derived_contained,
        exact_class,
        agreement,
    })
}

/// Non-commuting reflection/shear pair whose commutator has order at least ℓ.
#[derive(Clone, Debug)]
pub struct CommutatorWitness {
    /// Index of the reflection among the system's punctures.
    pub reflection: usize,
    /// Index of the isotropic shear.
    pub shear: usize,
    pub order: u64,
    /// Basis `x, y, z` of the invariant 3-space `W`.
    pub basis: [Vec<u32>; 3],
    /// Restrictions to `W`, one row per basis vector holding its image.
    pub rho_on_w: Matrix,
    pub sigma_on_w: Matrix,
    pub commutator_on_w: Matrix,
}

/// Searches reflection/shear generator pairs for a commutator of order ≥ ℓ.
///
/// Returns `None` when every non-commuting pair has been tried.
pub fn commutator_probe(sys: &MonodromySystem) -> Result<Option<CommutatorWitness>> {
    let space = sys.space();
    if space.parity() != Parity::Symmetric {
        return Err(Error::BadForm(
            "commutator probe needs a symmetric pairing".into(),
        ));
    }
    let p = space.prime();
    let gens = sys.generators();
    let of = |t: ElementTag| -> Vec<usize> {
        sys.classifications
            .iter()
            .enumerate()
            .filter(|(_, (_, c))| c.tag == t)
            .map(|(i, _)| i)
            .collect()
    };
    for &i in &of(ElementTag::Reflection) {
        for &j in &of(ElementTag::IsotropicShear) {
            let (rho, sigma) = (&gens[i], &gens[j]);
            if rho.mul_mat(sigma) == sigma.mul_mat(rho) {
                continue;
            }
            let comm = rho.commutator(sigma)?;
            let order = element_order(&comm)?;
            if order < p.get() as u64 {
                continue;
            }
            let Some(basis) = witness_basis(rho, sigma, &space) else {
                continue;
            };
            let restrict = |g: &Matrix| restrict_rows(g, &basis);
            return Ok(Some(CommutatorWitness {
                reflection: i,
                shear: j,
                order,
                rho_on_w: restrict(rho)?,
                sigma_on_w: restrict(sigma)?,
                commutator_on_w: restrict(&comm)?,
                basis,
            }));
        }
    }
    Ok(None)
}

/// `z` a root of `ρ`, `y ∈ V^σ` scaled so that `ρy = y + z`, `x = σz − z`.
fn witness_basis(rho: &Matrix, sigma: &Matrix, space: &FormSpace) -> Option<[Vec<u32>; 3]> {
    let p = space.prime();
    let z = rho.minus_scalar(1).image().basis().first()?.clone();
    let fixed = sigma.minus_scalar(1).kernel();
    let y0 = fixed
        .basis()
        .iter()
        .find(|v| space.pair(v, &z) != 0)?
        .clone();
    // ρy0 = y0 + c·z
    let ry = rho.apply(&y0);
    let diff: Vec<u32> = ry.iter().zip(&y0).map(|(&a, &b)| p.sub(a, b)).collect();
    let k = z.iter().position(|&v| v != 0)?;
    let c = p.mul(diff[k], p.inv(z[k])?);
    let s = p.inv(c)?;
    let y: Vec<u32> = y0.iter().map(|&v| p.mul(v, s)).collect();
    let sz = sigma.apply(&z);
    let x: Vec<u32> = sz.iter().zip(&z).map(|(&a, &b)| p.sub(a, b)).collect();
    let span = Subspace::from_vectors(p, space.dim(), vec![x.clone(), y.clone(), z.clone()]);
    (span.dim() == 3).then_some([x, y, z])
}

/// Matrix of `g` on `span(basis)` with row `i` holding the coordinates of `g·basis[i]`.
fn restrict_rows(g: &Matrix, basis: &[Vec<u32>; 3]) -> Result<Matrix> {
    let p = g.prime();
    let n = g.rows();
    // columns of b are the basis vectors
    let mut b = Matrix::zeros(p, n, 3);
    for (j, v) in basis.iter().enumerate() {
        for (i, &x) in v.iter().enumerate() {
            b.set(i, j, x);
        }
    }
    let mut out = Matrix::zeros(p, 3, 3);
    for (i, v) in basis.iter().enumerate() {
        let gv = g.apply(v);
        let coords = solve_in_span(&b, &gv)
            .ok_or_else(|| Error::Invalid("span of the basis is not invariant".into()))?;
        for (j, c) in coords.into_iter().enumerate() {
            out.set(i, j, c);
        }
    }
    Ok(out)
}

fn solve_in_span(b: &Matrix, v: &[u32]) -> Option<Vec<u32>> {
    let p = b.prime();
    let n = b.rows();
    let k = b.cols();
    let mut aug = Matrix::zeros(p, n, k + 1);
    for i in 0..n {
        for j in 0..k {
            aug.set(i, j, b.get(i, j));
        }
        aug.set(i, k, v[i]);
    }
    let pivots = aug.rref_in_place();
    if pivots.contains(&k) {
        return None;
    }
    let mut x = vec![0u32; k];
    for (row, &c) in pivots.iter().enumerate() {
        x[c] = aug.get(row, k);
    }
    Some(x)
}
