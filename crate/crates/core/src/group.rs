//! Finitely generated matrix groups over `F_ℓ`.
//!
//! Orders and membership come from a deterministic Schreier–Sims
//! stabiliser chain on nonzero vectors. Irreducibility uses Norton's test on
//! random algebra elements, with an exhaustive spin of every projective
//! point for small spaces.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Mutex, OnceLock};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::classical::{isometry_group_orders, FormSpace};
use crate::error::{Error, Result};
use crate::linalg::{jordan_type, Matrix, Parity, Prime, Subspace};

pub const DEFAULT_ORBIT_LIMIT: usize = 10_000_000;
pub const ORDER_CAP: u64 = 10_000_000;

/// Projective-point count up to which irreducibility is decided by spinning
/// every point.
pub const DEFAULT_EXHAUSTIVE_POINTS: usize = 1000;
pub const DEFAULT_TRIALS: usize = 64;

/// Subgroup `⟨gens⟩ ≤ GL_n(F_ℓ)` with a lazily built stabiliser chain.
pub struct GeneratedGroup {
    prime: Prime,
    dim: usize,
    gens: Vec<Matrix>,
    seed: u64,
    orbit_limit: usize,
    chain: OnceLock<Result<StabChain>>,
}

impl fmt::Debug for GeneratedGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("GeneratedGroup")
            .field("prime", &self.prime)
            .field("dim", &self.dim)
            .field("gens", &self.gens.len())
            .field("seed", &self.seed)
            .finish()
    }
}

impl Clone for GeneratedGroup {
    fn clone(&self) -> Self {
        GeneratedGroup {
            prime: self.prime,
            dim: self.dim,
            gens: self.gens.clone(),
            seed: self.seed,
            orbit_limit: self.orbit_limit,
            chain: OnceLock::new(),
        }
    }
}

impl GeneratedGroup {
    pub fn new(prime: Prime, dim: usize, gens: Vec<Matrix>) -> Result<Self> {
        for g in &gens {
            if !g.is_square() || g.rows() != dim || g.prime() != prime {
                return Err(Error::Shape(format!(
                    "generator does not lie in GL_{dim}(F_{prime})"
                )));
            }
            if !g.is_invertible() {
                return Err(Error::Singular);
            }
        }
        Ok(GeneratedGroup {
            prime,
            dim,
            gens,
            seed: 0,
            orbit_limit: DEFAULT_ORBIT_LIMIT,
            chain: OnceLock::new(),
        })
    }

    /// Group from a non-empty generator list.
    pub fn from_gens(gens: Vec<Matrix>) -> Result<Self> {
        let first = gens
            .first()
            .ok_or_else(|| Error::Shape("no generators".into()))?;
        Self::new(first.prime(), first.rows(), gens)
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self.chain = OnceLock::new();
        self
    }

    pub fn with_orbit_limit(mut self, limit: usize) -> Self {
        self.orbit_limit = limit;
        self.chain = OnceLock::new();
        self
    }

    pub fn prime(&self) -> Prime {
        self.prime
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn gens(&self) -> &[Matrix] {
        &self.gens
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Same group data with extra generators appended.
    pub fn extended(&self, extra: &[Matrix]) -> Result<GeneratedGroup> {
        let mut gens = self.gens.clone();
        gens.extend(extra.iter().cloned());
        Ok(GeneratedGroup::new(self.prime, self.dim, gens)?
            .with_seed(self.seed)
            .with_orbit_limit(self.orbit_limit))
    }

    fn chain(&self) -> Result<&StabChain> {
        self.chain
            .get_or_init(|| StabChain::build(self.prime, self.dim, &self.gens, self.orbit_limit))
            .as_ref()
            .map_err(|e| e.clone())
    }

    pub fn order(&self) -> Result<u128> {
        self.chain()?.order()
    }

    pub fn contains(&self, g: &Matrix) -> Result<bool> {
        if g.rows() != self.dim || !g.is_square() {
            return Ok(false);
        }
        Ok(self.chain()?.contains(g))
    }

    /// Base points and basic orbit lengths of the stabiliser chain.
    pub fn base_and_orbits(&self) -> Result<Vec<(Vec<u32>, usize)>> {
        Ok(self
            .chain()?
            .levels
            .iter()
            .map(|l| (l.base.clone(), l.orbit.len()))
            .collect())
    }
}

pub fn group_order(g: &GeneratedGroup) -> Result<u128> {
    g.order()
}

struct Level {
    base: Vec<u32>,
    gens: Vec<Matrix>,
    gen_invs: Vec<Matrix>,
    orbit: Vec<Vec<u32>>,
    index: HashMap<u64, u32>,
    /// `(parent, generator)` with `gens[generator]·orbit[parent] = orbit[k]`.
    tree: Vec<(u32, u32)>,
    /// Generators already applied to each orbit point during orbit growth.
    expanded: Vec<usize>,
    /// Generators whose Schreier generators at each point have been sifted.
    checked: Vec<usize>,
}

struct StabChain {
    prime: Prime,
    dim: usize,
    levels: Vec<Level>,
    limit: usize,
    stored: usize,
}

fn encode(prime: Prime, v: &[u32]) -> u64 {
    let p = prime.get() as u64;
    v.iter().rev().fold(0u64, |acc, &x| acc * p + x as u64)
}

impl Level {
    fn new(base: Vec<u32>, prime: Prime) -> Self {
        let mut index = HashMap::new();
        index.insert(encode(prime, &base), 0);
        Level {
            orbit: vec![base.clone()],
            base,
            gens: Vec::new(),
            gen_invs: Vec::new(),
            index,
            tree: vec![(u32::MAX, u32::MAX)],
            expanded: vec![0],
            checked: vec![0],
        }
    }
}

impl StabChain {
    fn build(prime: Prime, dim: usize, gens: &[Matrix], limit: usize) -> Result<StabChain> {
        if (prime.get() as f64).powi(dim as i32) >= 1.8e19 {
            return Err(Error::ResourceLimit(limit));
        }
        let mut chain = StabChain {
            prime,
            dim,
            levels: Vec::new(),
            limit,
            stored: 0,
        };
        let gens: Vec<Matrix> = gens.iter().filter(|g| !g.is_identity()).cloned().collect();
        if gens.is_empty() {
            return Ok(chain);
        }
        // first base point: the standard basis vector with the largest orbit
        let first = (0..dim)
            .map(|j| unit(dim, j))
            .filter(|e| gens.iter().any(|g| g.apply(e) != *e))
            .max_by_key(|e| orbit_size(prime, e, &gens, limit))
            .expect("a non-identity generator moves some basis vector");
        chain.levels.push(Level::new(first, prime));
        for g in &gens {
            let fixes_all = chain.levels.iter().all(|l| g.apply(&l.base) == l.base);
            if fixes_all {
                let b = chain.new_base_point(g);
                chain.levels.push(Level::new(b, prime));
            }
        }
        for g in &gens {
            for i in 0..chain.levels.len() {
                chain.add_gen(i, g.clone())?;
                if g.apply(&chain.levels[i].base) != chain.levels[i].base {
                    break;
                }
            }
        }
        chain.schreier_sims()?;
        Ok(chain)
    }

    fn new_base_point(&self, h: &Matrix) -> Vec<u32> {
        (0..self.dim)
            .map(|j| unit(self.dim, j))
            .find(|e| h.apply(e) != *e)
            .expect("non-identity element moves a basis vector")
    }

    fn add_gen(&mut self, level: usize, g: Matrix) -> Result<()> {
        let inv = g.inverse()?;
        let l = &mut self.levels[level];
        l.gens.push(g);
        l.gen_invs.push(inv);
        self.extend_orbit(level)
    }

    fn extend_orbit(&mut self, level: usize) -> Result<()> {
        let prime = self.prime;
        let l = &mut self.levels[level];
        let mut k = 0;
        let mut buf = vec![0u32; self.dim];
        while k < l.orbit.len() {
            while l.expanded[k] < l.gens.len() {
                let s = l.expanded[k];
                l.gens[s].apply_into(&l.orbit[k], &mut buf);
                let key = encode(prime, &buf);
                if !l.index.contains_key(&key) {
                    if self.stored >= self.limit {
                        return Err(Error::ResourceLimit(self.limit));
                    }
                    self.stored += 1;
                    l.index.insert(key, l.orbit.len() as u32);
                    l.orbit.push(buf.clone());
                    l.tree.push((k as u32, s as u32));
                    l.expanded.push(0);
                    l.checked.push(0);
                }
                l.expanded[k] += 1;
            }
            k += 1;
        }
        Ok(())
    }

    /// `u_k` with `u_k·base = orbit[k]`.
    fn transversal(&self, level: usize, mut k: usize) -> Matrix {
        let l = &self.levels[level];
        let mut u = Matrix::identity(self.prime, self.dim);
        let mut path = Vec::new();
        while k != 0 {
            let (parent, s) = l.tree[k];
            path.push(s as usize);
            k = parent as usize;
        }
        // orbit[k] = g_1·g_2·…·g_d·base with g_1 the last edge
        for &s in &path {
            u = u.mul_mat(&l.gens[s]);
        }
        u
    }

    /// Left-multiplies `h` by `u_k⁻¹`.
    fn strip(&self, level: usize, mut k: usize, mut h: Matrix) -> Matrix {
        let l = &self.levels[level];
        while k != 0 {
            let (parent, s) = l.tree[k];
            h = l.gen_invs[s as usize].mul_mat(&h);
            k = parent as usize;
        }
        h
    }

    /// Sifts `g` through levels `from..`; returns the residue and the level
    /// where sifting stopped (`levels.len()` if it passed every level).
    fn sift(&self, mut g: Matrix, from: usize) -> (Matrix, usize) {
        for i in from..self.levels.len() {
            let l = &self.levels[i];
            let img = g.apply(&l.base);
            match l.index.get(&encode(self.prime, &img)) {
                None => return (g, i),
                Some(&k) => g = self.strip(i, k as usize, g),
            }
        }
        (g, self.levels.len())
    }

    fn schreier_sims(&mut self) -> Result<()> {
        let mut i = self.levels.len() as isize - 1;
        while i >= 0 {
            let lvl = i as usize;
            let mut descended = None;
            let mut k = 0;
            'scan: while k < self.levels[lvl].orbit.len() {
                while self.levels[lvl].checked[k] < self.levels[lvl].gens.len() {
                    let s = self.levels[lvl].checked[k];
                    self.levels[lvl].checked[k] += 1;
                    let l = &self.levels[lvl];
                    let img = l.gens[s].apply(&l.orbit[k]);
                    let m = l.index[&encode(self.prime, &img)] as usize;
                    let uk = self.transversal(lvl, k);
                    let sg = self.strip(lvl, m, l.gens[s].mul_mat(&uk));
                    let (h, j) = self.sift(sg, lvl + 1);
                    if !h.is_identity() {
                        if j == self.levels.len() {
                            let b = self.new_base_point(&h);
                            self.levels.push(Level::new(b, self.prime));
                        }
                        for l2 in lvl + 1..=j {
                            self.add_gen(l2, h.clone())?;
                        }
                        descended = Some(j);
                        break 'scan;
                    }
                }
                k += 1;
            }
            match descended {
                Some(j) => i = j as isize,
                None => i -= 1,
            }
        }
        Ok(())
    }

    fn order(&self) -> Result<u128> {
        self.levels.iter().try_fold(1u128, |acc, l| {
            acc.checked_mul(l.orbit.len() as u128)
                .ok_or(Error::ResourceLimit(self.limit))
        })
    }

    fn contains(&self, g: &Matrix) -> bool {
        let (h, j) = self.sift(g.clone(), 0);
        j == self.levels.len() && h.is_identity()
    }
}

fn unit(n: usize, i: usize) -> Vec<u32> {
    let mut v = vec![0; n];
    v[i] = 1;
    v
}

fn orbit_size(prime: Prime, v: &[u32], gens: &[Matrix], limit: usize) -> usize {
    let mut seen = std::collections::HashSet::new();
    seen.insert(encode(prime, v));
    let mut queue = vec![v.to_vec()];
    while let Some(x) = queue.pop() {
        for g in gens {
            let y = g.apply(&x);
            if seen.insert(encode(prime, &y)) {
                if seen.len() > limit {
                    return seen.len();
                }
                queue.push(y);
            }
        }
    }
    seen.len()
}

/// Outcome of an irreducibility test.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Irreducibility {
    Irreducible,
    /// A proper nonzero invariant subspace.
    Reducible(Subspace),
}

impl Irreducibility {
    pub fn is_irreducible(&self) -> bool {
        matches!(self, Irreducibility::Irreducible)
    }
}

#[derive(Clone, Copy, Debug)]
pub struct IrreducibilityConfig {
    /// Spin every projective point when there are at most this many.
    pub exhaustive_points: usize,
    pub trials: usize,
}

impl Default for IrreducibilityConfig {
    fn default() -> Self {
        IrreducibilityConfig {
            exhaustive_points: DEFAULT_EXHAUSTIVE_POINTS,
            trials: DEFAULT_TRIALS,
        }
    }
}

pub fn is_irreducible(g: &GeneratedGroup) -> Result<Irreducibility> {
    is_irreducible_with(g, IrreducibilityConfig::default())
}

pub fn is_irreducible_with(
    g: &GeneratedGroup,
    config: IrreducibilityConfig,
) -> Result<Irreducibility> {
    let n = g.dim();
    let prime = g.prime();
    if g.gens().is_empty() {
        return Err(Error::Shape("irreducibility needs a generator".into()));
    }
    if n <= 1 {
        return Ok(Irreducibility::Irreducible);
    }
    let points = projective_point_count(prime, n);
    if points.is_some_and(|c| c <= config.exhaustive_points as u128) {
        return Ok(exhaustive_irreducibility(prime, n, g.gens()));
    }
    meataxe(g, config.trials)
}

fn projective_point_count(prime: Prime, n: usize) -> Option<u128> {
    let q = prime.get() as u128;
    let total = q.checked_pow(n as u32)?;
    Some((total - 1) / (q - 1))
}

fn exhaustive_irreducibility(prime: Prime, n: usize, gens: &[Matrix]) -> Irreducibility {
    let p = prime.get();
    let total = (p as u64).pow(n as u32);
    for code in 1..total {
        let mut v = vec![0u32; n];
        let mut c = code;
        for x in v.iter_mut() {
            *x = (c % p as u64) as u32;
            c /= p as u64;
        }
        // one representative per line: leading nonzero coordinate is 1
        if v.iter().find(|&&x| x != 0) != Some(&1) {
            continue;
        }
        let s = Subspace::spin(prime, &[v], gens);
        if !s.is_full() {
            return Irreducibility::Reducible(s);
        }
    }
    Irreducibility::Irreducible
}

fn meataxe(g: &GeneratedGroup, trials: usize) -> Result<Irreducibility> {
    let prime = g.prime();
    let n = g.dim();
    let gens = g.gens();
    let transposes: Vec<Matrix> = gens.iter().map(Matrix::transpose).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(g.seed());
    // pool of words in the generators; grows by random products
    let mut words: Vec<Matrix> = gens.to_vec();
    for _ in 0..trials {
        let a = words[rng.gen_range(0..words.len())].clone();
        let b = gens[rng.gen_range(0..gens.len())].clone();
        words.push(a.mul_mat(&b));
        let mut elt = Matrix::zeros(prime, n, n);
        let picks: Vec<&Matrix> = words
            .choose_multiple(&mut rng, 4.min(words.len()))
            .collect();
        for w in picks {
            let c = rng.gen_range(0..prime.get());
            elt = elt.add(&w.scale(c));
        }
        for ev in 0..prime.get() {
            let nmat = elt.minus_scalar(ev);
            let ker = nmat.kernel();
            if ker.is_zero() {
                continue;
            }
            for v in ker.basis() {
                let s = Subspace::spin(prime, std::slice::from_ref(v), gens);
                if !s.is_full() {
                    return Ok(Irreducibility::Reducible(s));
                }
            }
            if ker.dim() == 1 {
                // Norton: a one-dimensional kernel spinning to everything on
                // both sides proves irreducibility.
                let kt = nmat.transpose().kernel();
                let w = kt.basis()[0].clone();
                let dual = Subspace::spin(prime, &[w], &transposes);
                if dual.is_full() {
                    return Ok(Irreducibility::Irreducible);
                }
                return Ok(Irreducibility::Reducible(annihilator(&dual)));
            }
        }
    }
    Err(Error::Inconclusive(trials))
}

/// `{x : s·x = 0 for all s ∈ S}`.
fn annihilator(s: &Subspace) -> Subspace {
    let n = s.ambient_dim();
    let data: Vec<u32> = s.basis().iter().flatten().copied().collect();
    Matrix::from_residues(s.prime(), s.dim(), n, data)
        .expect("shape")
        .kernel()
}

/// Order of an invertible matrix.
pub fn element_order(a: &Matrix) -> Result<u64> {
    if !a.is_invertible() {
        return Err(Error::Singular);
    }
    let prime = a.prime();
    match jordan_type(a) {
        Ok(data) => {
            let mut ord = 1u64;
            for ev in data.eigenvalues() {
                let m = prime.mult_order(ev).expect("nonzero eigenvalue");
                ord = lcm(ord, m);
            }
            let mut unip = 1u64;
            while (unip as usize) < data.max_block() {
                unip *= prime.get() as u64;
            }
            let ord = ord
                .checked_mul(unip)
                .filter(|&o| o <= ORDER_CAP)
                .ok_or(Error::OrderOverflow(ORDER_CAP))?;
            Ok(ord)
        }
        Err(Error::NonSplitSpectrum { .. }) => {
            let mut b = a.clone();
            let mut k = 1u64;
            while !b.is_identity() {
                if k >= ORDER_CAP {
                    return Err(Error::OrderOverflow(ORDER_CAP));
                }
                b = b.mul_mat(a);
                k += 1;
            }
            Ok(k)
        }
        Err(e) => Err(e),
    }
}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

fn lcm(a: u64, b: u64) -> u64 {
    a / gcd(a, b) * b
}

type DerivedKey = (FormSpace, u64);

fn derived_cache() -> &'static Mutex<HashMap<DerivedKey, Vec<Matrix>>> {
    static CACHE: OnceLock<Mutex<HashMap<DerivedKey, Vec<Matrix>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Generators of `DΓ`: `Sp(V)` or `Ω(V)`.
///
/// Symplectic: transvections `x ↦ x + ⟨x,v⟩v` over `v = e_i, e_i + e_j`.
/// Orthogonal: commutators of reflections, enlarged by conjugating with
/// reflections. Either way the set is accepted only once its Schreier–Sims
/// order equals the known order of `DΓ`.
pub fn derived_generators(space: &FormSpace, seed: u64) -> Result<Vec<Matrix>> {
    let key = (space.clone(), seed);
    if let Some(hit) = derived_cache().lock().expect("cache lock").get(&key) {
        return Ok(hit.clone());
    }
    let gens = match space.parity() {
        Parity::Alternating => symplectic_generators(space, seed)?,
        Parity::Symmetric => omega_generators(space, seed)?,
    };
    derived_cache()
        .lock()
        .expect("cache lock")
        .insert(key, gens.clone());
    Ok(gens)
}

fn small_vectors(space: &FormSpace) -> Vec<Vec<u32>> {
    let n = space.dim();
    let p = space.prime();
    let mut out: Vec<Vec<u32>> = (0..n).map(|i| unit(n, i)).collect();
    for i in 0..n {
        for j in i + 1..n {
            for c in 1..p.get() {
                let mut v = unit(n, i);
                v[j] = c;
                out.push(v);
            }
        }
    }
    out
}

fn order_of(space: &FormSpace, gens: &[Matrix], seed: u64) -> Result<u128> {
    if gens.is_empty() {
        return Ok(1);
    }
    GeneratedGroup::new(space.prime(), space.dim(), gens.to_vec())?
        .with_seed(seed)
        .order()
}

fn symplectic_generators(space: &FormSpace, seed: u64) -> Result<Vec<Matrix>> {
    let target = isometry_group_orders(space).derived_order;
    let n = space.dim();
    let mut gens = Vec::new();
    for i in 0..n {
        gens.push(space.transvection(&unit(n, i), 1)?);
    }
    for i in 0..n {
        for j in i + 1..n {
            let mut v = unit(n, i);
            v[j] = 1;
            gens.push(space.transvection(&v, 1)?);
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut order = order_of(space, &gens, seed)?;
    let mut rounds = 0;
    while order != target {
        rounds += 1;
        if rounds > 64 {
            return Err(Error::Invalid("could not generate Sp(V)".into()));
        }
        let v: Vec<u32> = (0..n)
            .map(|_| rng.gen_range(0..space.prime().get()))
            .collect();
        if v.iter().all(|&x| x == 0) {
            continue;
        }
        gens.push(space.transvection(&v, 1)?);
        order = order_of(space, &gens, seed)?;
    }
    Ok(gens)
}

fn omega_generators(space: &FormSpace, seed: u64) -> Result<Vec<Matrix>> {
    let orders = isometry_group_orders(space);
    let n = space.dim();
    let p = space.prime();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut roots: Vec<Vec<u32>> = small_vectors(space)
        .into_iter()
        .filter(|v| space.pair(v, v) != 0)
        .collect();
    roots.shuffle(&mut rng);
    roots.truncate(2 * n);
    // reflections generating O(V)
    let mut refls: Vec<Matrix> = Vec::new();
    for r in &roots {
        refls.push(space.reflection(r)?);
    }
    let mut attempts = 0;
    while order_of(space, &refls, seed)? != orders.full_order {
        attempts += 1;
        if attempts > 256 {
            return Err(Error::Invalid("reflections do not generate O(V)".into()));
        }
        let v: Vec<u32> = (0..n).map(|_| rng.gen_range(0..p.get())).collect();
        if space.pair(&v, &v) != 0 {
            refls.push(space.reflection(&v)?);
        }
    }
    // [O, O] is the normal closure of the commutators of a generating set
    let mut gens: Vec<Matrix> = Vec::new();
    for (i, a) in refls.iter().enumerate() {
        for b in &refls[i + 1..] {
            let c = a.commutator(b)?;
            if !c.is_identity() && !gens.contains(&c) {
                gens.push(c);
            }
        }
    }
    if gens.is_empty() {
        return Ok(gens);
    }
    loop {
        let group = GeneratedGroup::new(space.prime(), space.dim(), gens.clone())?.with_seed(seed);
        let mut added = None;
        'search: for r in &refls {
            for g in &gens {
                let c = r.mul_mat(g).mul_mat(r);
                if !group.contains(&c)? {
                    added = Some(c);
                    break 'search;
                }
            }
        }
        match added {
            Some(c) => gens.push(c),
            None => break,
        }
    }
    if order_of(space, &gens, seed)? != orders.derived_order {
        return Err(Error::Invalid(
            "commutator closure does not have the order of Ω(V)".into(),
        ));
    }
    Ok(gens)
}

/// Whether `⟨gens⟩ ⊇ DΓ`.
///
/// Equivalent to adjoining the generators of `DΓ` leaving the order
/// unchanged; checked as membership of each of them in the chain of `G`.
pub fn contains_derived(g: &GeneratedGroup, space: &FormSpace) -> Result<bool> {
    if g.gens().iter().any(|x| !space.is_isometry(x)) {
        return Err(Error::NotAnIsometry);
    }
    let derived = derived_generators(space, g.seed())?;
    for d in &derived {
        if !g.contains(d)? {
            return Ok(false);
        }
    }
    Ok(true)
}
