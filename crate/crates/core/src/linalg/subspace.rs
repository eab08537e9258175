use super::field::Prime;
use super::matrix::{dot, Matrix};

/// A subspace of `F_ℓ^n` stored by its reduced echelon basis.
///
/// The echelon basis is canonical, so derived `PartialEq` is subspace equality.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Subspace {
    prime: Prime,
    ambient: usize,
    basis: Vec<Vec<u32>>,
    pivots: Vec<usize>,
}

impl Subspace {
    pub fn zero(prime: Prime, ambient: usize) -> Self {
        Subspace {
            prime,
            ambient,
            basis: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn full(prime: Prime, ambient: usize) -> Self {
        let basis = (0..ambient)
            .map(|i| {
                let mut v = vec![0; ambient];
                v[i] = 1;
                v
            })
            .collect();
        Subspace {
            prime,
            ambient,
            basis,
            pivots: (0..ambient).collect(),
        }
    }

    /// Span of arbitrary vectors.
    pub fn from_vectors(prime: Prime, ambient: usize, vectors: Vec<Vec<u32>>) -> Self {
        if vectors.is_empty() {
            return Self::zero(prime, ambient);
        }
        let rows = vectors.len();
        let data: Vec<u32> = vectors.into_iter().flatten().collect();
        let mut m = Matrix::from_residues(prime, rows, ambient, data).expect("vector length");
        let pivots = m.rref_in_place();
        let basis = (0..pivots.len()).map(|i| m.row(i).to_vec()).collect();
        Subspace {
            prime,
            ambient,
            basis,
            pivots,
        }
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    #[inline]
    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn prime(&self) -> Prime {
        self.prime
    }

    pub fn basis(&self) -> &[Vec<u32>] {
        &self.basis
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn is_zero(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn is_full(&self) -> bool {
        self.basis.len() == self.ambient
    }

    /// Residue of `v` modulo the subspace: zero in every pivot coordinate.
    pub fn reduce(&self, v: &[u32]) -> Vec<u32> {
        let p = self.prime;
        let mut w = v.to_vec();
        for (b, &c) in self.basis.iter().zip(&self.pivots) {
            let f = w[c];
            if f == 0 {
                continue;
            }
            for (x, &y) in w.iter_mut().zip(b) {
                *x = p.sub(*x, p.mul(f, y));
            }
        }
        w
    }

    pub fn contains(&self, v: &[u32]) -> bool {
        self.reduce(v).iter().all(|&x| x == 0)
    }

    pub fn contains_subspace(&self, other: &Subspace) -> bool {
        other.basis.iter().all(|v| self.contains(v))
    }

    pub fn sum(&self, other: &Subspace) -> Subspace {
        let mut vs = self.basis.clone();
        vs.extend(other.basis.iter().cloned());
        Subspace::from_vectors(self.prime, self.ambient, vs)
    }

    pub fn intersection(&self, other: &Subspace) -> Subspace {
        // x ∈ both ⇔ x = Σ a_i u_i = Σ b_j w_j; solve [U | -W]ᵀ (a, b) = 0.
        let (k, m, n) = (self.dim(), other.dim(), self.ambient);
        if k == 0 || m == 0 {
            return Subspace::zero(self.prime, n);
        }
        let p = self.prime;
        let mut sys = Matrix::zeros(p, n, k + m);
        for (j, u) in self.basis.iter().enumerate() {
            for i in 0..n {
                sys.set(i, j, u[i]);
            }
        }
        for (j, w) in other.basis.iter().enumerate() {
            for i in 0..n {
                sys.set(i, k + j, p.neg(w[i]));
            }
        }
        let sol = sys.kernel();
        let vecs = sol
            .basis()
            .iter()
            .map(|coef| {
                let mut x = vec![0u32; n];
                for (a, u) in coef[..k].iter().zip(&self.basis) {
                    for (xi, &ui) in x.iter_mut().zip(u) {
                        *xi = p.add(*xi, p.mul(*a, ui));
                    }
                }
                x
            })
            .collect();
        Subspace::from_vectors(p, n, vecs)
    }

    /// Image of the subspace under `g`.
    pub fn image_under(&self, g: &Matrix) -> Subspace {
        Subspace::from_vectors(
            self.prime,
            self.ambient,
            self.basis.iter().map(|v| g.apply(v)).collect(),
        )
    }

    pub fn is_invariant_under(&self, g: &Matrix) -> bool {
        self.basis.iter().all(|v| self.contains(&g.apply(v)))
    }

    /// Orthogonal complement `{x : ⟨x, w⟩ = 0 ∀ w}` for the pairing `⟨x, w⟩ = xᵀ·G·w`.
    pub fn perp(&self, gram: &Matrix) -> Subspace {
        if self.is_zero() {
            return Subspace::full(self.prime, self.ambient);
        }
        // rows (G·w)ᵀ; x ∈ kernel of that system
        let rows: Vec<u32> = self.basis.iter().flat_map(|w| gram.apply(w)).collect();
        Matrix::from_residues(self.prime, self.dim(), self.ambient, rows)
            .expect("shape")
            .kernel()
    }

    /// `⟨x, y⟩ = 0` for all basis pairs.
    pub fn is_totally_isotropic(&self, gram: &Matrix) -> bool {
        self.basis.iter().all(|x| {
            let gx = gram.apply(x);
            self.basis.iter().all(|y| dot(self.prime, y, &gx) == 0)
        })
    }

    /// Smallest subspace containing `seeds` and stable under every generator.
    pub fn spin(prime: Prime, seeds: &[Vec<u32>], gens: &[Matrix]) -> Subspace {
        let n = seeds
            .first()
            .map(|v| v.len())
            .or_else(|| gens.first().map(|g| g.cols()))
            .unwrap_or(0);
        let mut space = Subspace::zero(prime, n);
        let mut queue: Vec<Vec<u32>> = Vec::new();
        for s in seeds {
            if space.try_insert(s) {
                queue.push(s.clone());
            }
        }
        while let Some(v) = queue.pop() {
            if space.is_full() {
                break;
            }
            for g in gens {
                let w = g.apply(&v);
                if space.try_insert(&w) {
                    queue.push(w);
                }
            }
        }
        space
    }

    /// Adds `v` to the span; returns whether the dimension grew.
    pub fn try_insert(&mut self, v: &[u32]) -> bool {
        let r = self.reduce(v);
        let Some(c) = r.iter().position(|&x| x != 0) else {
            return false;
        };
        let p = self.prime;
        let inv = p.inv(r[c]).expect("nonzero");
        let r: Vec<u32> = r.iter().map(|&x| p.mul(x, inv)).collect();
        // clear column c from existing rows
        for b in self.basis.iter_mut() {
            let f = b[c];
            if f != 0 {
                for (x, &y) in b.iter_mut().zip(&r) {
                    *x = p.sub(*x, p.mul(f, y));
                }
            }
        }
        let at = self.pivots.partition_point(|&q| q < c);
        self.pivots.insert(at, c);
        self.basis.insert(at, r);
        true
    }

    /// Coordinates of vectors of the ambient space in the quotient by this
    /// subspace, using the non-pivot coordinates as the complement basis.
    pub fn quotient_coords(&self, v: &[u32]) -> Vec<u32> {
        let r = self.reduce(v);
        self.non_pivots().iter().map(|&j| r[j]).collect()
    }

    pub fn non_pivots(&self) -> Vec<usize> {
        let mut is_piv = vec![false; self.ambient];
        for &c in &self.pivots {
            is_piv[c] = true;
        }
        (0..self.ambient).filter(|&j| !is_piv[j]).collect()
    }

    /// Matrix of the induced action of `g` on `V / self`; `self` must be `g`-stable.
    pub fn quotient_action(&self, g: &Matrix) -> Matrix {
        let free = self.non_pivots();
        let q = free.len();
        let mut m = Matrix::zeros(self.prime, q, q);
        for (col, &j) in free.iter().enumerate() {
            let mut e = vec![0u32; self.ambient];
            e[j] = 1;
            let coords = self.quotient_coords(&g.apply(&e));
            for (row, &c) in coords.iter().enumerate() {
                m.set(row, col, c);
            }
        }
        m
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(p: u32) -> Prime {
        Prime::new(p).unwrap()
    }

    #[test]
    fn sum_and_intersection() {
        let p = f(5);
        let a = Subspace::from_vectors(p, 3, vec![vec![1, 0, 0], vec![0, 1, 0]]);
        let b = Subspace::from_vectors(p, 3, vec![vec![0, 1, 0], vec![0, 0, 1]]);
        assert_eq!(a.sum(&b).dim(), 3);
        let i = a.intersection(&b);
        assert_eq!(i, Subspace::from_vectors(p, 3, vec![vec![0, 3, 0]]));
    }

    #[test]
    fn echelon_is_canonical() {
        let p = f(7);
        let a = Subspace::from_vectors(p, 3, vec![vec![1, 2, 3], vec![2, 2, 2]]);
        let b = Subspace::from_vectors(p, 3, vec![vec![3, 4, 5], vec![1, 1, 1]]);
        assert_eq!(a.contains(&[3, 4, 5]), true);
        assert_eq!(a, b);
    }

    #[test]
    fn try_insert_keeps_echelon() {
        let p = f(3);
        let mut s = Subspace::zero(p, 3);
        assert!(s.try_insert(&[0, 1, 1]));
        assert!(s.try_insert(&[1, 1, 0]));
        assert!(!s.try_insert(&[1, 2, 1]));
        let canon = Subspace::from_vectors(p, 3, vec![vec![0, 1, 1], vec![1, 1, 0]]);
        assert_eq!(s, canon);
    }

    #[test]
    fn quotient_action_of_upper_triangular() {
        let p = f(5);
        let g = Matrix::from_rows(p, &[[2, 1], [0, 3]]).unwrap();
        let line = Subspace::from_vectors(p, 2, vec![vec![1, 0]]);
        assert!(line.is_invariant_under(&g));
        let q = line.quotient_action(&g);
        assert_eq!(q, Matrix::from_rows(p, &[[3]]).unwrap());
    }
}
