#![allow(dead_code)]

use std::collections::{HashSet, VecDeque};

use monodromy::classical::FormSpace;
use monodromy::linalg::jordan_type;
use monodromy::{Matrix, Prime};
use rand::Rng;

pub fn f(p: u32) -> Prime {
    Prime::new(p).unwrap()
}

/// Order of `⟨gens⟩` by breadth-first closure; `None` past `cap` elements.
pub fn closure_order(gens: &[Matrix], cap: usize) -> Option<usize> {
    let id = Matrix::identity(gens[0].prime(), gens[0].rows());
    let mut seen: HashSet<Vec<u32>> = HashSet::new();
    seen.insert(id.entries().to_vec());
    let mut queue = VecDeque::from([id]);
    while let Some(x) = queue.pop_front() {
        for g in gens {
            let y = x.mul_mat(g);
            if seen.insert(y.entries().to_vec()) {
                if seen.len() > cap {
                    return None;
                }
                queue.push_back(y);
            }
        }
    }
    Some(seen.len())
}

fn all_vectors(p: Prime, n: usize) -> Vec<Vec<u32>> {
    let q = p.get();
    let total = (q as usize).pow(n as u32);
    (0..total)
        .map(|mut k| {
            (0..n)
                .map(|_| {
                    let d = (k % q as usize) as u32;
                    k /= q as usize;
                    d
                })
                .collect()
        })
        .collect()
}

/// Number of isometries of the space, by choosing images of the basis
/// vectors one at a time subject to the Gram constraints.
pub fn count_isometries(space: &FormSpace) -> u128 {
    let n = space.dim();
    let gram = space.gram();
    // candidates[k]: vectors still admissible as the image of e_k
    let candidates: Vec<Vec<Vec<u32>>> = (0..n)
        .map(|k| {
            all_vectors(space.prime(), n)
                .into_iter()
                .filter(|v| space.pair(v, v) == gram.get(k, k))
                .collect()
        })
        .collect();
    fn go(j: usize, candidates: &[Vec<Vec<u32>>], space: &FormSpace, gram: &Matrix) -> u128 {
        let n = space.dim();
        if j + 1 == n {
            return candidates[j].len() as u128;
        }
        let mut total = 0;
        for v in &candidates[j] {
            let rest: Vec<Vec<Vec<u32>>> = (j + 1..n)
                .map(|k| {
                    candidates[k]
                        .iter()
                        .filter(|w| space.pair(v, w) == gram.get(j, k))
                        .cloned()
                        .collect()
                })
                .collect();
            let mut next = vec![Vec::new(); j + 1];
            next.extend(rest);
            total += go(j + 1, &next, space, gram);
        }
        total
    }
    if n == 0 {
        return 1;
    }
    go(0, &candidates, space, gram)
}

pub fn random_matrix<R: Rng>(rng: &mut R, p: Prime, n: usize) -> Matrix {
    Matrix::from_residues(
        p,
        n,
        n,
        (0..n * n).map(|_| rng.gen_range(0..p.get())).collect(),
    )
    .unwrap()
}

pub fn random_invertible<R: Rng>(rng: &mut R, p: Prime, n: usize) -> Matrix {
    loop {
        let m = random_matrix(rng, p, n);
        if m.is_invertible() {
            return m;
        }
    }
}

/// Random invertible matrix whose spectrum lies in `F_ℓ`.
pub fn random_split<R: Rng>(rng: &mut R, p: Prime, n: usize) -> Matrix {
    loop {
        let m = random_invertible(rng, p, n);
        if jordan_type(&m).is_ok() {
            return m;
        }
    }
}

pub fn random_vector<R: Rng>(rng: &mut R, p: Prime, n: usize) -> Vec<u32> {
    (0..n).map(|_| rng.gen_range(0..p.get())).collect()
}

pub fn random_anisotropic<R: Rng>(rng: &mut R, space: &FormSpace) -> Vec<u32> {
    loop {
        let v = random_vector(rng, space.prime(), space.dim());
        if space.pair(&v, &v) != 0 {
            return v;
        }
    }
}

pub fn random_reflection<R: Rng>(rng: &mut R, space: &FormSpace) -> Matrix {
    let v = random_anisotropic(rng, space);
    space.reflection(&v).unwrap()
}

pub fn random_transvection<R: Rng>(rng: &mut R, space: &FormSpace) -> Matrix {
    let p = space.prime();
    loop {
        let v = random_vector(rng, p, space.dim());
        if v.iter().any(|&x| x != 0) {
            let c = rng.gen_range(1..p.get());
            return space.transvection(&v, c).unwrap();
        }
    }
}

/// Siegel element on a random totally isotropic plane, if one is found.
pub fn random_shear<R: Rng>(rng: &mut R, space: &FormSpace) -> Option<Matrix> {
    let p = space.prime();
    let n = space.dim();
    for _ in 0..2000 {
        let u = random_vector(rng, p, n);
        let w = random_vector(rng, p, n);
        if space.pair(&u, &u) != 0 || space.pair(&w, &w) != 0 || space.pair(&u, &w) != 0 {
            continue;
        }
        let span = monodromy::Subspace::from_vectors(p, n, vec![u.clone(), w.clone()]);
        if span.dim() == 2 {
            return Some(space.siegel(&u, &w).unwrap());
        }
    }
    None
}

/// Random isometry as a product of a few reflections or transvections.
pub fn random_isometry<R: Rng>(rng: &mut R, space: &FormSpace) -> Matrix {
    let k = rng.gen_range(2..=5);
    let mut g = Matrix::identity(space.prime(), space.dim());
    for _ in 0..k {
        let h = match space.parity() {
            monodromy::Parity::Symmetric => random_reflection(rng, space),
            monodromy::Parity::Alternating => random_transvection(rng, space),
        };
        g = g.mul_mat(&h);
    }
    g
}
