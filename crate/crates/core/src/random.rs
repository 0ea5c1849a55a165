//! Seeded generators of valid modules and paired modules, used by the test
//! suites and the `sample` CLI command.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::{Error, Result};
use crate::fl_module::{Block, FLModule, LData};
use crate::matrix::Matrix;
use crate::pairing::{standard_gram, PairedFLModule, Symmetry};
use crate::ring::{make_ring, Family, Ring, RingElem};

pub fn random_elem<R: Rng>(rng: &mut R, ring: &Ring) -> RingElem {
    ring.element_from_code(rng.gen_range(0..ring.size()))
}

pub fn random_unit<R: Rng>(rng: &mut R, ring: &Ring) -> RingElem {
    loop {
        let x = random_elem(rng, ring);
        if x.is_unit() {
            return x;
        }
    }
}

/// Random invertible matrix.
pub fn random_invertible<R: Rng>(rng: &mut R, ring: &Ring, n: usize) -> Matrix {
    loop {
        let m = Matrix::from_fn(ring, n, n, |_, _| random_elem(rng, ring));
        if m.is_invertible() {
            return m;
        }
    }
}

/// Random invertible change of basis respecting the filtration of the given
/// sorted weights: lower triangular up to equal-weight blocks.
pub fn random_adapted<R: Rng>(rng: &mut R, ring: &Ring, weights: &[i64]) -> Matrix {
    let n = weights.len();
    loop {
        let m = Matrix::from_fn(ring, n, n, |k, h| {
            if weights[k] >= weights[h] {
                random_elem(rng, ring)
            } else {
                RingElem::zero(ring)
            }
        });
        if m.is_invertible() {
            return m;
        }
    }
}

/// Random module with sorted (possibly repeated) weights in `[0, max_weight]`.
pub fn random_fl_module<R: Rng>(
    rng: &mut R,
    ring: &Ring,
    witt_degree: usize,
    rank: usize,
    max_weight: i64,
) -> FLModule {
    let blocks = (0..witt_degree)
        .map(|_| {
            let mut w: Vec<i64> = (0..rank).map(|_| rng.gen_range(0..=max_weight)).collect();
            w.sort_unstable();
            Block { weights: w, phi: random_invertible(rng, ring, rank) }
        })
        .collect();
    FLModule::new(ring, (0, max_weight), blocks)
}

pub fn random_ldata<R: Rng>(rng: &mut R, ring: &Ring, witt_degree: usize, max_s: i64) -> LData {
    LData {
        s: (0..witt_degree).map(|_| rng.gen_range(0..=max_s)).collect(),
        c: (0..witt_degree).map(|_| random_unit(rng, ring)).collect(),
    }
}

/// Distinct weights with `w_i + w_{r-1-i} = spread`, within `[0, spread]`.
fn symmetric_weights<R: Rng>(rng: &mut R, rank: usize, spread: i64) -> Vec<i64> {
    let lower: Vec<i64> = (0..(spread + 1) / 2).collect();
    let mut low: Vec<i64> = lower.choose_multiple(rng, rank / 2).copied().collect();
    low.sort_unstable();
    let mut w = low.clone();
    if rank % 2 == 1 {
        w.push(spread / 2);
    }
    w.extend(low.iter().rev().map(|x| spread - x));
    w
}

/// A random isometry of the standard form `S`.
fn random_isometry<R: Rng>(rng: &mut R, ring: &Ring, rank: usize, symmetry: Symmetry) -> Matrix {
    let s = standard_gram(ring, rank, symmetry);
    let two = RingElem::from_u64(ring, 2);
    let mut g = Matrix::identity(ring, rank);
    // torus element diag(t_j) with t_j t_{j*} = 1
    let mut torus = Matrix::identity(ring, rank);
    for j in 0..rank / 2 {
        let t = random_unit(rng, ring);
        torus[(rank - 1 - j, rank - 1 - j)] = t.inv().expect("unit");
        torus[(j, j)] = t;
    }
    g = g.mul(&torus);
    for _ in 0..4 {
        let v: Vec<RingElem> = (0..rank).map(|_| random_elem(rng, ring)).collect();
        let vcol = Matrix::from_fn(ring, rank, 1, |i, _| v[i].clone());
        let outer = vcol.mul(&vcol.transpose()).mul(&s);
        let step = match symmetry {
            // transvection x ↦ x + a ⟨v, x⟩ v
            Symmetry::Symplectic => Matrix::identity(ring, rank).add(&outer.scale(&random_elem(rng, ring))),
            // reflection in a vector of unit norm
            Symmetry::Orthogonal => {
                let q = vcol.transpose().mul(&s).mul(&vcol)[(0, 0)].clone();
                let Some(qi) = q.inv() else { continue };
                Matrix::identity(ring, rank).sub(&outer.scale(&(&two * &qi)))
            }
        };
        g = g.mul(&step);
    }
    g
}

/// A random valid paired module of the given shape over `ring`: a random
/// similitude in standard coordinates, then a random adapted change of basis.
/// Weights are multiplicity-free with per-block spread at most `max_spread`.
pub fn random_paired<R: Rng>(
    rng: &mut R,
    ring: &Ring,
    witt_degree: usize,
    rank: usize,
    symmetry: Symmetry,
    max_spread: i64,
) -> Result<PairedFLModule> {
    if symmetry == Symmetry::Symplectic && rank % 2 == 1 {
        return Err(Error::OddRankSymplectic);
    }
    if rank == 0 || max_spread < rank as i64 - 1 {
        return Err(Error::InvalidInput(format!("rank {rank} needs spread at least {}", rank as i64 - 1)));
    }
    let odd_orth = symmetry == Symmetry::Orthogonal && rank % 2 == 1;
    let mut weights = Vec::with_capacity(witt_degree);
    let mut s = Vec::with_capacity(witt_degree);
    for _ in 0..witt_degree {
        let mut spread = rng.gen_range(rank as i64 - 1..=max_spread);
        if rank % 2 == 1 && spread % 2 == 1 {
            spread -= 1;
        }
        let shift = rng.gen_range(0..=2);
        weights.push(symmetric_weights(rng, rank, spread).into_iter().map(|w| w + shift).collect::<Vec<_>>());
        s.push(spread + 2 * shift);
    }
    let omega: Vec<RingElem> = (0..witt_degree)
        .map(|_| if odd_orth { random_unit(rng, ring) } else { RingElem::one(ring) })
        .collect();
    let sgram = standard_gram(ring, rank, symmetry);
    let mut blocks = Vec::with_capacity(witt_degree);
    let mut c = Vec::with_capacity(witt_degree);
    for t in 0..witt_degree {
        let (mu, root) = if odd_orth {
            let x = random_unit(rng, ring);
            (&x * &x, Some(x))
        } else {
            (random_unit(rng, ring), None)
        };
        // similitude with multiplier μ: diag(μ,…,μ,[√μ],1,…,1)
        let mut d = Matrix::identity(ring, rank);
        for j in 0..rank / 2 {
            d[(j, j)] = mu.clone();
        }
        if let Some(x) = root {
            d[(rank / 2, rank / 2)] = x;
        }
        let phi = random_isometry(rng, ring, rank, symmetry).mul(&d);
        let next = (t + 1) % witt_degree;
        c.push(&(&omega[next] * &mu) * &omega[t].inv().expect("unit"));
        blocks.push(Block { weights: weights[t].clone(), phi });
    }
    let lo = weights.iter().flatten().copied().min().unwrap_or(0);
    let hi = weights.iter().flatten().copied().max().unwrap_or(0);
    let base = PairedFLModule {
        module: FLModule::new(ring, (lo, hi), blocks),
        l: LData { s, c },
        symmetry,
        gram: omega.iter().map(|w| sgram.scale(w)).collect(),
    };
    let change: Vec<Matrix> = weights.iter().map(|w| random_adapted(rng, ring, w)).collect();
    base.change_basis(&change)
}

/// Parameters of one randomized instance of the deformation-theoretic suites.
#[derive(Clone, Debug)]
pub struct InstanceShape {
    pub p: u64,
    pub witt_degree: usize,
    pub rank: usize,
    pub symmetry: Symmetry,
}

/// Draws `p ∈ {5,7,11,13}`, `f′ ∈ {1,2}`, `r ∈ {2,3,4}` compatible with the
/// spread bound `(p-2)/2`, and `ε` compatible with the rank parity.
pub fn random_shape<R: Rng>(rng: &mut R) -> InstanceShape {
    loop {
        let p = *[5u64, 7, 11, 13].choose(rng).expect("nonempty");
        let rank = rng.gen_range(2..=4usize);
        if rank as u64 - 1 > (p - 2) / 2 {
            continue;
        }
        let symmetry = if rank % 2 == 1 || rng.gen_bool(0.5) { Symmetry::Orthogonal } else { Symmetry::Symplectic };
        let witt_degree = rng.gen_range(1..=2);
        return InstanceShape { p, witt_degree, rank, symmetry };
    }
}

/// A random paired module over the residue field `F_{p^{f′}}` for `shape`.
pub fn random_instance<R: Rng>(rng: &mut R, shape: &InstanceShape) -> Result<PairedFLModule> {
    let k = make_ring(Family::Witt, shape.p, shape.witt_degree, 1)?;
    random_paired(rng, &k, shape.witt_degree, shape.rank, shape.symmetry, ((shape.p - 2) / 2) as i64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn generated_pairings_validate() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for ring in [
            make_ring(Family::Witt, 7, 1, 1).unwrap(),
            make_ring(Family::Witt, 5, 2, 2).unwrap(),
            make_ring(Family::DualNumbers, 7, 1, 3).unwrap(),
        ] {
            for (rank, sym) in [(2, Symmetry::Symplectic), (2, Symmetry::Orthogonal), (3, Symmetry::Orthogonal)] {
                for fp in 1..=ring.f() {
                    if ring.f() % fp != 0 {
                        continue;
                    }
                    let p = random_paired(&mut rng, &ring, fp, rank, sym, 2).unwrap();
                    p.validate().unwrap();
                    assert!(p.module.is_multiplicity_free());
                }
            }
        }
    }

    #[test]
    fn random_shapes_respect_bounds() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..200 {
            let s = random_shape(&mut rng);
            assert!((s.rank as u64 - 1) * 2 <= s.p - 2);
            let inst = random_instance(&mut rng, &s).unwrap();
            inst.validate().unwrap();
            for b in &inst.module.blocks {
                assert!(2 * (b.weights[s.rank - 1] - b.weights[0]) <= s.p as i64 - 2);
            }
        }
    }
}
