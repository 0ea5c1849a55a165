//! Tangent space of the deformation condition over the dual numbers.
//!
//! A first-order deformation of a normalized paired module is
//! `Φ'_τ = (1 + t δ'_{τ+1}) Φ_τ` with `δ'` in the pairing Lie algebra.
//! Two of them are equivalent when they differ by the coboundary of some
//! filtration-preserving `α` in that Lie algebra:
//! `δ'_{τ+1} ↦ δ'_{τ+1} − α_{τ+1} + Φ_τ D(α_τ) Φ_τ^{-1}`, where `D` applies
//! the p-power factors (over `k` only equal-weight entries survive).
//! The kernel of this map is the space of pairing-preserving endomorphisms.

use std::collections::HashSet;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::feasibility::{root_data, GroupType};
use crate::fl_module::{adapted_scale, MorphismSpace};
use crate::matrix::Matrix;
use crate::pairing::{normalize_standard, PairedFLModule, Symmetry};
use crate::ring::{Ring, RingElem};
use crate::size_guard;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TangentReport {
    pub dim_pairing_lie: usize,
    pub dim_fil0: usize,
    pub dim_end_mf_pairing: usize,
    pub dim_tangent: usize,
    pub formula_check: bool,
}

/// The reductive group whose Lie algebra is the pairing Lie algebra.
pub fn group_of(p: &PairedFLModule) -> Result<GroupType> {
    match p.symmetry {
        Symmetry::Symplectic => GroupType::gsp(p.rank()),
        Symmetry::Orthogonal => GroupType::go(p.rank()),
    }
}

fn check_pre(p: &PairedFLModule) -> Result<()> {
    if !p.ring().is_field() {
        return Err(Error::NotResidueField);
    }
    p.validate()?;
    p.check_multiplicity_free()
}

fn to_matrix(ring: &Ring, r: usize, v: &[RingElem]) -> Matrix {
    Matrix::from_fn(ring, r, r, |i, j| v[i * r + j].clone())
}

fn flatten(a: &Matrix) -> Vec<RingElem> {
    (0..a.rows()).flat_map(|i| a.row(i)).collect()
}

/// Rows of the linear system `A^T G + G A = 0` in the entries `A[l, h]`
/// (index `l·r + h`).
fn lie_rows(g: &Matrix) -> Matrix {
    let r = g.rows();
    let mut m = Matrix::zeros(g.ring(), r * r, r * r);
    for i in 0..r {
        for j in 0..r {
            let e = i * r + j;
            for l in 0..r {
                m[(e, l * r + i)] += g[(l, j)].clone();
                m[(e, l * r + j)] += g[(i, l)].clone();
            }
        }
    }
    m
}

fn fil0_rows(ring: &Ring, weights: &[i64]) -> Matrix {
    let r = weights.len();
    let cells: Vec<usize> = (0..r * r).filter(|&a| weights[a / r] < weights[a % r]).collect();
    let mut m = Matrix::zeros(ring, cells.len(), r * r);
    for (e, &a) in cells.iter().enumerate() {
        m[(e, a)] = RingElem::one(ring);
    }
    m
}

/// Per-block bases of `{A : A^T G_τ + G_τ A = 0}`, indexed `[τ][i]`.
pub fn delta_space(p: &PairedFLModule) -> Result<Vec<Vec<Matrix>>> {
    if !p.ring().is_field() {
        return Err(Error::NotResidueField);
    }
    let r = p.rank();
    Ok(p.gram
        .iter()
        .map(|g| lie_rows(g).nullspace().iter().map(|v| to_matrix(p.ring(), r, v)).collect())
        .collect())
}

/// Per-block bases of the filtration-preserving part of [`delta_space`].
pub fn fil0_subspace(p: &PairedFLModule) -> Result<Vec<Vec<Matrix>>> {
    if !p.ring().is_field() {
        return Err(Error::NotResidueField);
    }
    p.check_multiplicity_free()?;
    let r = p.rank();
    Ok(p.gram
        .iter()
        .zip(&p.module.blocks)
        .map(|(g, b)| {
            let sys = lie_rows(g).stack(&fil0_rows(p.ring(), &b.weights));
            sys.nullspace().iter().map(|v| to_matrix(p.ring(), r, v)).collect()
        })
        .collect())
}

pub fn is_in_delta_space(p: &PairedFLModule, tau: usize, a: &Matrix) -> bool {
    let g = &p.gram[tau];
    a.transpose().mul(g).add(&g.mul(a)).is_zero()
}

pub fn is_in_fil0(p: &PairedFLModule, tau: usize, a: &Matrix) -> bool {
    let w = &p.module.blocks[tau].weights;
    let r = w.len();
    is_in_delta_space(p, tau, a) && (0..r * r).all(|c| w[c / r] >= w[c % r] || a[(c / r, c % r)].is_zero())
}

/// The linear map `α ↦ (α_{τ+1} Φ_τ − Φ_τ D(α_τ))_τ` on the coordinates of
/// `fil0`, as a matrix with one column per basis element.
fn commutation_matrix(p: &PairedFLModule, fil0: &[Vec<Matrix>], conjugate: bool) -> Result<Matrix> {
    let k = p.ring();
    let r = p.rank();
    let n = p.witt_degree();
    let dims: Vec<usize> = fil0.iter().map(Vec::len).collect();
    let total: usize = dims.iter().sum();
    let mut out = Matrix::zeros(k, n * r * r, total);
    let phis: Vec<Matrix> = p.module.blocks.iter().map(|b| b.phi.clone()).collect();
    let phi_inv: Vec<Matrix> = phis.iter().map(Matrix::inverse).collect::<Result<_>>()?;
    let mut col = 0;
    for (t, basis) in fil0.iter().enumerate() {
        let w = &p.module.blocks[t].weights;
        let prev = (t + n - 1) % n;
        for a in basis {
            // α_t enters equation t as −Φ_t D(α_t) and equation t−1 as α_t Φ_{t−1}
            let mut contrib = vec![Matrix::zeros(k, r, r); n];
            let d = phis[t].mul(&adapted_scale(a, w, w)?);
            if conjugate {
                contrib[(t + 1) % n] = contrib[(t + 1) % n].sub(&d.mul(&phi_inv[t]));
                contrib[t] = contrib[t].add(a);
            } else {
                contrib[t] = contrib[t].sub(&d);
                contrib[prev] = contrib[prev].add(&a.mul(&phis[prev]));
            }
            for (e, m) in contrib.iter().enumerate() {
                for (i, v) in flatten(m).into_iter().enumerate() {
                    out[(e * r * r + i, col)] = v;
                }
            }
            col += 1;
        }
    }
    Ok(out)
}

fn split_coords(fil0: &[Vec<Matrix>], v: &[RingElem], ring: &Ring, r: usize) -> Vec<Matrix> {
    let mut off = 0;
    fil0.iter()
        .map(|basis| {
            let mut m = Matrix::zeros(ring, r, r);
            for (a, c) in basis.iter().zip(&v[off..]) {
                m = m.add(&a.scale(c));
            }
            off += basis.len();
            m
        })
        .collect()
}

/// Filtration-preserving pairing-Lie endomorphisms commuting with `φ`.
/// The input must be normalized or otherwise in a basis where `D`
/// preserves the pairing Lie algebra; [`tangent_report`] normalizes first.
pub fn end_mf_pairing(p: &PairedFLModule) -> Result<MorphismSpace> {
    check_pre(p)?;
    let fil0 = fil0_subspace(p)?;
    let sys = commutation_matrix(p, &fil0, false)?;
    let basis = sys.nullspace().iter().map(|v| split_coords(&fil0, v, p.ring(), p.rank())).collect();
    Ok(MorphismSpace { basis })
}

fn normalized(p: &PairedFLModule) -> Result<PairedFLModule> {
    check_pre(p)?;
    let pr = p.ring().p() as i64;
    for b in &p.module.blocks {
        let spread = b.weights.last().copied().unwrap_or(0) - b.weights.first().copied().unwrap_or(0);
        if 2 * spread > pr - 2 {
            return Err(Error::RangeViolation { length: spread, limit: "(p\u{2212}2)/2".into() });
        }
    }
    Ok(normalize_standard(p)?.normalized)
}

/// Coboundary image of `fil0` inside the pairing Lie algebra, as column
/// vectors of flattened block tuples.
fn coboundary(p: &PairedFLModule, fil0: &[Vec<Matrix>]) -> Result<Matrix> {
    let cob = commutation_matrix(p, fil0, true)?;
    let r = p.rank();
    for c in 0..cob.cols() {
        let v = cob.column(c);
        for t in 0..p.witt_degree() {
            let m = to_matrix(p.ring(), r, &v[t * r * r..(t + 1) * r * r]);
            if !is_in_delta_space(p, t, &m) {
                return Err(Error::InternalRankFailure(format!("coboundary leaves the Lie algebra in block {t}")));
            }
        }
    }
    Ok(cob)
}

pub fn tangent_report(p: &PairedFLModule) -> Result<TangentReport> {
    let q = normalized(p)?;
    let lie = delta_space(&q)?;
    let fil0 = fil0_subspace(&q)?;
    let dim_pairing_lie = lie.iter().map(Vec::len).sum();
    let dim_fil0 = fil0.iter().map(Vec::len).sum();
    let dim_end_mf_pairing = end_mf_pairing(&q)?.dim();
    let image = coboundary(&q, &fil0)?.rank();
    let dim_tangent = dim_pairing_lie - image;
    // GO_1 has no roots; the group constructor only covers m ≥ 2
    let npos = if p.rank() == 1 { 0 } else { root_data(&group_of(p)?).num_pos_roots };
    Ok(TangentReport {
        dim_pairing_lie,
        dim_fil0,
        dim_end_mf_pairing,
        dim_tangent,
        formula_check: dim_tangent as i64 - dim_end_mf_pairing as i64 == (q.witt_degree() * npos) as i64,
    })
}

/// `|k|^{dim_tangent}`.
pub fn deformation_count(p: &PairedFLModule) -> Result<u128> {
    let rep = tangent_report(p)?;
    let q = p.ring().residue_size();
    let guard = size_guard(1_000_000);
    let mut n: u128 = 1;
    for _ in 0..rep.dim_tangent {
        n = n.saturating_mul(q);
        if n > guard {
            return Err(Error::EnumerationTooLarge(format!("|k|^{} exceeds {guard}", rep.dim_tangent)));
        }
    }
    Ok(n)
}

fn all_combinations(basis: &[Vec<RingElem>], elems: &[RingElem], len: usize) -> Vec<Vec<RingElem>> {
    let k = elems[0].ring().clone();
    let mut out = vec![vec![RingElem::zero(&k); len]];
    for b in basis {
        let mut next = Vec::with_capacity(out.len() * elems.len());
        for v in &out {
            for c in elems {
                next.push(v.iter().zip(b).map(|(x, y)| x + &(c * y)).collect());
            }
        }
        out = next;
    }
    out
}

fn key(v: &[RingElem]) -> Vec<u128> {
    v.iter().map(RingElem::encode).collect()
}

/// Counts equivalence classes of first-order deformations by brute force:
/// enumerates every `δ'` in the pairing Lie algebra and every `α` in its
/// filtration-preserving part, and counts orbits of `δ' ↦ δ' + cob(α)`.
pub fn enumerate_deformations(p: &PairedFLModule) -> Result<u128> {
    let q = normalized(p)?;
    let k = q.ring().clone();
    let r = q.rank();
    let n = q.witt_degree();
    let lie = delta_space(&q)?;
    let fil0 = fil0_subspace(&q)?;
    let size = k.residue_size();
    let dl: u32 = lie.iter().map(Vec::len).sum::<usize>() as u32;
    let df: u32 = fil0.iter().map(Vec::len).sum::<usize>() as u32;
    let work = size.checked_pow(dl + df).unwrap_or(u128::MAX);
    let guard = size_guard(10_000_000);
    if work > guard {
        return Err(Error::EnumerationTooLarge(format!("|k|^{} orbit steps exceed {guard}", dl + df)));
    }
    let elems = k.field_elements()?;
    let len = n * r * r;
    // δ' basis as flattened block tuples
    let mut lie_flat = Vec::new();
    for (t, basis) in lie.iter().enumerate() {
        for a in basis {
            let mut v = vec![RingElem::zero(&k); len];
            v[t * r * r..(t + 1) * r * r].clone_from_slice(&flatten(a));
            lie_flat.push(v);
        }
    }
    let cob = coboundary(&q, &fil0)?;
    let cob_cols: Vec<Vec<RingElem>> = (0..cob.cols()).map(|c| cob.column(c)).collect();
    let images: Vec<Vec<RingElem>> = {
        let mut seen = HashSet::new();
        all_combinations(&cob_cols, &elems, len).into_iter().filter(|v| seen.insert(key(v))).collect()
    };
    let mut visited: HashSet<Vec<u128>> = HashSet::new();
    let mut orbits: u128 = 0;
    for d in all_combinations(&lie_flat, &elems, len) {
        if visited.contains(&key(&d)) {
            continue;
        }
        orbits += 1;
        for img in &images {
            let s: Vec<RingElem> = d.iter().zip(img).map(|(x, y)| x + y).collect();
            visited.insert(key(&s));
        }
    }
    Ok(orbits)
}
