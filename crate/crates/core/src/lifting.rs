//! Lifting a paired module along a small surjection `R' ↠ R`.
//!
//! In a normalized basis the pairing condition on `Φ_τ` reads
//! `Φ_τ^T S Φ_τ = λ_τ S`. An arbitrary lift `Φ₀` misses this by a defect
//! `E = λ S − Φ₀^T S Φ₀` with entries in the kernel `I`. Because `I² = 0`,
//! a correction `Φ₀ + δ` with `δ ∈ M_r(I)` works iff `Y + εY^T = E` where
//! `Y = Φ₀^T S δ`. Only the residue of `Φ₀^T S` matters, so this is a linear
//! system over `k` in the `r²` kernel coordinates of `δ`.
//!
//! Unknowns are grouped by columns `U_i` of `δ`, equations by their first
//! index `i` (the pairs `(i, j)` with `j ≥ i`). An equation in group `j`
//! involves only columns `≥ j`, so the system is block triangular and is
//! solved by back substitution from the last column.

use crate::error::{Error, Result};
use crate::fl_module::{Block, FLModule, LData};
use crate::matrix::Matrix;
use crate::pairing::{normalize_standard, standard_gram, Normalization, PairedFLModule, Symmetry};
use crate::ring::{make_small_surjection, Family, RingElem, SmallSurj};

/// A paired module over `R` together with a small surjection onto `R`.
#[derive(Clone, Debug)]
pub struct LiftProblem {
    pub base: PairedFLModule,
    pub surj: SmallSurj,
}

impl LiftProblem {
    /// Checks the preconditions: `base` is valid over the target of `surj`,
    /// multiplicity-free, and every block spans at most `(p-2)/2` weights.
    pub fn new(base: PairedFLModule, surj: SmallSurj) -> Result<Self> {
        if base.ring() != surj.target() {
            return Err(Error::RingMismatch);
        }
        base.validate()?;
        base.check_multiplicity_free()?;
        let p = base.ring().p() as i64;
        for b in &base.module.blocks {
            let spread = b.weights.last().copied().unwrap_or(0) - b.weights.first().copied().unwrap_or(0);
            if 2 * spread > p - 2 {
                return Err(Error::RangeViolation { length: spread, limit: "(p\u{2212}2)/2".into() });
            }
        }
        Ok(LiftProblem { base, surj })
    }
}

/// The linear system of one block `τ`.
#[derive(Clone, Debug)]
pub struct BlockSystem {
    /// The initial lift in the normalized basis, over `R'`.
    pub phi0: Matrix,
    /// `λ_τ = c'_τ ω'_τ / ω'_{τ+1}` over `R'`.
    pub lambda: RingElem,
    /// `E = λ S − Φ₀^T S Φ₀`, entries in `I`.
    pub defect: Matrix,
    /// Equation labels `(i, j)`, `i ≤ j`, sorted.
    pub equations: Vec<(usize, usize)>,
    /// Coefficients over `k`; column `col·r + b` is the unknown `δ[b, col]`.
    pub matrix: Matrix,
    /// Kernel coordinates of `E[i, j]`.
    pub rhs: Vec<RingElem>,
}

impl BlockSystem {
    fn rank(&self) -> usize {
        self.phi0.rows()
    }

    fn eq_rows(&self, group: usize) -> Vec<usize> {
        (0..self.equations.len()).filter(|&e| self.equations[e].0 == group).collect()
    }

    fn unknown_cols(&self, col: usize) -> Vec<usize> {
        let r = self.rank();
        (col * r..(col + 1) * r).collect()
    }

    /// The block `T_{ij}`: how the unknowns `U_i` (column `i` of `δ`) enter
    /// the equations of group `j`.
    pub fn t_block(&self, i: usize, j: usize) -> Matrix {
        self.matrix.select(&self.eq_rows(j), &self.unknown_cols(i))
    }
}

#[derive(Clone, Debug)]
pub struct CorrectionSystem {
    pub symmetry: Symmetry,
    pub blocks: Vec<BlockSystem>,
}

impl CorrectionSystem {
    pub fn unknowns_per_block(&self) -> usize {
        self.blocks.first().map_or(0, |b| b.matrix.cols())
    }
    pub fn equations_per_block(&self) -> usize {
        self.blocks.first().map_or(0, |b| b.equations.len())
    }
}

/// Coefficientwise lifts of the normalized `Φ_τ`.
pub fn canonical_initial_lift(prob: &LiftProblem, norm: &Normalization) -> Result<Vec<Matrix>> {
    norm.normalized.module.blocks.iter().map(|b| b.phi.lift_to(prob.surj.source())).collect()
}

/// Builds the correction system for the initial lifts `phi0`, which must
/// reduce to the normalized `Φ_τ` of `norm`.
pub fn build_correction_system(prob: &LiftProblem, norm: &Normalization, phi0: &[Matrix]) -> Result<CorrectionSystem> {
    let surj = &prob.surj;
    let rp = surj.source();
    let r = prob.base.rank();
    let eps = prob.base.symmetry;
    let s = standard_gram(rp, r, eps);
    let nblocks = phi0.len();
    if nblocks != norm.normalized.witt_degree() {
        return Err(Error::DimensionMismatch("one initial lift per block".into()));
    }
    let omega: Vec<RingElem> = norm.omega.iter().map(|w| surj.lift(w)).collect();
    let k = rp.residue_field();
    let mut equations = Vec::new();
    for i in 0..r {
        for j in i..r {
            if i < j || eps == Symmetry::Orthogonal {
                equations.push((i, j));
            }
        }
    }
    let mut blocks = Vec::with_capacity(nblocks);
    for (t, p0) in phi0.iter().enumerate() {
        if p0.reduce_to(surj.target())? != norm.normalized.module.blocks[t].phi {
            return Err(Error::InvalidInput(format!("initial lift of block {t} does not reduce to the base")));
        }
        let next = (t + 1) % nblocks;
        let c = surj.lift(&norm.normalized.l.c[t]);
        let lambda = &(&c * &omega[t]) * &omega[next].try_inv()?;
        let defect = s.scale(&lambda).sub(&p0.transpose().mul(&s).mul(p0));
        let m = p0.transpose().mul(&s).residue();
        let sign = RingElem::from_int(&k, eps.sign());
        let mut matrix = Matrix::zeros(&k, equations.len(), r * r);
        let mut rhs = Vec::with_capacity(equations.len());
        for (e, &(i, j)) in equations.iter().enumerate() {
            for b in 0..r {
                matrix[(e, j * r + b)] += m[(i, b)].clone();
                matrix[(e, i * r + b)] += &sign * &m[(j, b)];
            }
            let coord = surj.kernel_coordinate(&defect[(i, j)]).ok_or_else(|| {
                Error::InternalRankFailure(format!("defect entry ({i},{j}) of block {t} is not in the kernel"))
            })?;
            rhs.push(coord);
        }
        blocks.push(BlockSystem { phi0: p0.clone(), lambda, defect, equations: equations.clone(), matrix, rhs });
    }
    Ok(CorrectionSystem { symmetry: eps, blocks })
}

/// Solves every block by back substitution; returns `δ_τ` over `R'`.
pub fn solve_correction(sys: &CorrectionSystem, surj: &SmallSurj) -> Result<Vec<Matrix>> {
    let mut out = Vec::with_capacity(sys.blocks.len());
    for (t, b) in sys.blocks.iter().enumerate() {
        let r = b.rank();
        let k = b.matrix.ring().clone();
        let mut x: Vec<Option<Vec<RingElem>>> = vec![None; r];
        for i in (0..r).rev() {
            let rows = b.eq_rows(i);
            let mut rhs: Vec<RingElem> = rows.iter().map(|&e| b.rhs[e].clone()).collect();
            for (col, xc) in x.iter().enumerate().skip(i + 1) {
                let contrib = b.t_block(col, i).mul_vec(xc.as_ref().expect("solved"));
                for (v, c) in rhs.iter_mut().zip(contrib) {
                    *v -= c;
                }
            }
            let xi = if rows.is_empty() {
                vec![RingElem::zero(&k); r]
            } else {
                b.t_block(i, i).solve(&rhs).ok_or_else(|| {
                    Error::InternalRankFailure(format!("diagonal block {i} of block {t} is not surjective"))
                })?
            };
            x[i] = Some(xi);
        }
        let flat: Vec<RingElem> = x.into_iter().flat_map(|v| v.expect("solved")).collect();
        if b.matrix.mul_vec(&flat) != b.rhs {
            return Err(Error::InternalRankFailure(format!("nonzero residual in block {t}")));
        }
        out.push(Matrix::from_fn(surj.source(), r, r, |row, col| surj.kernel_element(&flat[col * r + row])));
    }
    Ok(out)
}

/// A successful lift, both in the original basis (lifted along the lift of
/// the normalizing change) and in the normalized basis.
#[derive(Clone, Debug)]
pub struct LiftResult {
    pub lifted: PairedFLModule,
    pub normalized: PairedFLModule,
    pub delta: Vec<Matrix>,
}

/// Lifts `prob.base` to the source of `prob.surj`.
pub fn lift_small(prob: &LiftProblem) -> Result<LiftResult> {
    let norm = normalize_standard(&prob.base)?;
    let phi0 = canonical_initial_lift(prob, &norm)?;
    lift_small_from(prob, &norm, &phi0)
}

/// As [`lift_small`], starting from the given initial lifts.
pub fn lift_small_from(prob: &LiftProblem, norm: &Normalization, phi0: &[Matrix]) -> Result<LiftResult> {
    let surj = &prob.surj;
    let rp = surj.source();
    let base = &norm.normalized;
    let sys = build_correction_system(prob, norm, phi0)?;
    let delta = solve_correction(&sys, surj)?;
    let s = standard_gram(rp, base.rank(), base.symmetry);
    let blocks: Vec<Block> = base
        .module
        .blocks
        .iter()
        .zip(phi0.iter().zip(&delta))
        .map(|(b, (p0, d))| Block { weights: b.weights.clone(), phi: p0.add(d) })
        .collect();
    let normalized = PairedFLModule {
        module: FLModule::new(rp, base.module.bounds, blocks),
        l: LData { s: base.l.s.clone(), c: base.l.c.iter().map(|c| surj.lift(c)).collect() },
        symmetry: base.symmetry,
        gram: norm.omega.iter().map(|w| s.scale(&surj.lift(w))).collect(),
    };
    normalized.validate().map_err(|e| Error::InternalRankFailure(format!("normalized lift invalid: {e}")))?;
    let back: Vec<Matrix> = norm
        .change
        .iter()
        .map(|c| c.lift_to(rp).and_then(|c| c.inverse()))
        .collect::<Result<_>>()?;
    let lifted = normalized.change_basis(&back)?;
    lifted.validate().map_err(|e| Error::InternalRankFailure(format!("lift invalid: {e}")))?;
    if lifted.reduce_to(surj.target())? != prob.base {
        return Err(Error::InternalRankFailure("lift does not reduce to the base".into()));
    }
    Ok(LiftResult { lifted, normalized, delta })
}

/// Lifts a module over the residue field through the levels `2..=n` of
/// `family`, returning all stages starting with `base`.
pub fn lift_tower(base: &PairedFLModule, n: u32, family: Family) -> Result<Vec<PairedFLModule>> {
    if !base.ring().is_field() {
        return Err(Error::NotResidueField);
    }
    let mut stages = vec![base.clone()];
    for m in 2..=n {
        let ring = base.ring().at_level(family, m)?;
        let surj = make_small_surjection(&ring)?;
        let prev = stages.last().expect("nonempty").clone();
        stages.push(lift_small(&LiftProblem::new(prev, surj)?)?.lifted);
    }
    Ok(stages)
}
