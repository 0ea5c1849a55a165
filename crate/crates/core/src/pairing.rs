//! ε-symmetric perfect pairings `M × M → L` and their standard form.

use crate::error::{Error, Result};
use crate::fl_module::{p_pow, FLModule, LData};
use crate::matrix::{gram_transform, Matrix};
use crate::ring::{Ring, RingElem};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Symmetry {
    /// `ε = +1`
    Orthogonal,
    /// `ε = -1`
    Symplectic,
}

impl Symmetry {
    pub fn sign(self) -> i64 {
        match self {
            Symmetry::Orthogonal => 1,
            Symmetry::Symplectic => -1,
        }
    }

    pub fn from_sign(e: i64) -> Result<Self> {
        match e {
            1 => Ok(Symmetry::Orthogonal),
            -1 => Ok(Symmetry::Symplectic),
            _ => Err(Error::InvalidInput(format!("epsilon must be +1 or -1, got {e}"))),
        }
    }
}

/// A module with a pairing: `⟨e_{τ,i}, e_{τ,j}⟩ = gram[τ][i,j] · ℓ_τ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairedFLModule {
    pub module: FLModule,
    pub l: LData,
    pub symmetry: Symmetry,
    pub gram: Vec<Matrix>,
}

/// Standard Gram matrix: antidiagonal ones, with `-1` below the antidiagonal
/// in the symplectic case.
pub fn standard_gram(ring: &Ring, r: usize, symmetry: Symmetry) -> Matrix {
    let mut s = Matrix::zeros(ring, r, r);
    for j in 0..r {
        let js = r - 1 - j;
        s[(j, js)] = if j > js { RingElem::from_int(ring, symmetry.sign()) } else { RingElem::one(ring) };
    }
    s
}

/// Output of [`normalize_standard`]: `normalized` is the module in the basis
/// `v_τ = e_τ · change[τ]`, where the Gram matrix is `omega[τ] · S`.
#[derive(Clone, Debug)]
pub struct Normalization {
    pub change: Vec<Matrix>,
    pub omega: Vec<RingElem>,
    pub normalized: PairedFLModule,
}

impl PairedFLModule {
    pub fn ring(&self) -> &Ring {
        &self.module.ring
    }

    pub fn rank(&self) -> usize {
        self.module.rank()
    }

    pub fn witt_degree(&self) -> usize {
        self.module.witt_degree()
    }

    /// Expected value of `(Φ_τ^T G_{τ+1} Φ_τ)[i,j]`.
    fn compatibility_target(&self, t: usize, i: usize, j: usize) -> RingElem {
        let w = self.module.weights(t);
        let e = self.l.s[t] - w[i] - w[j];
        if e < 0 {
            return RingElem::zero(self.ring());
        }
        &(&self.l.c[t] * &p_pow(self.ring(), e as u32)) * &self.gram[t][(i, j)]
    }

    pub fn validate(&self) -> Result<()> {
        self.module.validate()?;
        let fp = self.witt_degree();
        self.l.validate(fp)?;
        let r = self.rank();
        if self.gram.len() != fp || self.gram.iter().any(|g| g.rows() != r || g.cols() != r) {
            return Err(Error::DimensionMismatch(format!("need {fp} Gram matrices of size {r}x{r}")));
        }
        if self.symmetry == Symmetry::Symplectic && r % 2 == 1 {
            return Err(Error::OddRankSymplectic);
        }
        for (t, g) in self.gram.iter().enumerate() {
            let w = self.module.weights(t);
            for i in 0..r {
                for j in 0..r {
                    if w[i] + w[j] > self.l.s[t] && !g[(i, j)].is_zero() {
                        return Err(Error::FiltrationViolation { block: t, i, j });
                    }
                }
            }
        }
        let eps = RingElem::from_int(self.ring(), self.symmetry.sign());
        for (t, g) in self.gram.iter().enumerate() {
            for i in 0..r {
                for j in i..r {
                    if g[(j, i)] != &eps * &g[(i, j)] {
                        return Err(Error::SymmetryViolation { block: t, i, j });
                    }
                }
            }
        }
        for (t, g) in self.gram.iter().enumerate() {
            if !g.is_invertible() {
                return Err(Error::NotPerfect { block: t });
            }
        }
        for t in 0..fp {
            let phi = self.module.phi(t);
            let lhs = phi.transpose().mul(&self.gram[(t + 1) % fp]).mul(phi);
            for i in 0..r {
                for j in 0..r {
                    if lhs[(i, j)] != self.compatibility_target(t, i, j) {
                        return Err(Error::PhiIncompatible { block: t, i, j });
                    }
                }
            }
        }
        Ok(())
    }

    /// The same pairing in the basis `b_τ = e_τ C_τ`.
    pub fn change_basis(&self, c: &[Matrix]) -> Result<Self> {
        let module = self.module.change_basis(c)?;
        let gram = self.gram.iter().zip(c).map(|(g, ct)| gram_transform(g, ct)).collect::<Result<_>>()?;
        Ok(PairedFLModule { module, l: self.l.clone(), symmetry: self.symmetry, gram })
    }

    pub fn reduce_to(&self, target: &Ring) -> Result<Self> {
        Ok(PairedFLModule {
            module: self.module.reduce_to(target)?,
            l: LData { s: self.l.s.clone(), c: self.l.c.iter().map(|c| c.reduce_to(target)).collect::<Result<_>>()? },
            symmetry: self.symmetry,
            gram: self.gram.iter().map(|g| g.reduce_to(target)).collect::<Result<_>>()?,
        })
    }

    pub fn lift_to(&self, target: &Ring) -> Result<Self> {
        Ok(PairedFLModule {
            module: self.module.lift_to(target)?,
            l: LData { s: self.l.s.clone(), c: self.l.c.iter().map(|c| target.lift_from(c)).collect::<Result<_>>()? },
            symmetry: self.symmetry,
            gram: self.gram.iter().map(|g| g.lift_to(target)).collect::<Result<_>>()?,
        })
    }

    pub fn check_multiplicity_free(&self) -> Result<()> {
        for (t, b) in self.module.blocks.iter().enumerate() {
            if b.weights.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::MultiplicityNotFree { block: t });
            }
        }
        Ok(())
    }
}

/// Column operation `v_h += a v_x` on the basis matrix, with the matching
/// congruence update of the Gram matrix.
fn add_multiple(c: &mut Matrix, g: &mut Matrix, h: usize, x: usize, a: &RingElem) {
    if a.is_zero() {
        return;
    }
    let r = g.rows();
    for i in 0..c.rows() {
        let v = &c[(i, x)] * a;
        c[(i, h)] += v;
    }
    for i in 0..r {
        let v = &g[(i, x)] * a;
        g[(i, h)] += v;
    }
    for j in 0..r {
        let v = &g[(x, j)] * a;
        g[(h, j)] += v;
    }
}

fn scale_vector(c: &mut Matrix, g: &mut Matrix, h: usize, a: &RingElem) {
    for i in 0..c.rows() {
        let v = &c[(i, h)] * a;
        c[(i, h)] = v;
    }
    for i in 0..g.rows() {
        let v = &g[(i, h)] * a;
        g[(i, h)] = v;
        let v = &g[(h, i)] * a;
        g[(h, i)] = v;
    }
}

/// Adapted basis change bringing every block's Gram matrix to `ω_τ · S`.
///
/// For `j` from the outside in, with partner `j* = r-1-j`: the orthogonal
/// case first clears `⟨v_j, v_j⟩` with a multiple of `v_{j*}`, then every
/// `v_h` with `j < h < j*` is replaced by `v_h - (G[j,h]/G[j,j*]) v_{j*}`.
/// Finally `v_1..v_{r/2}` are rescaled so the antidiagonal is constant.
pub fn normalize_standard(p: &PairedFLModule) -> Result<Normalization> {
    p.validate()?;
    p.check_multiplicity_free()?;
    let ring = p.ring().clone();
    let r = p.rank();
    let two_inv = RingElem::from_u64(&ring, 2).inv().ok_or(Error::EvenPrime)?;
    let mut change = Vec::new();
    let mut omega = Vec::new();
    for (t, g0) in p.gram.iter().enumerate() {
        let mut c = Matrix::identity(&ring, r);
        let mut g = g0.clone();
        for j in 0..r / 2 {
            let js = r - 1 - j;
            let pivot_inv = g[(j, js)].inv().ok_or(Error::NotPerfect { block: t })?;
            if p.symmetry == Symmetry::Orthogonal && !g[(j, j)].is_zero() {
                let a = -(&(&g[(j, j)] * &pivot_inv) * &two_inv);
                add_multiple(&mut c, &mut g, j, js, &a);
            }
            for h in j + 1..js {
                let a = -(&g[(j, h)] * &pivot_inv);
                add_multiple(&mut c, &mut g, h, js, &a);
            }
        }
        let w = if r % 2 == 1 { g[(r / 2, r / 2)].clone() } else { RingElem::one(&ring) };
        for j in 0..r / 2 {
            let js = r - 1 - j;
            let a = &w * &g[(j, js)].inv().ok_or(Error::NotPerfect { block: t })?;
            scale_vector(&mut c, &mut g, j, &a);
        }
        let target = standard_gram(&ring, r, p.symmetry).scale(&w);
        if g != target || !w.is_unit() {
            return Err(Error::NotPerfect { block: t });
        }
        change.push(c);
        omega.push(w);
    }
    let normalized = p.change_basis(&change)?;
    Ok(Normalization { change, omega, normalized })
}

impl Normalization {
    /// Optional post-pass: rescale each block by a square root of the 1-unit
    /// `ω / lift(ω̄)` so that `ω` becomes the canonical lift of its residue.
    /// Only the odd orthogonal case has `ω ≠ 1`.
    pub fn with_residue_omega(&self, original: &PairedFLModule) -> Result<Normalization> {
        let ring = original.ring().clone();
        let mut change = Vec::with_capacity(self.change.len());
        let mut omega = Vec::with_capacity(self.omega.len());
        for (c, w) in self.change.iter().zip(&self.omega) {
            let wbar = ring.lift_from(&w.residue())?;
            let u = w * &wbar.try_inv()?;
            let lambda = u.unit_sqrt()?.try_inv()?;
            change.push(c.scale(&lambda));
            omega.push(wbar);
        }
        let normalized = original.change_basis(&change)?;
        Ok(Normalization { change, omega, normalized })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fl_module::Block;
    use crate::ring::{make_ring, Family};

    fn f5() -> Ring {
        make_ring(Family::Witt, 5, 1, 1).unwrap()
    }

    fn pcanon2_with(g: &[&[i64]]) -> PairedFLModule {
        let k = f5();
        PairedFLModule {
            module: FLModule::from_ints(&k, (0, 1), &[0, 1], &[&[1, 0], &[0, 1]]),
            l: LData::trivial(&k, vec![1]),
            symmetry: Symmetry::Symplectic,
            gram: vec![Matrix::from_ints(&k, g)],
        }
    }

    #[test]
    fn validate_examples() {
        pcanon2_with(&[&[0, 1], &[-1, 0]]).validate().unwrap();
        assert_eq!(
            pcanon2_with(&[&[0, 1], &[1, 0]]).validate().unwrap_err(),
            Error::SymmetryViolation { block: 0, i: 0, j: 1 }
        );
        assert_eq!(
            pcanon2_with(&[&[0, 1], &[-1, 1]]).validate().unwrap_err(),
            Error::FiltrationViolation { block: 0, i: 1, j: 1 }
        );
        assert_eq!(pcanon2_with(&[&[0, 0], &[0, 0]]).validate().unwrap_err(), Error::NotPerfect { block: 0 });
        let mut bad = pcanon2_with(&[&[0, 1], &[-1, 0]]);
        bad.module.blocks[0].phi = Matrix::from_ints(&f5(), &[&[2, 0], &[0, 1]]);
        assert_eq!(bad.validate().unwrap_err(), Error::PhiIncompatible { block: 0, i: 0, j: 1 });
        let k = f5();
        let odd = PairedFLModule {
            module: FLModule::from_ints(&k, (0, 0), &[0], &[&[1]]),
            l: LData::trivial(&k, vec![0]),
            symmetry: Symmetry::Symplectic,
            gram: vec![Matrix::from_ints(&k, &[&[1]])],
        };
        assert_eq!(odd.validate().unwrap_err(), Error::OddRankSymplectic);
    }

    #[test]
    fn normalize_examples() {
        let p = pcanon2_with(&[&[0, 1], &[-1, 0]]);
        let n = normalize_standard(&p).unwrap();
        assert!(n.omega[0].is_one());
        assert_eq!(n.change[0], Matrix::identity(&f5(), 2));

        let p = pcanon2_with(&[&[0, 2], &[-2, 0]]);
        let n = normalize_standard(&p).unwrap();
        assert!(n.omega[0].is_one());
        assert_eq!(n.change[0], Matrix::from_ints(&f5(), &[&[3, 0], &[0, 1]]));
        n.normalized.validate().unwrap();
    }

    #[test]
    fn normalize_odd_orthogonal_over_f7() {
        let k = make_ring(Family::Witt, 7, 1, 1).unwrap();
        let s = standard_gram(&k, 3, Symmetry::Orthogonal);
        let base = PairedFLModule {
            module: FLModule::new(&k, (0, 2), vec![Block { weights: vec![0, 1, 2], phi: Matrix::identity(&k, 3) }]),
            l: LData::trivial(&k, vec![2]),
            symmetry: Symmetry::Orthogonal,
            gram: vec![s.scale(&RingElem::from_int(&k, 3))],
        };
        base.validate().unwrap();
        let a = Matrix::from_ints(&k, &[&[2, 0, 0], &[3, 1, 0], &[4, 5, 6]]);
        let p = base.change_basis(&[a]).unwrap();
        p.validate().unwrap();
        assert!(!p.gram[0][(0, 0)].is_zero());
        let n = normalize_standard(&p).unwrap();
        assert_eq!(gram_transform(&p.gram[0], &n.change[0]).unwrap(), s.scale(&n.omega[0]));
        n.normalized.validate().unwrap();
        // the change of basis is lower triangular with unit diagonal entries
        for i in 0..3 {
            assert!(n.change[0][(i, i)].is_unit());
            for j in i + 1..3 {
                assert!(n.change[0][(i, j)].is_zero());
            }
        }
    }

    #[test]
    fn residue_omega_post_pass() {
        let r = make_ring(Family::DualNumbers, 7, 1, 3).unwrap();
        let s = standard_gram(&r, 3, Symmetry::Orthogonal);
        let w = RingElem::from_coeffs(&r, &[3, 2, 5]);
        let p = PairedFLModule {
            module: FLModule::new(&r, (0, 2), vec![Block { weights: vec![0, 1, 2], phi: Matrix::identity(&r, 3) }]),
            l: LData::trivial(&r, vec![2]),
            symmetry: Symmetry::Orthogonal,
            gram: vec![s.scale(&w)],
        };
        let n = normalize_standard(&p).unwrap();
        assert_eq!(n.omega[0], w);
        let m = n.with_residue_omega(&p).unwrap();
        assert_eq!(m.omega[0], RingElem::from_int(&r, 3));
        assert_eq!(m.normalized.gram[0], s.scale(&m.omega[0]));
        m.normalized.validate().unwrap();
    }
}
