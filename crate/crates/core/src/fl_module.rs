//! Fontaine-Laffaille modules in adapted storage.
//!
//! A module over the coefficient ring `R` with `f′` embedding blocks is stored
//! per block `τ` as a weight-sorted adapted basis `e_{τ,1..r}` and a matrix
//! `Φ_τ` whose column `i` is `φ^{w_{τ,i}}(e_{τ,i})` written in the basis of
//! block `τ+1`. Lower maps are recovered as `φ^j(e_i) = p^{w_i-j} φ^{w_i}(e_i)`.

use rand::{Rng as _, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::ring::{Ring, RingElem};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Block {
    pub weights: Vec<i64>,
    pub phi: Matrix,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FLModule {
    pub ring: Ring,
    /// Declared weight interval `[a, b]`.
    pub bounds: (i64, i64),
    pub blocks: Vec<Block>,
}

/// The rank-one target of a pairing: weight `s_τ` and unit `c_τ` per block,
/// with `φ^{s_τ}(ℓ_τ) = c_τ ℓ_{τ+1}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LData {
    pub s: Vec<i64>,
    pub c: Vec<RingElem>,
}

impl LData {
    pub fn trivial(ring: &Ring, s: Vec<i64>) -> Self {
        let c = vec![RingElem::one(ring); s.len()];
        LData { s, c }
    }

    pub fn validate(&self, witt_degree: usize) -> Result<()> {
        if self.s.len() != witt_degree || self.c.len() != witt_degree {
            return Err(Error::InvalidLData(format!("expected {witt_degree} entries for s and c")));
        }
        if let Some(t) = self.c.iter().position(|c| !c.is_unit()) {
            return Err(Error::InvalidLData(format!("c_{t} is not a unit")));
        }
        Ok(())
    }

    /// `L` itself as a rank-one module.
    pub fn as_module(&self) -> FLModule {
        let ring = self.c[0].ring().clone();
        let lo = *self.s.iter().min().expect("nonempty");
        let hi = *self.s.iter().max().expect("nonempty");
        let blocks = self
            .s
            .iter()
            .zip(&self.c)
            .map(|(&s, c)| Block { weights: vec![s], phi: Matrix::diagonal(&ring, std::slice::from_ref(c)) })
            .collect();
        FLModule { ring, bounds: (lo, hi), blocks }
    }
}

/// `p^e` in `ring` (zero in characteristic `p` for `e > 0`).
pub fn p_pow(ring: &Ring, e: u32) -> RingElem {
    RingElem::from_u64(ring, ring.p()).pow(e as u128)
}

/// `D(A)[k,h] = p^{wr_k - wc_h} A[k,h]`, the transport of a filtered map
/// through the divided Frobenius. Fails if `A` does not respect filtrations.
pub fn adapted_scale(a: &Matrix, w_rows: &[i64], w_cols: &[i64]) -> Result<Matrix> {
    let ring = a.ring();
    let mut out = a.clone();
    for k in 0..a.rows() {
        for h in 0..a.cols() {
            if a[(k, h)].is_zero() {
                continue;
            }
            let d = w_rows[k] - w_cols[h];
            if d < 0 {
                return Err(Error::InvalidInput(format!("entry ({k},{h}) lowers the filtration")));
            }
            if d > 0 {
                out[(k, h)] = &a[(k, h)] * &p_pow(ring, d as u32);
            }
        }
    }
    Ok(out)
}

/// Result of [`FLModule::tensor_with_index`]: `position[τ][i * r_N + j]` is the
/// slot of `e_i ⊗ e′_j` in the weight-sorted basis of block `τ`.
#[derive(Clone, Debug)]
pub struct TensorProduct {
    pub module: FLModule,
    pub position: Vec<Vec<usize>>,
}

/// Generators of `Hom_MF(M, N)`: one matrix per block for each generator.
/// Over a field they form a basis.
#[derive(Clone, Debug)]
pub struct MorphismSpace {
    pub basis: Vec<Vec<Matrix>>,
}

impl MorphismSpace {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }
}

impl FLModule {
    pub fn new(ring: &Ring, bounds: (i64, i64), blocks: Vec<Block>) -> Self {
        FLModule { ring: ring.clone(), bounds, blocks }
    }

    /// Single-block module from integer data.
    pub fn from_ints(ring: &Ring, bounds: (i64, i64), weights: &[i64], phi: &[&[i64]]) -> Self {
        Self::new(ring, bounds, vec![Block { weights: weights.to_vec(), phi: Matrix::from_ints(ring, phi) }])
    }

    pub fn witt_degree(&self) -> usize {
        self.blocks.len()
    }

    pub fn rank(&self) -> usize {
        self.blocks.first().map_or(0, |b| b.weights.len())
    }

    pub fn weights(&self, tau: usize) -> &[i64] {
        &self.blocks[tau].weights
    }

    pub fn phi(&self, tau: usize) -> &Matrix {
        &self.blocks[tau].phi
    }

    /// Smallest and largest weight over all blocks.
    pub fn weight_range(&self) -> Option<(i64, i64)> {
        let all = self.blocks.iter().flat_map(|b| b.weights.iter().copied());
        let lo = all.clone().min()?;
        Some((lo, all.max()?))
    }

    pub fn is_multiplicity_free(&self) -> bool {
        self.blocks.iter().all(|b| b.weights.windows(2).all(|w| w[0] < w[1]))
    }

    pub fn validate(&self) -> Result<()> {
        let fp = self.witt_degree();
        if fp == 0 || !self.ring.f().is_multiple_of(fp) {
            return Err(Error::ResidueDegreeMismatch { witt_degree: fp });
        }
        let r = self.rank();
        for (t, b) in self.blocks.iter().enumerate() {
            if b.weights.len() != r || b.phi.rows() != r || b.phi.cols() != r {
                return Err(Error::BlockRankMismatch { block: t });
            }
            if *b.phi.ring() != self.ring {
                return Err(Error::RingMismatch);
            }
        }
        let (a, bnd) = self.bounds;
        for (t, b) in self.blocks.iter().enumerate() {
            if let Some(i) = b.weights.iter().position(|&w| w < a || w > bnd) {
                return Err(Error::WeightOutOfBounds { block: t, index: i });
            }
            if b.weights.windows(2).any(|w| w[0] > w[1]) {
                return Err(Error::UnsortedWeights { block: t });
            }
        }
        for (t, b) in self.blocks.iter().enumerate() {
            if !b.phi.is_invertible() {
                return Err(Error::SingularPhi { block: t });
            }
        }
        Ok(())
    }

    /// `φ^j(e_{τ,i})` for `j <= w_{τ,i}`, in the basis of block `τ+1`.
    pub fn phi_j(&self, tau: usize, i: usize, j: i64) -> Result<Vec<RingElem>> {
        let w = self.blocks[tau].weights[i];
        if j > w {
            return Err(Error::IndexOutOfRange(format!("φ^{j} is not defined on a vector of weight {w}")));
        }
        let scale = p_pow(&self.ring, (w - j) as u32);
        Ok(self.blocks[tau].phi.column(i).iter().map(|e| e * &scale).collect())
    }

    pub fn tate_twist(&self, s: i64) -> Self {
        let blocks = self
            .blocks
            .iter()
            .map(|b| Block { weights: b.weights.iter().map(|w| w + s).collect(), phi: b.phi.clone() })
            .collect();
        FLModule { ring: self.ring.clone(), bounds: (self.bounds.0 + s, self.bounds.1 + s), blocks }
    }

    pub fn tensor(&self, other: &Self) -> Result<Self> {
        Ok(self.tensor_with_index(other)?.module)
    }

    pub fn tensor_with_index(&self, other: &Self) -> Result<TensorProduct> {
        if self.ring != other.ring || self.witt_degree() != other.witt_degree() {
            return Err(Error::RingMismatch);
        }
        let rn = other.rank();
        let mut blocks = Vec::with_capacity(self.witt_degree());
        let mut position = Vec::with_capacity(self.witt_degree());
        for (bm, bn) in self.blocks.iter().zip(&other.blocks) {
            let raw: Vec<i64> = bm.weights.iter().flat_map(|a| bn.weights.iter().map(move |b| a + b)).collect();
            let mut order: Vec<usize> = (0..raw.len()).collect();
            order.sort_by_key(|&x| (raw[x], x));
            let mut pos = vec![0; raw.len()];
            for (slot, &x) in order.iter().enumerate() {
                pos[x] = slot;
            }
            let k = bm.phi.kron(&bn.phi);
            blocks.push(Block { weights: order.iter().map(|&x| raw[x]).collect(), phi: k.select(&order, &order) });
            position.push(pos);
        }
        debug_assert!(position.iter().all(|p| p.len() == self.rank() * rn));
        let module = FLModule {
            ring: self.ring.clone(),
            bounds: (self.bounds.0 + other.bounds.0, self.bounds.1 + other.bounds.1),
            blocks,
        };
        if let Some((lo, hi)) = module.weight_range() {
            let limit = self.ring.p() as i64 - 2;
            if hi - lo > limit {
                return Err(Error::RangeViolation { length: hi - lo, limit: "p-2".into() });
            }
        }
        Ok(TensorProduct { module, position })
    }

    /// `M^∨ = Hom(M, L)`: dual weights `s_τ - w` in ascending order and
    /// `Φ^∨_τ = c_τ (Φ_τ^{-1})^T` in the reversed dual basis.
    pub fn dual(&self, l: &LData) -> Result<Self> {
        l.validate(self.witt_degree())?;
        let mut blocks = Vec::with_capacity(self.witt_degree());
        for (t, b) in self.blocks.iter().enumerate() {
            let inv = b.phi.inverse().map_err(|_| Error::SingularPhi { block: t })?;
            let psi = inv.transpose().scale(&l.c[t]);
            let rev: Vec<usize> = (0..b.weights.len()).rev().collect();
            blocks.push(Block {
                weights: rev.iter().map(|&i| l.s[t] - b.weights[i]).collect(),
                phi: psi.select(&rev, &rev),
            });
        }
        let smin = *l.s.iter().min().expect("validated");
        let smax = *l.s.iter().max().expect("validated");
        Ok(FLModule { ring: self.ring.clone(), bounds: (smin - self.bounds.1, smax - self.bounds.0), blocks })
    }

    /// Entrywise reduction to a lower level or to the residue field.
    pub fn reduce_to(&self, target: &Ring) -> Result<Self> {
        let blocks = self
            .blocks
            .iter()
            .map(|b| Ok(Block { weights: b.weights.clone(), phi: b.phi.reduce_to(target)? }))
            .collect::<Result<_>>()?;
        Ok(FLModule { ring: target.clone(), bounds: self.bounds, blocks })
    }

    /// Entrywise canonical lift.
    pub fn lift_to(&self, target: &Ring) -> Result<Self> {
        let blocks = self
            .blocks
            .iter()
            .map(|b| Ok(Block { weights: b.weights.clone(), phi: b.phi.lift_to(target)? }))
            .collect::<Result<_>>()?;
        Ok(FLModule { ring: target.clone(), bounds: self.bounds, blocks })
    }

    /// The same module in the basis `b_τ = e_τ C_τ`; every `C_τ` must be
    /// invertible and respect the filtration.
    pub fn change_basis(&self, c: &[Matrix]) -> Result<Self> {
        let fp = self.witt_degree();
        if c.len() != fp {
            return Err(Error::DimensionMismatch("one change-of-basis matrix per block".into()));
        }
        let mut blocks = Vec::with_capacity(fp);
        for t in 0..fp {
            let w = &self.blocks[t].weights;
            let next_inv = c[(t + 1) % fp].inverse()?;
            let d = adapted_scale(&c[t], w, w)?;
            blocks.push(Block { weights: w.clone(), phi: next_inv.mul(&self.blocks[t].phi).mul(&d) });
        }
        Ok(FLModule { ring: self.ring.clone(), bounds: self.bounds, blocks })
    }

    /// Checks that per-block maps `A_τ : M_τ → N_τ` preserve filtrations and
    /// satisfy `A_{τ+1} Φ_τ = Φ′_τ D(A_τ)`.
    pub fn is_morphism_to(&self, other: &Self, a: &[Matrix]) -> bool {
        let fp = self.witt_degree();
        if a.len() != fp || other.witt_degree() != fp {
            return false;
        }
        (0..fp).all(|t| {
            let Ok(d) = adapted_scale(&a[t], other.weights(t), self.weights(t)) else { return false };
            a[(t + 1) % fp].mul(self.phi(t)) == other.phi(t).mul(&d)
        })
    }

    /// `Hom_MF(M, N)` as the kernel of the filtration and intertwining
    /// constraints.
    pub fn hom_mf(&self, other: &Self) -> Result<MorphismSpace> {
        if self.ring != other.ring || self.witt_degree() != other.witt_degree() {
            return Err(Error::RingMismatch);
        }
        let ring = &self.ring;
        let fp = self.witt_degree();
        let (rm, rn) = (self.rank(), other.rank());
        // unknown index for entry (k, h) of A_τ, when the filtration allows it
        let mut var = vec![vec![None; rm * rn]; fp];
        let mut nvars = 0;
        for t in 0..fp {
            for k in 0..rn {
                for h in 0..rm {
                    if other.weights(t)[k] >= self.weights(t)[h] {
                        var[t][k * rm + h] = Some(nvars);
                        nvars += 1;
                    }
                }
            }
        }
        let mut rows = Vec::new();
        for t in 0..fp {
            let tn = (t + 1) % fp;
            let (phi_m, phi_n) = (self.phi(t), other.phi(t));
            for k in 0..rn {
                for h in 0..rm {
                    let mut row = vec![RingElem::zero(ring); nvars];
                    // (A_{τ+1} Φ_τ)[k,h]
                    for l in 0..rm {
                        if let Some(v) = var[tn][k * rm + l] {
                            row[v] += &phi_m[(l, h)];
                        }
                    }
                    // -(Φ′_τ D(A_τ))[k,h]
                    for l in 0..rn {
                        if let Some(v) = var[t][l * rm + h] {
                            let e = other.weights(t)[l] - self.weights(t)[h];
                            row[v] -= &phi_n[(k, l)] * &p_pow(ring, e as u32);
                        }
                    }
                    rows.push(row);
                }
            }
        }
        let basis = if nvars == 0 {
            Vec::new()
        } else if rows.is_empty() {
            (0..nvars)
                .map(|i| (0..nvars).map(|j| RingElem::from_u64(ring, (i == j) as u64)).collect())
                .collect()
        } else {
            Matrix::from_rows(ring, rows)?.kernel_generators()
        };
        let basis = basis
            .into_iter()
            .map(|g| {
                (0..fp)
                    .map(|t| {
                        Matrix::from_fn(ring, rn, rm, |k, h| match var[t][k * rm + h] {
                            Some(v) => g[v].clone(),
                            None => RingElem::zero(ring),
                        })
                    })
                    .collect()
            })
            .collect();
        Ok(MorphismSpace { basis })
    }

    /// An isomorphism `M → N` found among combinations of `Hom_MF` generators
    /// (a combination is invertible iff its reduction is). Seeded search.
    pub fn find_isomorphism(&self, other: &Self) -> Result<Option<Vec<Matrix>>> {
        if self.rank() != other.rank() {
            return Ok(None);
        }
        let space = self.hom_mf(other)?;
        let invertible = |a: &[Matrix]| a.iter().all(Matrix::is_invertible);
        for g in &space.basis {
            if invertible(g) {
                return Ok(Some(g.clone()));
            }
        }
        if space.dim() < 2 {
            return Ok(None);
        }
        let k = self.ring.residue_field();
        let q = k.residue_size();
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
        for _ in 0..400 {
            let coeffs: Vec<RingElem> = (0..space.dim())
                .map(|_| self.ring.lift_from(&k.element_from_code(rng.gen_range(0..q))).expect("residue lift"))
                .collect();
            let combo: Vec<Matrix> = (0..self.witt_degree())
                .map(|t| {
                    let mut acc = Matrix::zeros(&self.ring, other.rank(), self.rank());
                    for (c, g) in coeffs.iter().zip(&space.basis) {
                        acc = acc.add(&g[t].scale(c));
                    }
                    acc
                })
                .collect();
            if invertible(&combo) {
                return Ok(Some(combo));
            }
        }
        Ok(None)
    }

    pub fn is_isomorphic(&self, other: &Self) -> Result<bool> {
        Ok(self.find_isomorphism(other)?.is_some())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::{make_ring, make_small_surjection, Family};

    fn f5() -> Ring {
        make_ring(Family::Witt, 5, 1, 1).unwrap()
    }

    fn canon2() -> FLModule {
        FLModule::from_ints(&f5(), (0, 1), &[0, 1], &[&[1, 0], &[0, 1]])
    }

    fn rank1(ring: &Ring, w: i64) -> FLModule {
        FLModule::from_ints(ring, (w, w), &[w], &[&[1]])
    }

    #[test]
    fn validate_examples() {
        canon2().validate().unwrap();
        let sing = FLModule::from_ints(&f5(), (0, 1), &[0, 1], &[&[1, 0], &[0, 0]]);
        assert_eq!(sing.validate().unwrap_err(), Error::SingularPhi { block: 0 });
        let oob = FLModule::from_ints(&f5(), (0, 1), &[0, 4], &[&[1, 0], &[0, 1]]);
        assert_eq!(oob.validate().unwrap_err(), Error::WeightOutOfBounds { block: 0, index: 1 });
        let uns = FLModule::from_ints(&f5(), (0, 1), &[1, 0], &[&[1, 0], &[0, 1]]);
        assert_eq!(uns.validate().unwrap_err(), Error::UnsortedWeights { block: 0 });
        let mut two = canon2();
        two.blocks.push(Block { weights: vec![0], phi: Matrix::from_ints(&f5(), &[&[1]]) });
        assert_eq!(two.validate().unwrap_err(), Error::ResidueDegreeMismatch { witt_degree: 2 });
    }

    #[test]
    fn twist_examples() {
        let m = canon2();
        assert_eq!(m.tate_twist(0), m);
        assert_eq!(m.tate_twist(3).weights(0), &[3, 4]);
        assert_eq!(m.tate_twist(3).tate_twist(-3), m);
    }

    #[test]
    fn tensor_examples() {
        let m = canon2();
        let t = m.tensor(&m).unwrap();
        assert_eq!(t.weights(0), &[0, 1, 1, 2]);
        t.validate().unwrap();
        let unit = rank1(&f5(), 0);
        assert!(m.tensor(&unit).unwrap().is_isomorphic(&m).unwrap());
        let ab = rank1(&f5(), 1).tensor(&rank1(&f5(), 2)).unwrap();
        assert_eq!(ab.weights(0), &[3]);
        let wide = FLModule::from_ints(&f5(), (0, 2), &[0, 2], &[&[1, 0], &[0, 1]]);
        let big = wide.tensor(&wide).unwrap_err();
        assert!(matches!(big, Error::RangeViolation { .. }));
    }

    #[test]
    fn dual_examples() {
        let k = f5();
        let l = LData::trivial(&k, vec![1]);
        let d = l.as_module().dual(&l).unwrap();
        assert_eq!(d.weights(0), &[0]);
        let m = canon2();
        let dm = m.dual(&l).unwrap();
        assert_eq!(dm.weights(0), &[0, 1]);
        assert_eq!(*dm.phi(0), Matrix::identity(&k, 2));
        assert!(dm.dual(&l).unwrap().is_isomorphic(&m).unwrap());
    }

    #[test]
    fn dual_satisfies_defining_relation() {
        // ψ_h(φ(e_k)) = c δ_{hk}, checked on a non-trivial module over Z/25
        let r = make_ring(Family::Witt, 5, 1, 2).unwrap();
        let m = FLModule::from_ints(&r, (0, 2), &[0, 1, 2], &[&[2, 1, 0], &[7, 3, 5], &[1, 0, 1]]);
        m.validate().unwrap();
        let l = LData { s: vec![2], c: vec![RingElem::from_int(&r, 3)] };
        let d = m.dual(&l).unwrap();
        d.validate().unwrap();
        let n = 3;
        for h in 0..n {
            for k in 0..n {
                // dual basis slot of e*_h is n-1-h
                // rows of the dual block are reversed too
                let psi = d.phi(0).column(n - 1 - h);
                let phik = m.phi(0).column(k);
                let mut acc = RingElem::zero(&r);
                for (a, x) in psi.iter().enumerate() {
                    acc += x * &phik[n - 1 - a];
                }
                let expect = if h == k { l.c[0].clone() } else { RingElem::zero(&r) };
                assert_eq!(acc, expect);
            }
        }
    }

    #[test]
    fn base_change_round_trip() {
        let z25 = make_ring(Family::Witt, 5, 1, 2).unwrap();
        let s = make_small_surjection(&z25).unwrap();
        let m = canon2();
        let lifted = m.lift_to(s.source()).unwrap();
        assert_eq!(*lifted.phi(0), Matrix::identity(&z25, 2));
        assert_eq!(lifted.reduce_to(s.target()).unwrap(), m);
        lifted.validate().unwrap();
    }

    #[test]
    fn hom_examples() {
        let m = canon2();
        let h = m.hom_mf(&m).unwrap();
        assert_eq!(h.dim(), 2);
        for g in &h.basis {
            assert!(m.is_morphism_to(&m, g));
        }
        assert_eq!(rank1(&f5(), 0).hom_mf(&rank1(&f5(), 1)).unwrap().dim(), 0);
    }

    #[test]
    fn phi_reconstruction_identity() {
        let r = make_ring(Family::Witt, 5, 1, 3).unwrap();
        let m = FLModule::from_ints(&r, (0, 2), &[0, 2], &[&[1, 3], &[4, 2]]);
        let col = m.phi(0).column(1);
        for j in 0..=2 {
            let got = m.phi_j(0, 1, j).unwrap();
            let scale = RingElem::from_int(&r, 5i64.pow((2 - j) as u32));
            assert_eq!(got, col.iter().map(|e| e * &scale).collect::<Vec<_>>());
        }
        // φ^j = p φ^{j+1}
        let lower = m.phi_j(0, 1, 0).unwrap();
        let upper = m.phi_j(0, 1, 1).unwrap();
        let p = RingElem::from_int(&r, 5);
        assert_eq!(lower, upper.iter().map(|e| e * &p).collect::<Vec<_>>());
        assert!(m.phi_j(0, 0, 1).is_err());
    }
}
