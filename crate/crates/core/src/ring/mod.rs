//! Finite local coefficient rings: truncated Witt rings `W(k)/p^n`, realized
//! as `(Z/p^n)[x]/(Φ)` for a monic lift `Φ` of an irreducible polynomial, and
//! truncated polynomial rings `k[t]/(t^n)`.
//!
//! Both families are chain rings with uniformizer `π = p` (Witt) or `π = t`
//! (dual numbers); every element is `π^v · unit`.

pub mod arith;
mod elem;
mod surj;

use std::fmt;
use std::sync::{Arc, OnceLock};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use elem::RingElem;
pub use surj::{make_small_surjection, SmallSurj};

use arith::{is_irreducible, is_prime, smallest_irreducible};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    Witt,
    DualNumbers,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Family::Witt => write!(f, "witt"),
            Family::DualNumbers => write!(f, "dual_numbers"),
        }
    }
}

/// Immutable ring descriptor. Use through the cheaply clonable [`Ring`] handle.
pub struct RingDesc {
    family: Family,
    p: u64,
    f: usize,
    level: u32,
    /// Monic, length `f + 1`; over `Z/p^level` (Witt) or `F_p` (dual numbers).
    modulus: Vec<u64>,
    /// Modulus applied to every stored coefficient.
    coeff_mod: u64,
    /// `σ(x^i)` for `0 <= i < f` in the coefficient layout of a residue-degree
    /// block (length `f`, reduced by `coeff_mod`).
    frob: Vec<Vec<u64>>,
    residue: OnceLock<Ring>,
}

#[derive(Clone)]
pub struct Ring(Arc<RingDesc>);

impl fmt::Debug for Ring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for Ring {
    fn fmt(&self, fm: &mut fmt::Formatter<'_>) -> fmt::Result {
        let d = &self.0;
        match (d.family, d.level) {
            (_, 1) => write!(fm, "F_{}^{}", d.p, d.f),
            (Family::Witt, n) => write!(fm, "W(F_{}^{})/p^{}", d.p, d.f, n),
            (Family::DualNumbers, n) => write!(fm, "F_{}^{}[t]/(t^{})", d.p, d.f, n),
        }
    }
}

impl PartialEq for Ring {
    fn eq(&self, other: &Self) -> bool {
        if Arc::ptr_eq(&self.0, &other.0) {
            return true;
        }
        let (a, b) = (&self.0, &other.0);
        a.p == b.p
            && a.f == b.f
            && a.level == b.level
            && a.family == b.family
            && a.modulus == b.modulus
    }
}
impl Eq for Ring {}

/// Standard constructor: the lexicographically smallest irreducible
/// polynomial of degree `f` defines the residue field. Rejects `p = 2`.
pub fn make_ring(family: Family, p: u64, f: usize, level: u32) -> Result<Ring> {
    check_params(p, f, level)?;
    if p == 2 {
        return Err(Error::EvenPrime);
    }
    let poly = smallest_irreducible(p, f);
    Ring::build(family, p, f, level, poly)
}

fn check_params(p: u64, f: usize, level: u32) -> Result<()> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if f == 0 {
        return Err(Error::InvalidRing("residue degree f must be at least 1".into()));
    }
    if level == 0 {
        return Err(Error::InvalidRing("level must be at least 1".into()));
    }
    let bits = 64 - p.leading_zeros();
    if family_coeff_bits(p, level) > 62 || bits > 32 {
        return Err(Error::InvalidRing(format!("p^level too large (p = {p}, level = {level})")));
    }
    Ok(())
}

fn family_coeff_bits(p: u64, level: u32) -> u32 {
    let mut acc: u128 = 1;
    for _ in 0..level {
        acc *= p as u128;
        if acc > u64::MAX as u128 {
            return 128;
        }
    }
    128 - acc.leading_zeros()
}

impl Ring {
    /// `W(F_{p^f})/p^level`. Rejects `p = 2`.
    pub fn witt(p: u64, f: usize, level: u32) -> Result<Ring> {
        make_ring(Family::Witt, p, f, level)
    }

    /// `F_{p^f}[t]/(t^level)`. Rejects `p = 2`.
    pub fn dual_numbers(p: u64, f: usize, level: u32) -> Result<Ring> {
        make_ring(Family::DualNumbers, p, f, level)
    }

    /// The finite field `F_{p^f}`; unlike [`make_ring`] this accepts `p = 2`,
    /// which the cyclic simple modules and the finite-field searches need.
    pub fn finite_field(p: u64, f: usize) -> Result<Ring> {
        check_params(p, f, 1)?;
        Ring::build(Family::Witt, p, f, 1, smallest_irreducible(p, f))
    }

    /// Ring with an explicitly supplied monic modulus (low-to-high, length
    /// `f + 1`). The modulus must reduce to an irreducible polynomial mod p.
    pub fn with_modulus(family: Family, p: u64, level: u32, modulus: &[i64]) -> Result<Ring> {
        if modulus.len() < 2 {
            return Err(Error::InvalidRing("minimal polynomial must have degree >= 1".into()));
        }
        let f = modulus.len() - 1;
        check_params(p, f, level)?;
        if p == 2 && level > 1 {
            return Err(Error::EvenPrime);
        }
        let cm = coefficient_modulus(family, p, level);
        let poly: Vec<u64> = modulus.iter().map(|&c| c.rem_euclid(cm as i64) as u64).collect();
        if poly[f] != 1 {
            return Err(Error::InvalidRing("minimal polynomial must be monic".into()));
        }
        let reduced: Vec<u64> = poly.iter().map(|c| c % p).collect();
        if !is_irreducible(&reduced, p) {
            return Err(Error::ReducibleModulus);
        }
        Ring::build(family, p, f, level, poly)
    }

    fn build(family: Family, p: u64, f: usize, level: u32, modulus: Vec<u64>) -> Result<Ring> {
        // level-1 rings of either family are the residue field; store them one way
        let family = if level == 1 { Family::Witt } else { family };
        let coeff_mod = coefficient_modulus(family, p, level);
        let modulus: Vec<u64> = modulus.iter().map(|c| c % coeff_mod).collect();
        let mut identity = vec![vec![0u64; f]; f];
        for (i, row) in identity.iter_mut().enumerate() {
            row[i] = 1;
        }
        let provisional = Ring(Arc::new(RingDesc {
            family,
            p,
            f,
            level,
            modulus: modulus.clone(),
            coeff_mod,
            frob: identity,
            residue: OnceLock::new(),
        }));
        let frob = provisional.compute_frobenius_table()?;
        Ok(Ring(Arc::new(RingDesc {
            family,
            p,
            f,
            level,
            modulus,
            coeff_mod,
            frob,
            residue: OnceLock::new(),
        })))
    }

    /// `σ(x)` is the unique root of the modulus congruent to `x^p`; Newton's
    /// iteration converges since the modulus is separable mod p.
    fn compute_frobenius_table(&self) -> Result<Vec<Vec<u64>>> {
        let f = self.f();
        if f == 1 {
            return Ok(vec![vec![1]]);
        }
        // work in the coefficient algebra (Z/p^n)[x]/Φ or F_p[x]/Φ
        let algebra = if self.family() == Family::DualNumbers {
            Ring::build(Family::Witt, self.p(), f, 1, self.0.modulus.clone())?
        } else {
            self.clone()
        };
        let x = RingElem::from_coeffs(&algebra, &{
            let mut v = vec![0i64; f];
            v[1] = 1;
            v
        });
        let mut y = x.pow(self.p() as u128);
        let phi = |z: &RingElem| -> RingElem {
            let mut acc = RingElem::zero(&algebra);
            for &c in algebra.0.modulus.iter().rev() {
                acc = &(&acc * z) + &RingElem::from_u64(&algebra, c);
            }
            acc
        };
        let dphi = |z: &RingElem| -> RingElem {
            let mut acc = RingElem::zero(&algebra);
            for (i, &c) in algebra.0.modulus.iter().enumerate().skip(1).rev() {
                acc = &(&acc * z) + &RingElem::from_u64(&algebra, arith::mul_mod(c, i as u64, algebra.coeff_mod()));
            }
            acc
        };
        let mut iterations = 0;
        while !phi(&y).is_zero() {
            let d = dphi(&y).inv().ok_or(Error::ReducibleModulus)?;
            y = &y - &(&phi(&y) * &d);
            iterations += 1;
            if iterations > 80 {
                return Err(Error::InvalidRing("Frobenius lift failed to converge".into()));
            }
        }
        let mut table = Vec::with_capacity(f);
        let mut pw = RingElem::one(&algebra);
        for _ in 0..f {
            table.push(pw.raw().to_vec());
            pw = &pw * &y;
        }
        Ok(table)
    }

    pub fn family(&self) -> Family {
        self.0.family
    }
    pub fn p(&self) -> u64 {
        self.0.p
    }
    /// Residue-field degree: `k = F_{p^f}`.
    pub fn f(&self) -> usize {
        self.0.f
    }
    pub fn level(&self) -> u32 {
        self.0.level
    }
    pub fn is_field(&self) -> bool {
        self.0.level == 1
    }
    /// `|k| = p^f`.
    pub fn residue_size(&self) -> u128 {
        (self.p() as u128).pow(self.f() as u32)
    }
    /// Number of elements.
    pub fn size(&self) -> u128 {
        (self.0.coeff_mod as u128).pow(self.width() as u32)
    }
    pub fn modulus(&self) -> &[u64] {
        &self.0.modulus
    }
    pub(crate) fn coeff_mod(&self) -> u64 {
        self.0.coeff_mod
    }
    pub(crate) fn frob_table(&self) -> &[Vec<u64>] {
        &self.0.frob
    }
    /// Number of stored `u64` coefficients per element.
    pub(crate) fn width(&self) -> usize {
        match self.family() {
            Family::Witt => self.f(),
            Family::DualNumbers => self.f() * self.level() as usize,
        }
    }

    /// The residue field `k` as a level-1 ring.
    pub fn residue_field(&self) -> Ring {
        if self.is_field() {
            return self.clone();
        }
        self.0
            .residue
            .get_or_init(|| {
                let poly: Vec<u64> = self.0.modulus.iter().map(|c| c % self.p()).collect();
                Ring::build(Family::Witt, self.p(), self.f(), 1, poly)
                    .expect("residue field of a valid ring")
            })
            .clone()
    }

    /// Same residue field and (canonically lifted) modulus at another level.
    pub fn at_level(&self, family: Family, level: u32) -> Result<Ring> {
        if level == 0 {
            return Err(Error::InvalidRing("level must be at least 1".into()));
        }
        if self.p() == 2 && level > 1 {
            return Err(Error::EvenPrime);
        }
        if level == self.level() && (family == self.family() || level == 1) {
            return Ok(self.clone());
        }
        let poly: Vec<u64> = if family == Family::Witt && self.family() == Family::Witt && level < self.level() {
            let cm = coefficient_modulus(Family::Witt, self.p(), level);
            self.0.modulus.iter().map(|c| c % cm).collect()
        } else if family == Family::Witt && self.family() == Family::Witt {
            self.0.modulus.clone()
        } else {
            self.0.modulus.iter().map(|c| c % self.p()).collect()
        };
        check_params(self.p(), self.f(), level)?;
        Ring::build(family, self.p(), self.f(), level, poly)
    }
}

fn coefficient_modulus(family: Family, p: u64, level: u32) -> u64 {
    match family {
        Family::Witt => p.pow(level),
        Family::DualNumbers => p,
    }
}
