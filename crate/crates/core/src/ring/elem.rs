use std::fmt;
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};

use smallvec::{smallvec, SmallVec};

use super::arith::{mul_mod, pow_mod};
use super::{Family, Ring};
use crate::error::{Error, Result};

pub(crate) type Coeffs = SmallVec<[u64; 4]>;

/// An element of a [`Ring`].
///
/// Witt rings store `f` coefficients in `Z/p^n` of a polynomial in the root
/// `x` of the modulus. Dual-number rings store `level` blocks of `f`
/// coefficients in `F_p`, block `j` being the coefficient of `t^j`.
#[derive(Clone)]
pub struct RingElem {
    ring: Ring,
    c: Coeffs,
}

impl PartialEq for RingElem {
    fn eq(&self, other: &Self) -> bool {
        self.c == other.c && self.ring == other.ring
    }
}
impl Eq for RingElem {}

impl fmt::Debug for RingElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for RingElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.c.len() == 1 {
            write!(f, "{}", self.c[0])
        } else {
            write!(f, "{:?}", self.c.as_slice())
        }
    }
}

/// `a * b mod (modulus, m)` for polynomials of degree `< f` with a monic
/// modulus of degree `f`.
fn poly_mul(a: &[u64], b: &[u64], modulus: &[u64], m: u64) -> Coeffs {
    let f = a.len();
    if f == 1 {
        return smallvec![mul_mod(a[0], b[0], m)];
    }
    let mut prod = vec![0u128; 2 * f - 1];
    let m128 = m as u128;
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            if y != 0 {
                prod[i + j] = (prod[i + j] + x as u128 * y as u128) % m128;
            }
        }
    }
    for d in (f..2 * f - 1).rev() {
        let top = prod[d];
        if top == 0 {
            continue;
        }
        for i in 0..f {
            let sub = top * modulus[i] as u128 % m128;
            let idx = d - f + i;
            prod[idx] = (prod[idx] + m128 - sub) % m128;
        }
        prod[d] = 0;
    }
    prod[..f].iter().map(|&v| v as u64).collect()
}

impl RingElem {
    pub(crate) fn from_raw(ring: &Ring, c: Coeffs) -> Self {
        debug_assert_eq!(c.len(), ring.width());
        RingElem { ring: ring.clone(), c }
    }

    pub fn zero(ring: &Ring) -> Self {
        Self::from_raw(ring, smallvec![0; ring.width()])
    }

    pub fn one(ring: &Ring) -> Self {
        Self::from_u64(ring, 1)
    }

    /// Image of a non-negative integer.
    pub fn from_u64(ring: &Ring, v: u64) -> Self {
        let mut c: Coeffs = smallvec![0; ring.width()];
        c[0] = v % ring.coeff_mod();
        Self::from_raw(ring, c)
    }

    /// Image of an integer.
    pub fn from_int(ring: &Ring, v: i64) -> Self {
        let m = ring.coeff_mod() as i128;
        Self::from_u64(ring, (v as i128).rem_euclid(m) as u64)
    }

    /// Builds an element from its flat coefficient vector (missing trailing
    /// coefficients are zero; negative values are reduced).
    pub fn from_coeffs(ring: &Ring, coeffs: &[i64]) -> Self {
        let m = ring.coeff_mod() as i128;
        let mut c: Coeffs = smallvec![0; ring.width()];
        for (slot, &v) in c.iter_mut().zip(coeffs) {
            *slot = (v as i128).rem_euclid(m) as u64;
        }
        Self::from_raw(ring, c)
    }

    /// Like [`from_coeffs`](Self::from_coeffs) but rejects a wrong length.
    pub fn try_from_coeffs(ring: &Ring, coeffs: &[i64]) -> Result<Self> {
        if coeffs.len() != ring.width() {
            return Err(Error::DimensionMismatch(format!(
                "ring element needs {} coefficients, got {}",
                ring.width(),
                coeffs.len()
            )));
        }
        Ok(Self::from_coeffs(ring, coeffs))
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    /// Raw stored coefficients.
    pub fn raw(&self) -> &[u64] {
        &self.c
    }

    pub fn coeffs_i64(&self) -> Vec<i64> {
        self.c.iter().map(|&v| v as i64).collect()
    }

    /// Canonical encoding `Σ c_i B^i` with `B` the coefficient modulus.
    pub fn encode(&self) -> u128 {
        let b = self.ring.coeff_mod() as u128;
        self.c.iter().rev().fold(0u128, |acc, &v| acc.wrapping_mul(b).wrapping_add(v as u128))
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().all(|&v| v == 0)
    }

    pub fn is_one(&self) -> bool {
        self.c[0] == 1 && self.c[1..].iter().all(|&v| v == 0)
    }

    /// Units are exactly the elements with nonzero residue.
    pub fn is_unit(&self) -> bool {
        let p = self.ring.p();
        self.c[..self.ring.f()].iter().any(|&v| v % p != 0)
    }

    pub fn pow(&self, mut e: u128) -> Self {
        let mut acc = Self::one(&self.ring);
        let mut b = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &b;
            }
            e >>= 1;
            if e > 0 {
                b = &b * &b;
            }
        }
        acc
    }

    /// Image in the residue field.
    pub fn residue(&self) -> RingElem {
        let k = self.ring.residue_field();
        let p = self.ring.p();
        let c = self.c[..self.ring.f()].iter().map(|&v| v % p).collect();
        RingElem::from_raw(&k, c)
    }

    pub fn inv(&self) -> Option<Self> {
        if !self.is_unit() {
            return None;
        }
        let ring = &self.ring;
        if ring.f() == 1 && ring.family() == Family::Witt {
            let m = ring.coeff_mod();
            let p = ring.p();
            let r = pow_mod(self.c[0] % p, p - 2, p);
            let mut y = r;
            // Newton iteration on integers mod p^n
            loop {
                let xy = mul_mod(self.c[0], y, m);
                if xy == 1 % m {
                    return Some(Self::from_u64(ring, y));
                }
                let two_minus = (2 + m - xy) % m;
                y = mul_mod(y, two_minus, m);
            }
        }
        let k = ring.residue_field();
        let rbar = self.residue();
        let q = k.residue_size();
        let rinv = rbar.pow(q - 2);
        let mut y = ring.lift_from(&rinv).expect("residue lifts");
        let two = Self::from_u64(ring, 2);
        for _ in 0..=64 {
            let xy = self * &y;
            if xy.is_one() {
                return Some(y);
            }
            y = &y * &(&two - &xy);
        }
        unreachable!("Newton inversion converges for units")
    }

    pub fn try_inv(&self) -> Result<Self> {
        self.inv().ok_or(Error::NotAUnit)
    }

    /// The Frobenius automorphism (lift of `x ↦ x^p` on the residue field).
    pub fn frobenius(&self) -> Self {
        let ring = &self.ring;
        let f = ring.f();
        if f == 1 {
            return self.clone();
        }
        let table = ring.frob_table();
        let m = match ring.family() {
            Family::Witt => ring.coeff_mod(),
            Family::DualNumbers => ring.p(),
        };
        let mut out: Coeffs = smallvec![0; ring.width()];
        for (blk_in, blk_out) in self.c.chunks(f).zip(out.chunks_mut(f)) {
            for (i, &ci) in blk_in.iter().enumerate() {
                if ci == 0 {
                    continue;
                }
                for (o, &t) in blk_out.iter_mut().zip(&table[i]) {
                    *o = (*o + mul_mod(ci, t, m)) % m;
                }
            }
        }
        Self::from_raw(ring, out)
    }

    pub fn frobenius_pow(&self, k: usize) -> Self {
        let mut x = self.clone();
        for _ in 0..k % self.ring.f() {
            x = x.frobenius();
        }
        x
    }

    /// Square root of a unit whose residue is a square. The residue root
    /// with the smaller canonical encoding is refined by Newton's method.
    pub fn unit_sqrt(&self) -> Result<Self> {
        if !self.is_unit() {
            return Err(Error::NotAUnit);
        }
        let ring = &self.ring;
        let k = ring.residue_field();
        let rbar = residue_sqrt(&self.residue())?;
        if ring.is_field() {
            return Ok(rbar);
        }
        let mut s = ring.lift_from(&rbar)?;
        let half = Self::from_u64(ring, 2).inv().ok_or(Error::EvenPrime)?;
        for _ in 0..=64 {
            if &s * &s == *self {
                return Ok(s);
            }
            let q = self * &s.inv().expect("root of a unit is a unit");
            s = &(&s + &q) * &half;
        }
        let _ = k;
        unreachable!("Newton square root converges for units")
    }

    /// Largest `v` with `self ∈ π^v R`; `level` for zero.
    pub fn valuation(&self) -> u32 {
        let ring = &self.ring;
        let level = ring.level();
        match ring.family() {
            Family::Witt => {
                let p = ring.p();
                self.c
                    .iter()
                    .filter(|&&v| v != 0)
                    .map(|&v| {
                        let mut v = v;
                        let mut e = 0;
                        while v % p == 0 {
                            v /= p;
                            e += 1;
                        }
                        e
                    })
                    .min()
                    .unwrap_or(level)
            }
            Family::DualNumbers => {
                let f = ring.f();
                self.c
                    .chunks(f)
                    .position(|b| b.iter().any(|&v| v != 0))
                    .map(|j| j as u32)
                    .unwrap_or(level)
            }
        }
    }

    /// `π^k`.
    pub fn pi_pow(ring: &Ring, k: u32) -> Self {
        if k >= ring.level() {
            return Self::zero(ring);
        }
        match ring.family() {
            Family::Witt => Self::from_u64(ring, ring.p().pow(k)),
            Family::DualNumbers => {
                let mut c: Coeffs = smallvec![0; ring.width()];
                c[k as usize * ring.f()] = 1;
                Self::from_raw(ring, c)
            }
        }
    }

    /// Canonical `y` with `π^k y = self`; requires `valuation() >= k`.
    pub fn shift_down(&self, k: u32) -> Self {
        debug_assert!(self.valuation() >= k);
        let ring = &self.ring;
        match ring.family() {
            Family::Witt => {
                let d = ring.p().pow(k);
                Self::from_raw(ring, self.c.iter().map(|&v| v / d).collect())
            }
            Family::DualNumbers => {
                let f = ring.f();
                let shift = k as usize * f;
                let mut c: Coeffs = smallvec![0; ring.width()];
                for i in shift..c.len() {
                    c[i - shift] = self.c[i];
                }
                Self::from_raw(ring, c)
            }
        }
    }

    /// Some `z` with `z · d = self`, if one exists.
    pub fn div_exact(&self, d: &Self) -> Option<Self> {
        let v = d.valuation();
        if v == self.ring.level() {
            return if self.is_zero() { Some(Self::zero(&self.ring)) } else { None };
        }
        if self.valuation() < v {
            return None;
        }
        let u = d.shift_down(v).inv()?;
        Some(&self.shift_down(v) * &u)
    }

    /// Reduction to a lower level of the same family (or to the residue field).
    pub fn reduce_to(&self, target: &Ring) -> Result<Self> {
        let src = &self.ring;
        if !same_tower(src, target) || target.level() > src.level() {
            return Err(Error::RingMismatch);
        }
        if target.is_field() {
            return Ok(self.residue());
        }
        if src.family() != target.family() {
            return Err(Error::RingMismatch);
        }
        let c = match src.family() {
            Family::Witt => {
                let m = target.coeff_mod();
                self.c.iter().map(|&v| v % m).collect()
            }
            Family::DualNumbers => self.c[..target.width()].iter().copied().collect(),
        };
        Ok(Self::from_raw(target, c))
    }
}

/// Rings sharing `p`, `f` and residue polynomial.
pub(crate) fn same_tower(a: &Ring, b: &Ring) -> bool {
    let p = a.p();
    a.p() == b.p()
        && a.f() == b.f()
        && a.modulus().iter().zip(b.modulus()).all(|(x, y)| x % p == y % p)
}

impl Ring {
    /// Canonical coefficientwise lift from a lower level of the same family
    /// (or from the residue field).
    pub fn lift_from(&self, x: &RingElem) -> Result<RingElem> {
        let src = x.ring();
        if !same_tower(src, self) || src.level() > self.level() {
            return Err(Error::RingMismatch);
        }
        if !src.is_field() && src.family() != self.family() {
            return Err(Error::RingMismatch);
        }
        let mut c: Coeffs = smallvec![0; self.width()];
        match self.family() {
            Family::Witt => c.copy_from_slice(x.raw()),
            Family::DualNumbers => c[..x.raw().len()].copy_from_slice(x.raw()),
        }
        Ok(RingElem::from_raw(self, c))
    }

    /// Teichmüller representative of a residue-field element.
    pub fn teichmuller(&self, xbar: &RingElem) -> Result<RingElem> {
        if self.family() != Family::Witt {
            return Err(Error::WrongFamily("teichmuller needs the witt family"));
        }
        if *xbar.ring() != self.residue_field() {
            return Err(Error::RingMismatch);
        }
        let q = self.residue_size();
        let mut y = self.lift_from(xbar)?;
        for _ in 1..self.level() {
            y = y.pow(q);
        }
        Ok(y)
    }

    /// Generator of the multiplicative group of a finite field, smallest by
    /// canonical encoding.
    pub fn primitive_element(&self) -> Result<RingElem> {
        if !self.is_field() {
            return Err(Error::NotResidueField);
        }
        let q = self.residue_size();
        let order = q - 1;
        let factors = super::arith::prime_factors(order);
        for code in 1..q {
            let g = self.element_from_code(code);
            if factors.iter().all(|&l| !g.pow(order / l).is_one()) {
                return Ok(g);
            }
        }
        unreachable!("finite fields have cyclic unit groups")
    }

    /// Inverse of [`RingElem::encode`] for field elements.
    pub fn element_from_code(&self, mut code: u128) -> RingElem {
        let b = self.coeff_mod() as u128;
        let mut c: Coeffs = smallvec![0; self.width()];
        for slot in c.iter_mut() {
            *slot = (code % b) as u64;
            code /= b;
        }
        RingElem::from_raw(self, c)
    }

    /// All elements of a finite field in encoding order.
    pub fn field_elements(&self) -> Result<Vec<RingElem>> {
        if !self.is_field() {
            return Err(Error::NotResidueField);
        }
        Ok((0..self.residue_size()).map(|c| self.element_from_code(c)).collect())
    }
}

/// Square root in a finite field (Tonelli-Shanks; Frobenius inverse in
/// characteristic 2), normalized to the smaller canonical encoding.
fn residue_sqrt(a: &RingElem) -> Result<RingElem> {
    let k = a.ring().clone();
    let q = k.residue_size();
    if a.is_zero() {
        return Err(Error::NotAUnit);
    }
    if k.p() == 2 {
        return Ok(a.pow(q / 2));
    }
    if !a.pow((q - 1) / 2).is_one() {
        return Err(Error::NotASquare);
    }
    let mut s = 0u32;
    let mut odd = q - 1;
    while odd.is_multiple_of(2) {
        odd /= 2;
        s += 1;
    }
    let minus_one = -RingElem::one(&k);
    let z = (2..q)
        .map(|c| k.element_from_code(c))
        .find(|z| z.pow((q - 1) / 2) == minus_one)
        .expect("odd-order fields contain non-squares");
    let mut m = s;
    let mut c = z.pow(odd);
    let mut t = a.pow(odd);
    let mut r = a.pow(odd.div_ceil(2));
    while !t.is_one() {
        let mut i = 0;
        let mut t2 = t.clone();
        while !t2.is_one() {
            t2 = &t2 * &t2;
            i += 1;
        }
        let mut b = c.clone();
        for _ in 0..(m - i - 1) {
            b = &b * &b;
        }
        m = i;
        c = &b * &b;
        t = &t * &c;
        r = &r * &b;
    }
    let neg = -&r;
    Ok(if neg.encode() < r.encode() { neg } else { r })
}

fn add_coeffs(a: &RingElem, b: &RingElem) -> RingElem {
    debug_assert!(a.ring == b.ring, "ring mismatch in addition");
    let m = match a.ring.family() {
        Family::Witt => a.ring.coeff_mod(),
        Family::DualNumbers => a.ring.p(),
    };
    let c = a.c.iter().zip(&b.c).map(|(&x, &y)| {
        let s = x + y;
        if s >= m {
            s - m
        } else {
            s
        }
    });
    RingElem::from_raw(&a.ring, c.collect())
}

fn sub_coeffs(a: &RingElem, b: &RingElem) -> RingElem {
    debug_assert!(a.ring == b.ring, "ring mismatch in subtraction");
    let m = match a.ring.family() {
        Family::Witt => a.ring.coeff_mod(),
        Family::DualNumbers => a.ring.p(),
    };
    let c = a.c.iter().zip(&b.c).map(|(&x, &y)| if x >= y { x - y } else { x + m - y });
    RingElem::from_raw(&a.ring, c.collect())
}

fn mul_elems(a: &RingElem, b: &RingElem) -> RingElem {
    debug_assert!(a.ring == b.ring, "ring mismatch in multiplication");
    let ring = &a.ring;
    match ring.family() {
        Family::Witt => RingElem::from_raw(ring, poly_mul(&a.c, &b.c, ring.modulus(), ring.coeff_mod())),
        Family::DualNumbers => {
            let f = ring.f();
            let n = ring.level() as usize;
            let p = ring.p();
            let mut out: Coeffs = smallvec![0; ring.width()];
            for i in 0..n {
                let ai = &a.c[i * f..(i + 1) * f];
                if ai.iter().all(|&v| v == 0) {
                    continue;
                }
                for j in 0..n - i {
                    let bj = &b.c[j * f..(j + 1) * f];
                    if bj.iter().all(|&v| v == 0) {
                        continue;
                    }
                    let prod = poly_mul(ai, bj, ring.modulus(), p);
                    for (o, v) in out[(i + j) * f..(i + j + 1) * f].iter_mut().zip(prod) {
                        *o = (*o + v) % p;
                    }
                }
            }
            RingElem::from_raw(ring, out)
        }
    }
}

macro_rules! forward_binop {
    ($tr:ident, $m:ident, $f:ident, $atr:ident, $am:ident) => {
        impl $tr<&RingElem> for &RingElem {
            type Output = RingElem;
            fn $m(self, rhs: &RingElem) -> RingElem {
                $f(self, rhs)
            }
        }
        impl $tr<RingElem> for RingElem {
            type Output = RingElem;
            fn $m(self, rhs: RingElem) -> RingElem {
                $f(&self, &rhs)
            }
        }
        impl $tr<&RingElem> for RingElem {
            type Output = RingElem;
            fn $m(self, rhs: &RingElem) -> RingElem {
                $f(&self, rhs)
            }
        }
        impl $tr<RingElem> for &RingElem {
            type Output = RingElem;
            fn $m(self, rhs: RingElem) -> RingElem {
                $f(self, &rhs)
            }
        }
        impl $atr<&RingElem> for RingElem {
            fn $am(&mut self, rhs: &RingElem) {
                *self = $f(self, rhs);
            }
        }
        impl $atr<RingElem> for RingElem {
            fn $am(&mut self, rhs: RingElem) {
                *self = $f(self, &rhs);
            }
        }
    };
}

forward_binop!(Add, add, add_coeffs, AddAssign, add_assign);
forward_binop!(Sub, sub, sub_coeffs, SubAssign, sub_assign);
forward_binop!(Mul, mul, mul_elems, MulAssign, mul_assign);

impl Neg for &RingElem {
    type Output = RingElem;
    fn neg(self) -> RingElem {
        sub_coeffs(&RingElem::zero(&self.ring), self)
    }
}

impl Neg for RingElem {
    type Output = RingElem;
    fn neg(self) -> RingElem {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::make_ring;
    use proptest::prelude::*;

    fn z25() -> Ring {
        make_ring(Family::Witt, 5, 1, 2).unwrap()
    }

    #[test]
    fn teichmuller_examples() {
        let r = z25();
        let k = r.residue_field();
        let t = |v: i64| r.teichmuller(&RingElem::from_int(&k, v)).unwrap();
        assert_eq!(t(1), RingElem::from_int(&r, 1));
        assert_eq!(t(-1), RingElem::from_int(&r, 24));
        assert_eq!(t(2), RingElem::from_int(&r, 7));
        // brute-force oracle: the unique y = 2 mod 5 with y^5 = y
        let hits: Vec<u64> = [2u64, 7, 12, 17, 22]
            .into_iter()
            .filter(|&y| pow_mod(y, 5, 25) == y)
            .collect();
        assert_eq!(hits, vec![7]);
        let d = make_ring(Family::DualNumbers, 5, 1, 2).unwrap();
        assert!(matches!(d.teichmuller(&RingElem::one(&k)), Err(Error::WrongFamily(_))));
    }

    #[test]
    fn sqrt_examples() {
        let r = z25();
        assert_eq!(RingElem::one(&r).unit_sqrt().unwrap(), RingElem::one(&r));
        let s = RingElem::from_int(&r, 6).unit_sqrt().unwrap();
        assert_eq!(s, RingElem::from_int(&r, 16));
        let brute: Vec<u64> = (0..25).filter(|&y| y * y % 25 == 6).collect();
        assert!(brute.contains(&16));

        let d = make_ring(Family::DualNumbers, 5, 1, 2).unwrap();
        let u = RingElem::from_coeffs(&d, &[1, 1]);
        assert_eq!(u.unit_sqrt().unwrap(), RingElem::from_coeffs(&d, &[1, 3]));
        let brute: Vec<(i64, i64)> = (0..5)
            .flat_map(|a| (0..5).map(move |b| (a, b)))
            .filter(|&(a, b)| {
                let y = RingElem::from_coeffs(&d, &[a, b]);
                &y * &y == u
            })
            .collect();
        assert_eq!(brute, vec![(1, 3), (4, 2)]);

        assert_eq!(RingElem::from_int(&r, 2).unit_sqrt().unwrap_err(), Error::NotASquare);
        assert_eq!(RingElem::from_int(&r, 5).unit_sqrt().unwrap_err(), Error::NotAUnit);
    }

    #[test]
    fn inverse_and_division() {
        let r = make_ring(Family::Witt, 7, 2, 3).unwrap();
        let x = RingElem::from_coeffs(&r, &[3, 5]);
        let y = x.inv().unwrap();
        assert!((&x * &y).is_one());
        let seven = RingElem::from_int(&r, 7);
        assert!(seven.inv().is_none());
        assert_eq!(seven.valuation(), 1);
        let a = &seven * &x;
        assert_eq!(a.div_exact(&seven).map(|z| &z * &seven), Some(a.clone()));
        assert!(seven.div_exact(&a).is_some());
        assert!(RingElem::one(&r).div_exact(&seven).is_none());
    }

    #[test]
    fn f4_in_characteristic_two() {
        let f4 = Ring::finite_field(2, 2).unwrap();
        let w = f4.element_from_code(2);
        assert!((&(&w * &w) + &w).is_one());
        assert_eq!(w.frobenius(), &w * &w);
        assert_eq!(w.unit_sqrt().unwrap().pow(2), w);
        assert_eq!(f4.primitive_element().unwrap(), w);
    }

    fn ring_strategy() -> impl Strategy<Value = Ring> {
        prop_oneof![
            Just(make_ring(Family::Witt, 5, 1, 3).unwrap()),
            Just(make_ring(Family::Witt, 3, 2, 2).unwrap()),
            Just(make_ring(Family::Witt, 7, 3, 2).unwrap()),
            Just(make_ring(Family::DualNumbers, 5, 2, 3).unwrap()),
            Just(make_ring(Family::DualNumbers, 3, 3, 2).unwrap()),
        ]
    }

    fn elem(r: &Ring, raw: &[i64]) -> RingElem {
        RingElem::from_coeffs(r, &raw[..r.width()])
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]
        #[test]
        fn frobenius_is_a_ring_automorphism(r in ring_strategy(),
                                            a in prop::collection::vec(0i64..1000, 9),
                                            b in prop::collection::vec(0i64..1000, 9)) {
            let x = elem(&r, &a);
            let y = elem(&r, &b);
            prop_assert_eq!((&x + &y).frobenius(), &x.frobenius() + &y.frobenius());
            prop_assert_eq!((&x * &y).frobenius(), &x.frobenius() * &y.frobenius());
            prop_assert_eq!(x.frobenius_pow(r.f()), x.clone());
            prop_assert_eq!(x.frobenius().residue(), x.residue().pow(r.p() as u128));
        }

        #[test]
        fn ring_axioms(r in ring_strategy(),
                       a in prop::collection::vec(0i64..1000, 9),
                       b in prop::collection::vec(0i64..1000, 9),
                       c in prop::collection::vec(0i64..1000, 9)) {
            let (x, y, z) = (elem(&r, &a), elem(&r, &b), elem(&r, &c));
            prop_assert_eq!(&(&x * &y) * &z, &x * &(&y * &z));
            prop_assert_eq!(&x * &(&y + &z), &(&x * &y) + &(&x * &z));
            prop_assert_eq!(&x * &y, &y * &x);
            prop_assert_eq!(&(&x - &y) + &y, x.clone());
        }

        #[test]
        fn sqrt_squares_back(r in ring_strategy(), a in prop::collection::vec(0i64..1000, 9)) {
            let x = elem(&r, &a);
            if x.is_unit() {
                let sq = &x * &x;
                let s = sq.unit_sqrt().unwrap();
                prop_assert_eq!(&s * &s, sq);
            }
        }

        #[test]
        fn teichmuller_is_fixed_by_q_power(a in prop::collection::vec(0i64..1000, 3), level in 1u32..4) {
            let r = make_ring(Family::Witt, 7, 3, level).unwrap();
            let xbar = RingElem::from_coeffs(&r.residue_field(), &a);
            let t = r.teichmuller(&xbar).unwrap();
            prop_assert_eq!(t.pow(r.residue_size()), t.clone());
            prop_assert_eq!(t.residue(), xbar);
        }
    }
}
