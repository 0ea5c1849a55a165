//! Cyclic simple modules `M(h; i)`, their tensor products, explicit summand
//! embeddings, and the finite-field nonvanishing search for
//! `P(X) = X + X^{q^{h_s}} + … + X^{q^{(d_s-1) h_s}}`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::fl_module::{Block, FLModule, TensorProduct};
use crate::matrix::Matrix;
use crate::ring::arith::{gcd, is_prime, lcm, prime_factors};
use crate::ring::{Ring, RingElem};
use crate::size_guard;

/// Smallest period of `i`, always a divisor of its length.
pub fn minimal_period(i: &[i64]) -> usize {
    let n = i.len();
    (1..=n).find(|&d| n.is_multiple_of(d) && (0..n).all(|x| i[x] == i[x % d])).unwrap_or(n)
}

/// A weight function `i: Z/hZ → Z` of minimal period `h`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct SimpleSpec {
    pub h: usize,
    pub i: Vec<i64>,
}

impl SimpleSpec {
    pub fn new(i: Vec<i64>) -> Result<Self> {
        if i.is_empty() {
            return Err(Error::InvalidInput("empty weight function".into()));
        }
        let h = i.len();
        let period = minimal_period(&i);
        if period != h {
            return Err(Error::NonMinimalPeriod { h, period });
        }
        Ok(SimpleSpec { h, i })
    }

    pub fn with_period(h: usize, i: Vec<i64>) -> Result<Self> {
        if i.len() != h {
            return Err(Error::InvalidInput(format!("{} weights for period {h}", i.len())));
        }
        Self::new(i)
    }

    fn at(&self, n: usize) -> i64 {
        self.i[n % self.h]
    }
}

/// `F_q` for a prime power `q`.
pub fn field_of_order(q: u64) -> Result<Ring> {
    let ps = prime_factors(q as u128);
    let p = *ps.first().ok_or_else(|| Error::InvalidInput(format!("q = {q}")))? as u64;
    if ps.len() != 1 || !is_prime(p) {
        return Err(Error::InvalidInput(format!("q = {q} is not a prime power")));
    }
    let f = (q as f64).log(p as f64).round() as usize;
    if (p as u128).pow(f as u32) != q as u128 {
        return Err(Error::InvalidInput(format!("q = {q} is not a prime power")));
    }
    Ring::finite_field(p, f)
}

/// A cyclic module with `φ(g_j) = g_{j-1}` for `j ≥ 1` and
/// `φ(g_0) = λ g_{n-1}`, in the weight-sorted basis. `slot[j]` is the
/// position of `g_j`.
#[derive(Clone, Debug)]
pub struct CyclicModule {
    pub module: FLModule,
    pub slot: Vec<usize>,
}

pub fn cyclic_module(field: &Ring, weights: &[i64], lambda: &RingElem) -> Result<CyclicModule> {
    if !field.is_field() {
        return Err(Error::NotResidueField);
    }
    let n = weights.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&j| (weights[j], j));
    let mut slot = vec![0; n];
    for (s, &j) in order.iter().enumerate() {
        slot[j] = s;
    }
    let mut phi = Matrix::zeros(field, n, n);
    for j in 0..n {
        let (target, coeff) = if j == 0 { (n - 1, lambda.clone()) } else { (j - 1, RingElem::one(field)) };
        phi[(slot[target], slot[j])] = coeff;
    }
    let sorted: Vec<i64> = order.iter().map(|&j| weights[j]).collect();
    let bounds = (sorted[0], sorted[n - 1]);
    let module = FLModule::new(field, bounds, vec![Block { weights: sorted, phi }]);
    module.validate()?;
    Ok(CyclicModule { module, slot })
}

/// `M(h; i)` over `field`, single block.
pub fn build_simple(spec: &SimpleSpec, field: &Ring) -> Result<CyclicModule> {
    let spec = SimpleSpec::with_period(spec.h, spec.i.clone())?;
    cyclic_module(field, &spec.i, &RingElem::one(field))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Summand {
    pub s: usize,
    /// `i''(r) = i_r + i'_{s+r}` on `Z/lcm Z`.
    pub weights: Vec<i64>,
    pub h_s: usize,
    pub d_s: usize,
    pub spec: SimpleSpec,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DecompositionResult {
    pub gcd: usize,
    pub lcm: usize,
    pub summands: Vec<Summand>,
}

impl DecompositionResult {
    pub fn dimension(&self) -> usize {
        self.summands.iter().map(|s| s.d_s * s.h_s).sum()
    }

    /// Weights of all summands, each repeated `d_s` times, sorted.
    pub fn weight_multiset(&self) -> Vec<i64> {
        let mut w: Vec<i64> = self
            .summands
            .iter()
            .flat_map(|s| std::iter::repeat_n(&s.spec.i, s.d_s).flatten().copied())
            .collect();
        w.sort_unstable();
        w
    }

    /// Orders of the roots of unity needed to split off every copy.
    pub fn root_of_unity_order(&self) -> usize {
        self.summands.iter().fold(1, |acc, s| lcm(acc as u64, s.d_s as u64) as usize)
    }
}

pub fn tensor_decompose(a: &SimpleSpec, b: &SimpleSpec) -> DecompositionResult {
    let g = gcd(a.h as u64, b.h as u64) as usize;
    let l = lcm(a.h as u64, b.h as u64) as usize;
    let summands = (0..g)
        .map(|s| {
            let weights: Vec<i64> = (0..l).map(|r| a.at(r) + b.at(s + r)).collect();
            let h_s = minimal_period(&weights);
            let spec = SimpleSpec { h: h_s, i: weights[..h_s].to_vec() };
            Summand { s, weights, h_s, d_s: l / h_s, spec }
        })
        .collect();
    DecompositionResult { gcd: g, lcm: l, summands }
}

/// The `copy`-th embedding of the summand for `s`: the source has
/// `φ(g_0) = λ g_{h_s-1}` with `λ = ζ^{copy}` for a primitive `d_s`-th root
/// of unity `ζ`, and `g_j ↦ Σ_m λ^m f_{j + m h_s}` where
/// `f_r = e_{r mod h} ⊗ e'_{(r+s) mod h'}`.
#[derive(Clone, Debug)]
pub struct SummandEmbedding {
    pub s: usize,
    pub copy: usize,
    pub lambda: RingElem,
    pub source: FLModule,
    /// Columns indexed by the sorted source basis, rows by the tensor basis.
    pub map: Matrix,
}

impl SummandEmbedding {
    /// Validated source, filtration-preserving and `φ`-intertwining map of
    /// full column rank.
    pub fn verify(&self, tensor: &FLModule) -> bool {
        self.source.validate().is_ok()
            && self.source.is_morphism_to(tensor, std::slice::from_ref(&self.map))
            && self.map.rank() == self.map.cols()
    }
}

fn root_of_unity(field: &Ring, d: usize) -> Result<RingElem> {
    let q = field.residue_size();
    if !(q - 1).is_multiple_of(d as u128) {
        return Err(Error::MissingRootsOfUnity { q: q as u64, order: d });
    }
    Ok(field.primitive_element()?.pow((q - 1) / d as u128))
}

fn embedding_in(
    a: &CyclicModule,
    b: &CyclicModule,
    t: &TensorProduct,
    sm: &Summand,
    copy: usize,
) -> Result<SummandEmbedding> {
    if copy >= sm.d_s {
        return Err(Error::IndexOutOfRange(format!("copy {copy} of {}", sm.d_s)));
    }
    let field = a.module.ring.clone();
    let (h, h2) = (a.slot.len(), b.slot.len());
    let lambda = root_of_unity(&field, sm.d_s)?.pow(copy as u128);
    let src = cyclic_module(&field, &sm.spec.i, &lambda)?;
    let mut map = Matrix::zeros(&field, h * h2, sm.h_s);
    for j in 0..sm.h_s {
        let mut coeff = RingElem::one(&field);
        for m in 0..sm.d_s {
            let r = j + m * sm.h_s;
            let row = t.position[0][a.slot[r % h] * h2 + b.slot[(r + sm.s) % h2]];
            map[(row, src.slot[j])] = coeff.clone();
            coeff = &coeff * &lambda;
        }
    }
    Ok(SummandEmbedding { s: sm.s, copy, lambda, source: src.module, map })
}

/// One embedding of the summand indexed by `s`.
pub fn summand_embedding(
    a: &SimpleSpec,
    b: &SimpleSpec,
    field: &Ring,
    s: usize,
    copy: usize,
) -> Result<SummandEmbedding> {
    let dec = tensor_decompose(a, b);
    let sm = dec
        .summands
        .get(s)
        .ok_or_else(|| Error::IndexOutOfRange(format!("s = {s} ≥ gcd {}", dec.gcd)))?;
    let (ma, mb) = (build_simple(a, field)?, build_simple(b, field)?);
    let t = ma.module.tensor_with_index(&mb.module)?;
    embedding_in(&ma, &mb, &t, sm, copy)
}

/// The tensor module and every summand embedding, `(s, copy)` in order.
pub fn all_embeddings(a: &SimpleSpec, b: &SimpleSpec, field: &Ring) -> Result<(FLModule, Vec<SummandEmbedding>)> {
    let dec = tensor_decompose(a, b);
    let (ma, mb) = (build_simple(a, field)?, build_simple(b, field)?);
    let t = ma.module.tensor_with_index(&mb.module)?;
    let mut out = Vec::new();
    for sm in &dec.summands {
        for copy in 0..sm.d_s {
            out.push(embedding_in(&ma, &mb, &t, sm, copy)?);
        }
    }
    Ok((t.module, out))
}

/// The columns of all embeddings side by side.
pub fn joint_change_of_basis(embeddings: &[SummandEmbedding]) -> Option<Matrix> {
    let mut it = embeddings.iter();
    let first = it.next()?.map.clone();
    Some(it.fold(first, |acc, e| acc.concat(&e.map)))
}

/// Ring embedding `F_{q^h} ↪ F_{q^L}` given by the image of the generator.
#[derive(Clone, Debug)]
pub struct FieldEmbedding {
    pub small: Ring,
    pub big: Ring,
    pub image_of_x: RingElem,
}

impl FieldEmbedding {
    pub fn apply(&self, x: &RingElem) -> RingElem {
        let mut acc = RingElem::zero(&self.big);
        for &c in x.raw().iter().rev() {
            acc = &(&acc * &self.image_of_x) + &RingElem::from_u64(&self.big, c);
        }
        acc
    }
}

fn eval_poly(coeffs: &[u64], x: &RingElem) -> RingElem {
    let ring = x.ring();
    coeffs.iter().rev().fold(RingElem::zero(ring), |acc, &c| &(&acc * x) + &RingElem::from_u64(ring, c))
}

/// Finds a root in `big` of the defining polynomial of `small` among the
/// elements of the subfield of matching size.
pub fn embed_subfield(small: &Ring, big: &Ring) -> Result<FieldEmbedding> {
    if small.p() != big.p() || !big.f().is_multiple_of(small.f()) || !small.is_field() || !big.is_field() {
        return Err(Error::InvalidInput("no embedding between these fields".into()));
    }
    let order = small.residue_size() - 1;
    let g = big.primitive_element()?.pow((big.residue_size() - 1) / order);
    // degree-one moduli may have the root 0
    let zero = RingElem::zero(big);
    if eval_poly(small.modulus(), &zero).is_zero() {
        return Ok(FieldEmbedding { small: small.clone(), big: big.clone(), image_of_x: zero });
    }
    let mut y = RingElem::one(big);
    for _ in 0..order {
        if eval_poly(small.modulus(), &y).is_zero() {
            return Ok(FieldEmbedding { small: small.clone(), big: big.clone(), image_of_x: y });
        }
        y = &y * &g;
    }
    Err(Error::InternalRankFailure("subfield generator has no root".into()))
}

/// `P(x) = Σ_{m<d} x^{q^{m h_s}}` with `q = p^{f_q}`.
pub fn eval_p(x: &RingElem, f_q: usize, h_s: usize, d: usize) -> RingElem {
    (0..d).fold(RingElem::zero(x.ring()), |acc, m| &acc + &x.frobenius_pow(f_q * m * h_s))
}

#[derive(Clone, Debug)]
pub struct NonvanishingPair {
    /// Exponents of the generators of `F_{q^h}^×` and `F_{q^{h'}}^×`.
    pub a: u128,
    pub b: u128,
    pub zeta: RingElem,
    pub zeta2: RingElem,
    /// `P(ζ ζ')` in `F_{q^L}`.
    pub value: RingElem,
    pub emb: FieldEmbedding,
    pub emb2: FieldEmbedding,
    pub d_s: usize,
}

/// First `(a, b)` in lexicographic order with `P(g^a g'^b) ≠ 0`, where `g`,
/// `g'` are the primitive elements of `F_{q^h}` and `F_{q^{h'}}`.
pub fn find_nonvanishing_pair(q: u64, h: usize, h2: usize, h_s: usize) -> Result<NonvanishingPair> {
    let base = field_of_order(q)?;
    let (p, f_q) = (base.p(), base.f());
    let l = lcm(h as u64, h2 as u64) as usize;
    if h == 0 || h2 == 0 || h_s == 0 || !l.is_multiple_of(h_s) {
        return Err(Error::InvalidInput(format!("h_s = {h_s} must divide lcm = {l}")));
    }
    let n1 = (q as u128).pow(h as u32) - 1;
    let n2 = (q as u128).pow(h2 as u32) - 1;
    let guard = size_guard(1 << 24);
    if n1.saturating_mul(n2) > guard {
        return Err(Error::SizeGuardExceeded(format!("{n1}·{n2} candidate pairs exceed {guard}")));
    }
    let big = Ring::finite_field(p, f_q * l)?;
    let small = Ring::finite_field(p, f_q * h)?;
    let small2 = Ring::finite_field(p, f_q * h2)?;
    let emb = embed_subfield(&small, &big)?;
    let emb2 = embed_subfield(&small2, &big)?;
    let g = small.primitive_element()?;
    let g2 = small2.primitive_element()?;
    let d = l / h_s;
    let g2_big = emb2.apply(&g2);
    let mut zeta = RingElem::one(&small);
    for a in 0..n1 {
        let za = emb.apply(&zeta);
        let mut zeta2 = RingElem::one(&small2);
        let mut prod = za.clone();
        for b in 0..n2 {
            let value = eval_p(&prod, f_q, h_s, d);
            if !value.is_zero() {
                return Ok(NonvanishingPair { a, b, zeta, zeta2, value, emb, emb2, d_s: d });
            }
            zeta2 = &zeta2 * &g2;
            prod = &prod * &g2_big;
        }
        zeta = &zeta * &g;
    }
    Err(Error::InternalRankFailure("P vanishes on every product".into()))
}
