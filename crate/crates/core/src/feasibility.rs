//! Numeric hypothesis checks for the global method: root data, very-good
//! primes, oddness balance, prime bounds and the weight hypotheses.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::ring::arith::is_prime;

pub const VERY_GOOD: &str = "p very good (p \u{2260} 2)";
pub const THM_BOUND: &str = "p > max(17, 2(m\u{2212}1))";
pub const PROP_BOUND_EVEN: &str = "p\u{2212}1 > max(8#Z, (h\u{2212}1)#Z)";
pub const PROP_BOUND_ODD: &str = "p\u{2212}1 > max(8#Z, (2h\u{2212}2)#Z)";
pub const GO_PARITY: &str = "m \u{2262} 2 (mod 4)";
pub const DISTINCT_WEIGHTS: &str = "pairwise distinct weights";
pub const WEIGHT_SPREAD: &str = "(p\u{2212}2)/2";
pub const EQUAL_RANKS: &str = "equal block ranks";
pub const TOTALLY_REAL: &str = "totally real";
pub const SPLIT_CARTAN: &str = "h0 = #positive roots at every real place";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum GroupFamily {
    GSp,
    GO,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct GroupType {
    pub family: GroupFamily,
    pub m: usize,
}

impl GroupType {
    pub fn new(family: GroupFamily, m: usize) -> Result<Self> {
        if m < 2 {
            return Err(Error::InvalidGroup(format!("m = {m} < 2")));
        }
        if family == GroupFamily::GSp && m % 2 == 1 {
            return Err(Error::InvalidGroup(format!("GSp_{m} needs m even")));
        }
        Ok(GroupType { family, m })
    }

    pub fn gsp(m: usize) -> Result<Self> {
        Self::new(GroupFamily::GSp, m)
    }

    pub fn go(m: usize) -> Result<Self> {
        Self::new(GroupFamily::GO, m)
    }

    /// Semisimple rank `n` of the derived group.
    pub fn n(&self) -> usize {
        self.m / 2
    }
}

impl std::fmt::Display for GroupType {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{:?}_{}", self.family, self.m)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RootData {
    pub dim_g: usize,
    pub dim_b: usize,
    pub num_pos_roots: usize,
    pub rank_t: usize,
    pub coxeter_h: usize,
    pub center_order: usize,
}

/// Positive roots of type C_n, B_n or D_n in the `e_i` coordinates: the
/// roots whose first nonzero coordinate is positive.
pub fn positive_roots(g: &GroupType) -> Vec<Vec<i32>> {
    let n = g.n();
    let mut roots = Vec::new();
    let unit = |i: usize, c: i32| {
        let mut v = vec![0; n];
        v[i] = c;
        v
    };
    for i in 0..n {
        for j in i + 1..n {
            for s in [1, -1] {
                let mut v = unit(i, 1);
                v[j] = s;
                roots.push(v);
            }
        }
        match (g.family, g.m % 2) {
            (GroupFamily::GSp, _) => roots.push(unit(i, 2)),
            (GroupFamily::GO, 1) => roots.push(unit(i, 1)),
            _ => {}
        }
    }
    roots
}

pub fn root_data(g: &GroupType) -> RootData {
    let n = g.n();
    let num_pos_roots = positive_roots(g).len();
    let rank_t = n + 1;
    RootData {
        dim_g: 2 * num_pos_roots + rank_t,
        dim_b: num_pos_roots + rank_t,
        num_pos_roots,
        rank_t,
        coxeter_h: if n == 0 { 0 } else { 2 * num_pos_roots / n },
        center_order: match (g.family, g.m % 2) {
            (GroupFamily::GO, 1) => 1,
            _ => 2,
        },
    }
}

/// Outcome of one check. `binding` names the first violated constraint.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub accept: bool,
    pub binding: Option<String>,
    pub detail: String,
}

impl Verdict {
    fn pass(detail: String) -> Self {
        Verdict { accept: true, binding: None, detail }
    }
    fn fail(binding: &str, detail: String) -> Self {
        Verdict { accept: false, binding: Some(binding.to_string()), detail }
    }
}

pub fn check_very_good(p: u64, g: &GroupType) -> Verdict {
    if p == 2 {
        Verdict::fail(VERY_GOOD, format!("2 is not very good for {g}"))
    } else {
        Verdict::pass(format!("{p} is very good for {g}"))
    }
}

/// Both prime bounds, reported separately.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PrimeBounds {
    pub thm: Verdict,
    pub prop: Verdict,
    /// The root system is not irreducible of rank > 1, so the proposition's
    /// hypotheses do not apply as stated; its bound is reported anyway.
    pub root_system_caveat: bool,
    pub verdict: Verdict,
}

pub fn check_prime_bounds(p: u64, g: &GroupType) -> PrimeBounds {
    let m = g.m as u64;
    let thm_rhs = 17.max(2 * (m - 1));
    let thm = if p > thm_rhs {
        Verdict::pass(format!("{p} > {thm_rhs}"))
    } else {
        Verdict::fail(THM_BOUND, format!("{p} \u{226f} {thm_rhs}"))
    };
    let rd = root_data(g);
    let z = rd.center_order as u64;
    let h = rd.coxeter_h as u64;
    let (branch, label) = if z.is_multiple_of(2) {
        (h.saturating_sub(1) * z, PROP_BOUND_EVEN)
    } else {
        ((2 * h).saturating_sub(2) * z, PROP_BOUND_ODD)
    };
    let prop_rhs = (8 * z).max(branch);
    let prop = if p - 1 > prop_rhs {
        Verdict::pass(format!("{} > {prop_rhs}", p - 1))
    } else {
        Verdict::fail(label, format!("{} \u{226f} {prop_rhs}", p - 1))
    };
    let n = g.n();
    let root_system_caveat = n <= 1 || (g.family == GroupFamily::GO && g.m == 4);
    let verdict = match [&thm, &prop].into_iter().find(|v| !v.accept) {
        Some(v) => v.clone(),
        None => Verdict::pass(format!("{}; {}", thm.detail, prop.detail)),
    };
    PrimeBounds { thm, prop, root_system_caveat, verdict }
}

/// Compares `d · #positive roots` with the sum of the supplied `h^0` values,
/// one per real place. Equality at every place of a totally real field is
/// the only accepted case.
pub fn check_oddness_balance(degree: usize, h0: &[usize], g: &GroupType) -> Result<Verdict> {
    let npos = root_data(g).num_pos_roots;
    if h0.len() > degree {
        return Err(Error::InvalidInput(format!("{} real places exceed degree {degree}", h0.len())));
    }
    if let Some(&low) = h0.iter().find(|&&h| h < npos) {
        return Err(Error::InvalidInput(format!("h0 = {low} below the lower bound {npos}")));
    }
    let lhs = degree * npos;
    let rhs: usize = h0.iter().sum();
    Ok(if h0.len() < degree {
        Verdict::fail(TOTALLY_REAL, format!("{} real places for degree {degree}", h0.len()))
    } else if lhs != rhs {
        Verdict::fail(SPLIT_CARTAN, format!("{lhs} < {rhs}"))
    } else {
        Verdict::pass(format!("{lhs} = {rhs}"))
    })
}

/// Weight hypotheses: distinct weights within each block, spread at most
/// `(p-2)/2`, equal block sizes, and for `GO_m` the parity screen.
pub fn check_fl_hypotheses(p: u64, weights: &[Vec<i64>], g: Option<&GroupType>) -> Verdict {
    if let Some(g) = g {
        if g.family == GroupFamily::GO && g.m % 4 == 2 {
            return Verdict::fail(GO_PARITY, format!("m = {}", g.m));
        }
    }
    if weights.windows(2).any(|w| w[0].len() != w[1].len()) {
        return Verdict::fail(EQUAL_RANKS, "blocks have different sizes".into());
    }
    for (t, w) in weights.iter().enumerate() {
        let mut sorted = w.clone();
        sorted.sort_unstable();
        if sorted.windows(2).any(|x| x[0] == x[1]) {
            return Verdict::fail(DISTINCT_WEIGHTS, format!("block {t}"));
        }
        if let (Some(lo), Some(hi)) = (sorted.first(), sorted.last()) {
            let spread = hi - lo;
            if 2 * spread > p as i64 - 2 {
                return Verdict::fail(WEIGHT_SPREAD, format!("block {t}: {spread} > ({p}\u{2212}2)/2"));
            }
        }
    }
    Verdict::pass("weights admissible".into())
}

/// Inputs of a combined feasibility report.
#[derive(Clone, Debug)]
pub struct FeasInput {
    pub group: GroupType,
    pub p: u64,
    pub degree: Option<usize>,
    pub h0: Vec<usize>,
    pub weights: Vec<Vec<i64>>,
}

#[derive(Clone, Debug, Serialize)]
pub struct FeasReport {
    pub group: String,
    pub p: u64,
    pub root_data: RootData,
    pub very_good: Verdict,
    pub fl_hypotheses: Verdict,
    pub prime_bounds: PrimeBounds,
    pub oddness: Option<Verdict>,
    pub accept: bool,
    pub binding: Option<String>,
}

pub fn feasibility_report(input: &FeasInput) -> Result<FeasReport> {
    if !is_prime(input.p) {
        return Err(Error::NotPrime(input.p));
    }
    let g = &input.group;
    let very_good = check_very_good(input.p, g);
    let fl_hypotheses = check_fl_hypotheses(input.p, &input.weights, Some(g));
    let prime_bounds = check_prime_bounds(input.p, g);
    let oddness = input.degree.map(|d| check_oddness_balance(d, &input.h0, g)).transpose()?;
    let binding = [Some(&very_good), Some(&fl_hypotheses), Some(&prime_bounds.verdict), oddness.as_ref()]
        .into_iter()
        .flatten()
        .find(|v| !v.accept)
        .and_then(|v| v.binding.clone());
    Ok(FeasReport {
        group: g.to_string(),
        p: input.p,
        root_data: root_data(g),
        very_good,
        fl_hypotheses,
        prime_bounds,
        oddness,
        accept: binding.is_none(),
        binding,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn root_data_examples() {
        let r = root_data(&GroupType::gsp(4).unwrap());
        assert_eq!((r.dim_g, r.dim_b, r.num_pos_roots, r.coxeter_h, r.center_order), (11, 7, 4, 4, 2));
        let r = root_data(&GroupType::gsp(2).unwrap());
        assert_eq!((r.dim_g, r.dim_b, r.num_pos_roots), (4, 3, 1));
        let r = root_data(&GroupType::go(5).unwrap());
        assert_eq!((r.dim_g, r.dim_b, r.num_pos_roots, r.center_order), (11, 7, 4, 1));
        assert!(GroupType::gsp(3).is_err());
        assert!(GroupType::go(1).is_err());
    }

    #[test]
    fn root_counts_closed_forms() {
        for m in 2..=20 {
            let go = GroupType::go(m).unwrap();
            let n = m / 2;
            let r = root_data(&go);
            assert_eq!(r.num_pos_roots, if m % 2 == 1 { n * n } else { n * n - n });
            assert_eq!(r.dim_b, r.num_pos_roots + r.rank_t);
            assert_eq!(r.dim_g, 2 * r.num_pos_roots + r.rank_t);
            // dim GO_m = dim SO_m + 1
            assert_eq!(r.dim_g, m * (m - 1) / 2 + 1);
            if m % 2 == 0 {
                let r = root_data(&GroupType::gsp(m).unwrap());
                assert_eq!(r.num_pos_roots, n * n);
                assert_eq!(r.dim_g, m * (m + 1) / 2 + 1);
                assert_eq!(r.coxeter_h, m);
            }
        }
    }

    #[test]
    fn bound_examples() {
        let g4 = GroupType::gsp(4).unwrap();
        let b = check_prime_bounds(19, &g4);
        assert!(b.thm.accept && b.prop.accept);
        let b = check_prime_bounds(17, &g4);
        assert_eq!(b.verdict.binding.as_deref(), Some(THM_BOUND));
        let b = check_prime_bounds(19, &GroupType::go(9).unwrap());
        assert!(b.thm.accept && b.prop.accept);
        assert_eq!(b.prop.detail, "18 > 14");
        assert!(check_prime_bounds(23, &GroupType::gsp(2).unwrap()).root_system_caveat);
    }

    #[test]
    fn gsp_bounds_agree_except_at_two_m_minus_one() {
        for m in (2..=20).step_by(2) {
            let g = GroupType::gsp(m).unwrap();
            for p in (3..200u64).filter(|&p| is_prime(p)) {
                let b = check_prime_bounds(p, &g);
                let exception = p == 2 * m as u64 - 1 && p > 17;
                assert_eq!(b.thm.accept != b.prop.accept, exception, "m={m} p={p}");
            }
        }
    }

    #[test]
    fn oddness_examples() {
        let g = GroupType::gsp(4).unwrap();
        assert!(check_oddness_balance(2, &[4, 4], &g).unwrap().accept);
        let v = check_oddness_balance(2, &[4, 5], &g).unwrap();
        assert!(!v.accept);
        assert_eq!(v.detail, "8 < 9");
        assert!(matches!(check_oddness_balance(1, &[3], &g), Err(Error::InvalidInput(_))));
        assert!(matches!(check_oddness_balance(1, &[4, 4], &g), Err(Error::InvalidInput(_))));
        assert_eq!(check_oddness_balance(2, &[4], &g).unwrap().binding.as_deref(), Some(TOTALLY_REAL));
    }

    #[test]
    fn fl_examples() {
        assert!(check_fl_hypotheses(11, &[vec![0, 1, 2, 3]], None).accept);
        assert_eq!(check_fl_hypotheses(5, &[vec![0, 1, 2, 3]], None).binding.as_deref(), Some(WEIGHT_SPREAD));
        let go6 = GroupType::go(6).unwrap();
        assert_eq!(check_fl_hypotheses(101, &[], Some(&go6)).binding.as_deref(), Some(GO_PARITY));
        assert_eq!(check_fl_hypotheses(11, &[vec![0, 0]], None).binding.as_deref(), Some(DISTINCT_WEIGHTS));
        assert_eq!(check_fl_hypotheses(11, &[vec![0], vec![0, 1]], None).binding.as_deref(), Some(EQUAL_RANKS));
    }

    #[test]
    fn very_good_examples() {
        assert!(!check_very_good(2, &GroupType::gsp(4).unwrap()).accept);
        assert!(check_very_good(3, &GroupType::go(5).unwrap()).accept);
        assert!(check_very_good(13, &GroupType::gsp(6).unwrap()).accept);
    }
}
