//! Order-level feasibility sieve for Paley-type PDSs in abelian groups.
//!
//! Rules:
//! - `R1`: a regular PDS with non-square `Δ` has Paley parameters of order
//!   `p^(2s+1)` with `p ≡ 1 (mod 4)`.
//! - `R2`: in a group of order `p_1^(2k_1)···p_n^(2k_n)`, `n >= 2`, a Paley-type
//!   PDS forces `p_i ≡ 3 (mod 4)` for every odd `k_i`.
//! - `R3`: `β = -1` (up to complementation) forces Paley parameters or
//!   `(243, 22, 1, 2)`.
//!
//! Known constructions (field squares, and the all-even-exponent family of
//! Polhill) are consulted first; a rule firing on an order with a known
//! construction is reported as an internal inconsistency.

use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arith::{exact_sqrt, factorize, gcd};
use crate::pds::{paley_params, PdsParams, SCHEMA};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FeasibilityError {
    #[error("congruence rule needs an even exponent, got {0}")]
    OddExponent(u32),
    #[error("Δ = {0} is not a perfect square")]
    DeltaNotSquare(i64),
    #[error("|N| = {n} does not divide v = {v}")]
    NotDivisor { v: u64, n: u64 },
    #[error("gcd(|N|, v/|N|) = gcd({n}, {index}) ≠ 1")]
    NotCoprime { n: u64, index: u64 },
    #[error("index v/|N| = {0} is even")]
    EvenIndex(u64),
    #[error("internal inconsistency at v = {v}: construction {construction} exists but {rule} fired: {detail}")]
    Inconsistent {
        v: u64,
        construction: RuleId,
        rule: RuleId,
        detail: String,
    },
}

/// `v = Π p_i^{e_i}`, primes ascending.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrderFactorization {
    pairs: Vec<(u64, u32)>,
    v: u64,
}

impl OrderFactorization {
    pub fn of(v: u64) -> Self {
        Self {
            pairs: factorize(v),
            v,
        }
    }

    pub fn pairs(&self) -> &[(u64, u32)] {
        &self.pairs
    }

    pub fn v(&self) -> u64 {
        self.v
    }

    pub fn is_square(&self) -> bool {
        self.pairs.iter().all(|&(_, e)| e % 2 == 0)
    }

    pub fn prime_power(&self) -> Option<(u64, u32)> {
        match self.pairs.as_slice() {
            [single] => Some(*single),
            _ => None,
        }
    }
}

impl fmt::Display for OrderFactorization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.pairs.is_empty() {
            return write!(f, "{}", self.v);
        }
        for (i, (p, e)) in self.pairs.iter().enumerate() {
            if i > 0 {
                f.write_str("·")?;
            }
            if *e == 1 {
                write!(f, "{p}")?;
            } else {
                write!(f, "{p}^{e}")?;
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum RuleId {
    R1,
    R2,
    R3,
    PaleyField,
    Polhill,
}

impl fmt::Display for RuleId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RuleOutcome {
    Pass,
    Infeasible { rule: RuleId, detail: String },
    NotApplicable(String),
}

impl RuleOutcome {
    pub fn is_infeasible(&self) -> bool {
        matches!(self, RuleOutcome::Infeasible { .. })
    }
}

/// R1: non-square `Δ` forces Paley parameters of order `p^(2s+1)`, `p ≡ 1 (mod 4)`.
pub fn rule_delta_square(params: &PdsParams) -> RuleOutcome {
    let delta = params.delta();
    if exact_sqrt(delta).is_some() {
        return RuleOutcome::Pass;
    }
    let order = OrderFactorization::of(params.v);
    match order.prime_power() {
        Some((p, e)) if e % 2 == 1 && p % 4 == 1 && params.is_paley() => RuleOutcome::Pass,
        Some((p, e)) if e % 2 == 1 && p % 4 == 1 => RuleOutcome::Infeasible {
            rule: RuleId::R1,
            detail: format!(
                "Δ = {delta} is not a perfect square, so {params} would have to be the Paley parameters of order {}",
                params.v
            ),
        },
        Some((p, e)) if e % 2 == 1 => RuleOutcome::Infeasible {
            rule: RuleId::R1,
            detail: format!(
                "Δ = {delta} is not a perfect square and v = {order} but {p} ≡ {} (mod 4), not 1",
                p % 4
            ),
        },
        _ => RuleOutcome::Infeasible {
            rule: RuleId::R1,
            detail: format!(
                "Δ = {delta} is not a perfect square, so v must be p^(2s+1) with p ≡ 1 (mod 4), but v = {order}"
            ),
        },
    }
}

const EXCEPTIONAL: PdsParams = PdsParams {
    v: 243,
    k: 22,
    lambda: 1,
    mu: 2,
};

/// R3: `β = -1` for the parameters or their complement forces Paley type or
/// `(243, 22, 1, 2)`, up to complementation.
pub fn rule_beta_minus_one(params: &PdsParams) -> RuleOutcome {
    let complement = params.complement();
    let beta_minus_one = params.beta() == -1 || complement.is_some_and(|c| c.beta() == -1);
    if !beta_minus_one {
        return RuleOutcome::Pass;
    }
    let allowed = |p: &PdsParams| p.is_paley() || *p == EXCEPTIONAL;
    if allowed(params) || complement.as_ref().is_some_and(allowed) {
        RuleOutcome::Pass
    } else {
        RuleOutcome::Infeasible {
            rule: RuleId::R3,
            detail: format!(
                "β = -1 (up to complementation) but {params} is neither of Paley type nor {EXCEPTIONAL} or its complement"
            ),
        }
    }
}

/// `Σ_{j<e} p^j mod 4`.
fn geometric_sum_mod4(p: u64, e: u32) -> u64 {
    let r = p % 4;
    let mut term = 1;
    let mut sum = 0;
    for _ in 0..e {
        sum = (sum + term) % 4;
        term = term * r % 4;
    }
    sum
}

/// Whether `p^(e-1) + ... + p + 1 ≡ 0 (mod 4)` for even `e`.
pub fn congruence_rule(p: u64, e: u32) -> Result<bool, FeasibilityError> {
    if e % 2 == 1 || e == 0 {
        return Err(FeasibilityError::OddExponent(e));
    }
    Ok(geometric_sum_mod4(p, e) == 0)
}

/// R2 on a square order with at least two distinct odd primes.
pub fn rule_main_theorem(f: &OrderFactorization) -> RuleOutcome {
    if f.pairs.len() < 2 {
        return RuleOutcome::NotApplicable(format!("v = {f} has fewer than two distinct primes"));
    }
    if !f.is_square() {
        return RuleOutcome::NotApplicable(format!("v = {f} is not a perfect square"));
    }
    if f.pairs.iter().any(|&(p, _)| p == 2) {
        return RuleOutcome::NotApplicable(format!("v = {f} is even"));
    }
    for &(p, e) in &f.pairs {
        if congruence_rule(p, e).expect("even exponent") {
            continue;
        }
        let k = e / 2;
        let n = f.v / p.pow(e);
        let gap = (f.v - n) / 4;
        let terms = if e == 2 {
            format!("{p} + 1")
        } else {
            format!("{p}^{} + ... + {p} + 1", e - 1)
        };
        return RuleOutcome::Infeasible {
            rule: RuleId::R2,
            detail: format!(
                "v = {f}: k = {k} is odd at p = {p} but {p} ≡ 1 (mod 4); \
                 {terms} ≡ {} (mod 4), so p - 1 = {} does not divide (v - {n})/4 = {gap}",
                geometric_sum_mod4(p, e),
                p - 1
            ),
        };
    }
    RuleOutcome::Pass
}

/// A root of the quadratic for `k_1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct K1Root {
    /// Real value, `None` when the discriminant is negative.
    pub value: Option<f64>,
    /// Exact value when it is an integer.
    pub integral: Option<i64>,
    pub in_range: bool,
}

impl K1Root {
    pub fn admissible(&self) -> Option<i64> {
        self.integral.filter(|_| self.in_range)
    }
}

/// Parameters forced on `D ∩ N` for a Hall subgroup `N` of odd index.
#[derive(Debug, Clone, PartialEq)]
pub struct SubgroupRestriction {
    pub v1: u64,
    pub pi: u64,
    pub theta: i64,
    pub beta1: i64,
    pub delta1: i64,
    pub k1_plus: K1Root,
    pub k1_minus: K1Root,
}

impl SubgroupRestriction {
    /// True when neither root is an integer in `0..=|N|-1`.
    pub fn locally_infeasible(&self) -> bool {
        self.k1_plus.admissible().is_none() && self.k1_minus.admissible().is_none()
    }

    /// Full `(v1, k1, λ1, μ1)` for every admissible root, deduplicated.
    pub fn admissible_params(&self) -> Vec<PdsParams> {
        let mut out: Vec<PdsParams> = [self.k1_plus, self.k1_minus]
            .iter()
            .filter_map(|r| r.admissible())
            .filter_map(|k1| self.params_for(k1))
            .collect();
        out.dedup();
        out
    }

    fn params_for(&self, k1: i64) -> Option<PdsParams> {
        let gap = self.delta1 - self.beta1 * self.beta1;
        if gap % 4 != 0 {
            return None;
        }
        let mu1 = k1 - gap / 4;
        let lambda1 = self.beta1 + mu1;
        (mu1 >= 0 && lambda1 >= 0).then_some(PdsParams {
            v: self.v1,
            k: k1 as u64,
            lambda: lambda1 as u64,
            mu: mu1 as u64,
        })
    }
}

/// Restriction of a nontrivial regular PDS with square `Δ` to a subgroup of
/// order `n_order` with coprime, odd index.
pub fn subgroup_restriction(
    params: &PdsParams,
    n_order: u64,
) -> Result<SubgroupRestriction, FeasibilityError> {
    let delta = params.delta();
    let root = exact_sqrt(delta).ok_or(FeasibilityError::DeltaNotSquare(delta))?;
    if n_order == 0 || !params.v.is_multiple_of(n_order) {
        return Err(FeasibilityError::NotDivisor {
            v: params.v,
            n: n_order,
        });
    }
    let index = params.v / n_order;
    if gcd(n_order, index) != 1 {
        return Err(FeasibilityError::NotCoprime { n: n_order, index });
    }
    if index.is_multiple_of(2) {
        return Err(FeasibilityError::EvenIndex(index));
    }

    let pi = gcd(n_order, root as u64);
    let pi_i = pi as i64;
    let beta = params.beta();
    // (2θ - 1)π <= β < (2θ + 1)π
    let theta = (beta + pi_i).div_euclid(2 * pi_i);
    let beta1 = beta - 2 * theta * pi_i;
    let delta1 = pi_i * pi_i;

    let n = n_order as i64;
    let disc = (n + beta1).pow(2) - (delta1 - beta1 * beta1) * (n - 1);
    let make = |sign: i64| -> K1Root {
        if disc < 0 {
            return K1Root {
                value: None,
                integral: None,
                in_range: false,
            };
        }
        let value = ((n + beta1) as f64 + sign as f64 * (disc as f64).sqrt()) / 2.0;
        let integral = exact_sqrt(disc)
            .map(|s| n + beta1 + sign * s)
            .filter(|num| num % 2 == 0)
            .map(|num| num / 2);
        let in_range = match integral {
            Some(k) => (0..n).contains(&k),
            None => value >= 0.0 && value <= (n - 1) as f64,
        };
        K1Root {
            value: Some(value),
            integral,
            in_range,
        }
    };
    Ok(SubgroupRestriction {
        v1: n_order,
        pi,
        theta,
        beta1,
        delta1,
        k1_plus: make(1),
        k1_minus: make(-1),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum VerdictKind {
    KnownExists,
    Infeasible,
    Open,
    NotApplicable,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub v: u64,
    pub kind: VerdictKind,
    pub rule: Option<RuleId>,
    pub detail: String,
}

#[derive(Serialize)]
struct VerdictJson<'a> {
    schema: &'static str,
    #[serde(flatten)]
    verdict: &'a Verdict,
}

impl Verdict {
    fn new(v: u64, kind: VerdictKind, rule: Option<RuleId>, detail: String) -> Self {
        Self {
            v,
            kind,
            rule,
            detail,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&VerdictJson {
            schema: SCHEMA,
            verdict: self,
        })
        .expect("serializable")
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.kind)?;
        if let Some(rule) = self.rule {
            write!(f, " ({rule})")?;
        }
        write!(f, ": {}", self.detail)
    }
}

/// Known constructions of Paley-type PDSs of order `v`. Returns an `Open`
/// verdict when no construction is known, deferring to the rules.
pub fn paley_existence(f: &OrderFactorization) -> Verdict {
    let v = f.v;
    if v % 4 != 1 {
        return Verdict::new(
            v,
            VerdictKind::NotApplicable,
            None,
            format!("v = {v} is not ≡ 1 (mod 4)"),
        );
    }
    if let Some((p, e)) = f.prime_power() {
        return Verdict::new(
            v,
            VerdictKind::KnownExists,
            Some(RuleId::PaleyField),
            format!("v = {f} ≡ 1 (mod 4): nonzero squares of F_{v} (p = {p}, e = {e})"),
        );
    }
    if f.pairs.len() >= 2 && f.pairs.iter().all(|&(_, e)| e % 4 == 0) {
        return Verdict::new(
            v,
            VerdictKind::KnownExists,
            Some(RuleId::Polhill),
            format!("v = {f}: square order with every k_i even (Polhill's construction)"),
        );
    }
    Verdict::new(
        v,
        VerdictKind::Open,
        None,
        format!("no known construction for v = {f}"),
    )
}

/// Classifies the order `v` for Paley-type PDSs.
pub fn sieve(v: u64) -> Result<Verdict, FeasibilityError> {
    if v < 5 || v % 4 != 1 {
        return Ok(Verdict::new(
            v,
            VerdictKind::NotApplicable,
            None,
            format!("Paley parameters need v >= 5 and v ≡ 1 (mod 4); v = {v}"),
        ));
    }
    let f = OrderFactorization::of(v);
    let params = paley_params(v).expect("v ≡ 1 (mod 4)");
    let construction = paley_existence(&f);
    let fired = [
        rule_delta_square(&params),
        rule_main_theorem(&f),
        rule_beta_minus_one(&params),
    ]
    .into_iter()
    .find_map(|o| match o {
        RuleOutcome::Infeasible { rule, detail } => Some((rule, detail)),
        _ => None,
    });

    match (construction.kind, fired) {
        (VerdictKind::KnownExists, Some((rule, detail))) => Err(FeasibilityError::Inconsistent {
            v,
            construction: construction.rule.expect("constructions name a source"),
            rule,
            detail,
        }),
        (VerdictKind::KnownExists, None) => Ok(construction),
        (_, Some((rule, detail))) => {
            Ok(Verdict::new(v, VerdictKind::Infeasible, Some(rule), detail))
        }
        (_, None) => Ok(Verdict::new(
            v,
            VerdictKind::Open,
            None,
            format!("no rule decides v = {f}; no known construction"),
        )),
    }
}

/// Sieve verdicts for every `v ≡ 1 (mod 4)` with `5 <= v <= max`, ascending.
pub fn atlas(max: u64) -> Result<Vec<Verdict>, FeasibilityError> {
    let orders: Vec<u64> = (5..=max).step_by(4).collect();
    orders.into_par_iter().map(sieve).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(v: u64, k: u64, l: u64, m: u64) -> PdsParams {
        PdsParams {
            v,
            k,
            lambda: l,
            mu: m,
        }
    }

    #[test]
    fn delta_square_rule() {
        assert_eq!(rule_delta_square(&params(13, 6, 2, 3)), RuleOutcome::Pass);
        let p = params(21, 10, 5, 4);
        assert_eq!(p.delta(), 25);
        assert_eq!(rule_delta_square(&p), RuleOutcome::Pass);
        let p = params(27, 13, 5, 7);
        assert_eq!(p.delta(), 28);
        assert!(matches!(
            rule_delta_square(&p),
            RuleOutcome::Infeasible {
                rule: RuleId::R1,
                ..
            }
        ));
        // right order, wrong shape
        let p = params(125, 60, 28, 31);
        assert_eq!(p.delta(), 125);
        assert!(matches!(
            rule_delta_square(&p),
            RuleOutcome::Infeasible {
                rule: RuleId::R1,
                ..
            }
        ));
        assert_eq!(
            rule_delta_square(&paley_params(125).unwrap()),
            RuleOutcome::Pass
        );
    }

    #[test]
    fn beta_minus_one_rule() {
        assert_eq!(
            rule_beta_minus_one(&params(243, 22, 1, 2)),
            RuleOutcome::Pass
        );
        assert_eq!(
            rule_beta_minus_one(&params(243, 220, 199, 200)),
            RuleOutcome::Pass
        );
        assert_eq!(
            rule_beta_minus_one(&params(25, 12, 5, 6)),
            RuleOutcome::Pass
        );
        assert_eq!(
            rule_beta_minus_one(&params(45, 22, 10, 11)),
            RuleOutcome::Pass
        );
        assert_eq!(rule_beta_minus_one(&params(16, 6, 2, 2)), RuleOutcome::Pass);
        // β = -1 but not Paley-shaped
        let p = params(16, 5, 0, 1);
        assert!(matches!(
            rule_beta_minus_one(&p),
            RuleOutcome::Infeasible {
                rule: RuleId::R3,
                ..
            }
        ));
    }

    #[test]
    fn congruence_examples() {
        assert_eq!(congruence_rule(3, 2), Ok(true));
        assert_eq!(congruence_rule(5, 2), Ok(false));
        assert_eq!(congruence_rule(5, 4), Ok(true));
        assert_eq!(congruence_rule(5, 3), Err(FeasibilityError::OddExponent(3)));
    }

    #[test]
    fn main_theorem_examples() {
        let out = rule_main_theorem(&OrderFactorization::of(225));
        match out {
            RuleOutcome::Infeasible { rule, detail } => {
                assert_eq!(rule, RuleId::R2);
                assert!(detail.contains("5 ≡ 1 (mod 4)"), "{detail}");
                assert!(detail.contains("= 54"), "{detail}");
            }
            other => panic!("{other:?}"),
        }
        assert_eq!(
            rule_main_theorem(&OrderFactorization::of(441)),
            RuleOutcome::Pass
        );
        assert_eq!(
            rule_main_theorem(&OrderFactorization::of(3969)),
            RuleOutcome::Pass
        );
        for v in [25, 45, 4 * 225] {
            assert!(matches!(
                rule_main_theorem(&OrderFactorization::of(v)),
                RuleOutcome::NotApplicable(_)
            ));
        }
    }

    #[test]
    fn restriction_examples() {
        let big = params(225, 112, 55, 56);
        let r = subgroup_restriction(&big, 9).unwrap();
        assert_eq!((r.pi, r.theta, r.beta1, r.delta1), (3, 0, -1, 9));
        assert_eq!(r.k1_plus.integral, Some(4));
        assert_eq!(r.k1_minus.integral, Some(4));
        assert_eq!(r.admissible_params(), vec![params(9, 4, 1, 2)]);

        let r = subgroup_restriction(&big, 25).unwrap();
        assert_eq!((r.pi, r.theta, r.beta1, r.delta1), (5, 0, -1, 25));
        assert_eq!(r.admissible_params(), vec![params(25, 12, 5, 6)]);

        let r = subgroup_restriction(&big, 1).unwrap();
        assert_eq!(r.k1_minus.admissible(), Some(0));
        assert!(!r.locally_infeasible());

        assert_eq!(
            subgroup_restriction(&params(13, 6, 2, 3), 13),
            Err(FeasibilityError::DeltaNotSquare(13))
        );
        assert!(matches!(
            subgroup_restriction(&big, 3),
            Err(FeasibilityError::NotCoprime { .. })
        ));
        assert!(matches!(
            subgroup_restriction(&big, 7),
            Err(FeasibilityError::NotDivisor { .. })
        ));
        // (16, 6, 2, 2): N of order 1 has index 16, even
        assert_eq!(
            subgroup_restriction(&params(16, 6, 2, 2), 1),
            Err(FeasibilityError::EvenIndex(16))
        );
    }

    #[test]
    fn theta_bracket_holds() {
        for beta in -40i64..40 {
            for pi in 1i64..9 {
                let theta = (beta + pi).div_euclid(2 * pi);
                assert!((2 * theta - 1) * pi <= beta && beta < (2 * theta + 1) * pi);
            }
        }
    }

    #[test]
    fn restriction_of_paley_is_paley() {
        // Square orders whose Hall subgroups have coprime odd index.
        for v in [225u64, 441, 1225, 3969, 2025, 11025] {
            let p = paley_params(v).unwrap();
            let f = OrderFactorization::of(v);
            let pairs = f.pairs();
            for mask in 1u32..(1 << pairs.len()) {
                let n: u64 = pairs
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| mask >> i & 1 == 1)
                    .map(|(_, &(q, e))| q.pow(e))
                    .product();
                let r = subgroup_restriction(&p, n).unwrap();
                assert_eq!(r.beta1, -1);
                if n != 243 {
                    assert_eq!(
                        r.admissible_params(),
                        vec![paley_params(n).unwrap()],
                        "v={v} n={n}"
                    );
                }
            }
        }
    }

    #[test]
    fn existence_examples() {
        let v = paley_existence(&OrderFactorization::of(13));
        assert_eq!(
            (v.kind, v.rule),
            (VerdictKind::KnownExists, Some(RuleId::PaleyField))
        );
        let v = paley_existence(&OrderFactorization::of(81 * 625));
        assert_eq!(
            (v.kind, v.rule),
            (VerdictKind::KnownExists, Some(RuleId::Polhill))
        );
        let v = paley_existence(&OrderFactorization::of(225));
        assert_eq!(v.kind, VerdictKind::Open);
    }

    #[test]
    fn sieve_examples() {
        let v = sieve(225).unwrap();
        assert_eq!(
            (v.kind, v.rule),
            (VerdictKind::Infeasible, Some(RuleId::R2))
        );
        assert!(v.to_string().starts_with("Infeasible (R2): "));
        let v = sieve(1225).unwrap();
        assert_eq!(
            (v.kind, v.rule),
            (VerdictKind::Infeasible, Some(RuleId::R2))
        );
        assert_eq!(sieve(441).unwrap().kind, VerdictKind::Open);
        assert_eq!(sieve(3969).unwrap().kind, VerdictKind::Open);
        let v = sieve(45).unwrap();
        assert_eq!(
            (v.kind, v.rule),
            (VerdictKind::Infeasible, Some(RuleId::R1))
        );
        assert_eq!(sieve(7).unwrap().kind, VerdictKind::NotApplicable);
        assert_eq!(sieve(1).unwrap().kind, VerdictKind::NotApplicable);
        assert_eq!(sieve(81 * 625).unwrap().rule, Some(RuleId::Polhill));
    }

    #[test]
    fn sieve_never_contradicts_constructions() {
        for v in (5..20_000u64).step_by(4) {
            let verdict = sieve(v).unwrap();
            if crate::arith::prime_power(v).is_some() {
                assert_eq!(verdict.kind, VerdictKind::KnownExists, "v = {v}");
            }
        }
    }

    #[test]
    fn verdict_json_shape() {
        let j: serde_json::Value = serde_json::from_str(&sieve(225).unwrap().to_json()).unwrap();
        assert_eq!(j["schema"], "pds-kit/1");
        assert_eq!(j["v"], 225);
        assert_eq!(j["kind"], "Infeasible");
        assert_eq!(j["rule"], "R2");
        let j: serde_json::Value = serde_json::from_str(&sieve(441).unwrap().to_json()).unwrap();
        assert_eq!(j["rule"], serde_json::Value::Null);
    }

    #[test]
    fn atlas_is_ordered() {
        let a = atlas(500).unwrap();
        assert_eq!(a.len(), 124);
        assert!(a.windows(2).all(|w| w[0].v + 4 == w[1].v));
        assert_eq!(a[0].v, 5);
    }
}
