//! Sufficient conditions for list colorability and the probability bounds
//! behind them.
//!
//! Every quantity is evaluated in natural-log space. Expressions of the
//! form `(1 - (1 - x)^n)^q` are computed as `q * log1mexp(n * ln1p(-x))`,
//! so inner terms far below `f64::EPSILON` keep their contribution and
//! outer powers far below `f64::MIN_POSITIVE` stay representable. A margin
//! of exactly zero counts as satisfied.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::correspondence::CorrespondenceCover;
use crate::hypergraph::PartiteHypergraph;
use crate::lists::{ColorDegreeProfile, ListAssignment};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ConditionError {
    #[error("k must be at least 2, got {0}")]
    UniformityTooSmall(usize),
    #[error("distinguished part {j} out of range for k = {k}")]
    BadPart { j: usize, k: usize },
    #[error("{name} has {got} entries, expected {expected}")]
    Length { name: &'static str, expected: usize, got: usize },
    #[error("{name}[{index}] = {value} is out of range ({why})")]
    OutOfRange { name: &'static str, index: usize, value: f64, why: &'static str },
    #[error("{0}")]
    Domain(String),
}

/// `(k, j, q_1..q_k, D_1..D_k, Δ_1..Δ_k, ε)`. Parts are 0-indexed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParamVector {
    pub k: usize,
    pub j: usize,
    pub q: Vec<f64>,
    #[serde(rename = "D")]
    pub d: Vec<f64>,
    #[serde(rename = "Delta")]
    pub delta: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eps: Option<f64>,
}

impl ParamVector {
    pub fn new(j: usize, q: Vec<f64>, d: Vec<f64>, delta: Vec<f64>) -> Self {
        Self { k: q.len(), j, q, d, delta, eps: None }
    }

    /// Same `q`, `D` and `Δ` in every part.
    pub fn uniform(k: usize, j: usize, q: f64, d: f64, delta: f64) -> Self {
        Self::new(j, vec![q; k], vec![d; k], vec![delta; k])
    }

    pub fn check_shape(&self) -> Result<(), ConditionError> {
        if self.k < 2 {
            return Err(ConditionError::UniformityTooSmall(self.k));
        }
        if self.j >= self.k {
            return Err(ConditionError::BadPart { j: self.j, k: self.k });
        }
        for (name, v) in [("q", &self.q), ("D", &self.d), ("Delta", &self.delta)] {
            if v.len() != self.k {
                return Err(ConditionError::Length { name, expected: self.k, got: v.len() });
            }
        }
        Ok(())
    }

    fn others(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.k).filter(move |&i| i != self.j)
    }

    /// `ln Π_{i≠j} 1/q_i`.
    fn ln_blocking_probability(&self) -> f64 {
        -self.others().map(|i| self.q[i].ln()).sum::<f64>()
    }
}

fn require(
    name: &'static str,
    values: &[f64],
    ok: impl Fn(f64) -> bool,
    why: &'static str,
) -> Result<(), ConditionError> {
    match values.iter().position(|&x| !x.is_finite() || !ok(x)) {
        Some(index) => Err(ConditionError::OutOfRange { name, index, value: values[index], why }),
        None => Ok(()),
    }
}

/// `ln(1 - e^t)` for `t <= 0`.
pub fn log1mexp(t: f64) -> f64 {
    debug_assert!(t <= 0.0 || t.is_nan());
    if t > -std::f64::consts::LN_2 {
        (-t.exp_m1()).ln()
    } else {
        (-t.exp()).ln_1p()
    }
}

/// `ln((1 - x)^n)` for `x = e^{ln_x} ∈ [0, 1]`, with `0^0 = 1`.
fn ln_survive(ln_x: f64, n: f64) -> f64 {
    if n == 0.0 {
        0.0
    } else {
        n * (-ln_x.exp()).ln_1p()
    }
}

/// `ln((1 - (1 - x)^n)^q)`.
fn ln_outer(ln_x: f64, n: f64, q: f64) -> f64 {
    q * log1mexp(ln_survive(ln_x, n))
}

/// `ln(Σ_i e^{a_i})`.
fn log_sum_exp(terms: impl IntoIterator<Item = f64>) -> f64 {
    let terms: Vec<f64> = terms.into_iter().collect();
    let max = terms.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if max == f64::NEG_INFINITY {
        return max;
    }
    max + terms.iter().map(|&t| (t - max).exp()).sum::<f64>().ln()
}

/// `ln(a * (s - 1) + 1)` for `a, s >= 0`; `-inf` when the argument is not
/// positive.
fn ln_dependency_count(a: f64, s: f64) -> f64 {
    if a == 0.0 {
        return 0.0;
    }
    let inner = (s - 1.0) + 1.0 / a;
    if inner > 0.0 {
        a.ln() + inner.ln()
    } else {
        f64::NEG_INFINITY
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Condition {
    C1,
    C2,
    C3,
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Condition::C1 => "C1",
            Condition::C2 => "C2",
            Condition::C3 => "C3",
        };
        f.write_str(s)
    }
}

/// An inequality normalized to `lhs <= rhs`, both sides as natural logs.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConditionVerdict {
    pub satisfied: bool,
    pub lhs_log: f64,
    pub rhs_log: f64,
    pub margin: f64,
}

impl ConditionVerdict {
    pub fn from_logs(lhs_log: f64, rhs_log: f64) -> Self {
        let margin = if lhs_log == rhs_log { 0.0 } else { rhs_log - lhs_log };
        Self { satisfied: margin >= 0.0, lhs_log, rhs_log, margin }
    }
}

/// `Π_{i≠j} q_i >= D_j (e q_j Σ_{i≠j} q_i D_i / D_j)^{1/q_j}`, normalized so
/// the right-hand side is the larger one when satisfied.
pub fn eval_c1(pv: &ParamVector) -> Result<ConditionVerdict, ConditionError> {
    pv.check_shape()?;
    require("q", &pv.q, |x| x > 0.0, "must be positive")?;
    require("D", &pv.d, |x| x > 0.0, "must be positive")?;
    let j = pv.j;
    let lhs = pv.others().map(|i| pv.q[i].ln()).sum::<f64>();
    let ln_sum = log_sum_exp(pv.others().map(|i| pv.q[i].ln() + pv.d[i].ln()));
    let ln_dj = pv.d[j].ln();
    let rhs = ln_dj + (1.0 + pv.q[j].ln() + ln_sum - ln_dj) / pv.q[j];
    // C1 reads "product >= bound"; flip it into lhs <= rhs form.
    Ok(ConditionVerdict::from_logs(rhs, lhs))
}

fn check_c2_c3_inputs(pv: &ParamVector) -> Result<(), ConditionError> {
    pv.check_shape()?;
    require("q", &pv.q, |x| x >= 1.0, "list sizes must be at least 1")
}

/// `e (q_j D_j (Σ_{i≠j} q_i D_i - 1) + 1) (1 - (1 - Π_{i≠j} q_i^{-1})^{D_j})^{q_j} <= 1`.
pub fn eval_c2(pv: &ParamVector) -> Result<ConditionVerdict, ConditionError> {
    check_c2_c3_inputs(pv)?;
    require("D", &pv.d, |x| x >= 0.0, "must be non-negative")?;
    let j = pv.j;
    let sum: f64 = pv.others().map(|i| pv.q[i] * pv.d[i]).sum();
    let count = ln_dependency_count(pv.q[j] * pv.d[j], sum);
    let prob = ln_outer(pv.ln_blocking_probability(), pv.d[j], pv.q[j]);
    Ok(ConditionVerdict::from_logs(1.0 + count + prob, 0.0))
}

/// `e (Δ_j (Σ_{i≠j} Δ_i - 1) + 1) (1 - (1 - Π_{i≠j} q_i^{-1})^{Δ_j min_i q_i / q_j})^{q_j} <= 1`.
pub fn eval_c3(pv: &ParamVector) -> Result<ConditionVerdict, ConditionError> {
    check_c2_c3_inputs(pv)?;
    require("Delta", &pv.delta, |x| x >= 0.0, "must be non-negative")?;
    let j = pv.j;
    let sum: f64 = pv.others().map(|i| pv.delta[i]).sum();
    let count = ln_dependency_count(pv.delta[j], sum);
    let min_q = pv.q.iter().copied().fold(f64::INFINITY, f64::min);
    let exponent = pv.delta[j] * min_q / pv.q[j];
    let prob = ln_outer(pv.ln_blocking_probability(), exponent, pv.q[j]);
    Ok(ConditionVerdict::from_logs(1.0 + count + prob, 0.0))
}

pub fn eval(condition: Condition, pv: &ParamVector) -> Result<ConditionVerdict, ConditionError> {
    match condition {
        Condition::C1 => eval_c1(pv),
        Condition::C2 => eval_c2(pv),
        Condition::C3 => eval_c3(pv),
    }
}

fn check_main_theorem_inputs(k: usize, eps: f64, delta: f64) -> Result<(), ConditionError> {
    if k < 2 {
        return Err(ConditionError::UniformityTooSmall(k));
    }
    if !(eps > 0.0 && eps.is_finite()) {
        return Err(ConditionError::Domain(format!("eps must be positive, got {eps}")));
    }
    if !(delta >= 3.0 && delta.is_finite()) {
        return Err(ConditionError::Domain(format!("Delta must be at least 3, got {delta}")));
    }
    Ok(())
}

/// `ln(((k - 1 + ε) Δ / ln Δ)^{1/(k-1)})`.
pub fn main_theorem_log_bound(k: usize, eps: f64, delta: f64) -> Result<f64, ConditionError> {
    check_main_theorem_inputs(k, eps, delta)?;
    let km1 = (k - 1) as f64;
    Ok(((km1 + eps).ln() + delta.ln() - delta.ln().ln()) / km1)
}

/// Smallest integer list size the degree bound guarantees to suffice.
pub fn main_theorem_list_size(k: usize, eps: f64, delta: f64) -> Result<u64, ConditionError> {
    Ok(main_theorem_log_bound(k, eps, delta)?.exp().ceil() as u64)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LllParams {
    pub p: f64,
    pub d_lll: u64,
}

impl LllParams {
    pub fn verdict(&self) -> Result<ConditionVerdict, ConditionError> {
        if !(0.0..1.0).contains(&self.p) {
            return Err(ConditionError::Domain(format!("p must lie in [0, 1), got {}", self.p)));
        }
        let lhs = 1.0 + self.p.ln() + (self.d_lll as f64).ln_1p();
        Ok(ConditionVerdict::from_logs(lhs, 0.0))
    }
}

/// `e p (d + 1) <= 1`.
pub fn lll_premise(p: f64, d: u64) -> Result<bool, ConditionError> {
    Ok(LllParams { p, d_lll: d }.verdict()?.satisfied)
}

fn check_bound_inputs(pv: &ParamVector) -> Result<(), ConditionError> {
    pv.check_shape()?;
    require("q", &pv.q, |x| x >= 1.0, "list sizes must be at least 1")
}

/// Natural log of the bound on `P[L_φ(v) = ∅]` for `v ∈ V_j` whose
/// color-degrees sum to `s`.
pub fn lemma_41_log_bound(pv: &ParamVector, s: f64) -> Result<f64, ConditionError> {
    check_bound_inputs(pv)?;
    if s.is_nan() || s < 0.0 {
        return Err(ConditionError::Domain(format!("color-degree sum must be >= 0, got {s}")));
    }
    let qj = pv.q[pv.j];
    Ok(ln_outer(pv.ln_blocking_probability(), s / qj, qj))
}

pub fn lemma_41_bound(pv: &ParamVector, s: f64) -> Result<f64, ConditionError> {
    Ok(lemma_41_log_bound(pv, s)?.exp())
}

/// Bound on the probability that one color of `v ∈ V_j` with color-degree
/// `d` is blocked.
pub fn claim_31_bound(pv: &ParamVector, d: f64) -> Result<f64, ConditionError> {
    Ok(claim_31_log_bound(pv, d)?.exp())
}

pub fn claim_31_log_bound(pv: &ParamVector, d: f64) -> Result<f64, ConditionError> {
    check_bound_inputs(pv)?;
    if d.is_nan() || d < 0.0 {
        return Err(ConditionError::Domain(format!("color-degree must be >= 0, got {d}")));
    }
    Ok(ln_outer(pv.ln_blocking_probability(), d, 1.0))
}

/// Caps measured from a list instance: `q_i` is the smallest list in part
/// `i`, `D_i` the largest color-degree and `Δ_i` the largest degree. Caps
/// are floored at 1 (they are upper bounds) and empty parts get `q_i = 1`.
pub fn measure_list_instance(h: &PartiteHypergraph, lists: &ListAssignment, j: usize) -> ParamVector {
    let profile = ColorDegreeProfile::compute(h, lists);
    let q = lists.min_sizes().iter().map(|m| m.unwrap_or(1) as f64).collect();
    let d = profile.part_max().iter().map(|&x| x.max(1) as f64).collect();
    let delta = h.max_degrees().iter().map(|&x| x.max(1) as f64).collect();
    ParamVector::new(j, q, d, delta)
}

/// Like [`measure_list_instance`] with `D_i` the largest cover degree of a
/// color owned by part `i`.
pub fn measure_cover_instance(
    h: &PartiteHypergraph,
    cover: &CorrespondenceCover,
    j: usize,
) -> ParamVector {
    let q = cover
        .list_sizes()
        .parts()
        .iter()
        .map(|p| p.iter().copied().min().unwrap_or(1) as f64)
        .collect();
    let d = cover.part_max_degrees().iter().map(|&x| x.max(1) as f64).collect();
    let delta = h.max_degrees().iter().map(|&x| x.max(1) as f64).collect();
    ParamVector::new(j, q, d, delta)
}

/// The evidence behind a corollary: the parameter vector its proof builds,
/// the condition the proof reduces to, and that condition's verdict.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Witness {
    pub condition: Condition,
    pub params: ParamVector,
    pub verdict: ConditionVerdict,
    /// Which branch of a case split was taken, when the proof splits.
    pub case: Option<u8>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum CorollaryOutcome {
    PremisesFail { reason: String },
    Checked(Witness),
}

impl CorollaryOutcome {
    pub fn satisfied(&self) -> bool {
        matches!(self, CorollaryOutcome::Checked(w) if w.verdict.satisfied)
    }

    pub fn witness(&self) -> Option<&Witness> {
        match self {
            CorollaryOutcome::Checked(w) => Some(w),
            CorollaryOutcome::PremisesFail { .. } => None,
        }
    }
}

fn check_eps(eps: f64) -> Result<(), ConditionError> {
    if eps > 0.0 && eps.is_finite() {
        Ok(())
    } else {
        Err(ConditionError::Domain(format!("eps must be positive, got {eps}")))
    }
}

/// Lists of size `D_i^{ε/(k-1)}` with `Π_{i<k} D_i >= D_k^{2(k-1)/ε}` and
/// `D_k >= (8(k-1)/ε)^{1/ε}`: checks the premises, then C1 with `j` the
/// last part.
pub fn check_corollary_15(d: &[f64], eps: f64) -> Result<CorollaryOutcome, ConditionError> {
    check_eps(eps)?;
    let k = d.len();
    if k < 2 {
        return Err(ConditionError::UniformityTooSmall(k));
    }
    require("D", d, |x| x >= 1.0, "must be at least 1")?;
    let km1 = (k - 1) as f64;
    let j = k - 1;
    let ln_prod: f64 = d[..j].iter().map(|x| x.ln()).sum();
    let ln_dk = d[j].ln();
    if ln_prod < 2.0 * km1 / eps * ln_dk {
        return Ok(CorollaryOutcome::PremisesFail {
            reason: format!(
                "product of D_1..D_(k-1) is below D_k^(2(k-1)/eps) (ln {ln_prod:.6} < ln {:.6})",
                2.0 * km1 / eps * ln_dk
            ),
        });
    }
    let floor = (8.0 * km1 / eps).ln() / eps;
    if ln_dk < floor {
        return Ok(CorollaryOutcome::PremisesFail {
            reason: format!("D_k = {} is below (8(k-1)/eps)^(1/eps) = {}", d[j], floor.exp()),
        });
    }
    let q = d.iter().map(|&x| x.powf(eps / km1)).collect();
    let mut params = ParamVector::new(j, q, d.to_vec(), d.to_vec());
    params.eps = Some(eps);
    let verdict = eval_c1(&params)?;
    Ok(CorollaryOutcome::Checked(Witness { condition: Condition::C1, params, verdict, case: None }))
}

/// `b = (2^{k-1} / (2^{k-1} - 1))^k`.
pub fn corollary_16_base(k: usize) -> f64 {
    let half = 2f64.powi(k as i32 - 1);
    (half / (half - 1.0)).powi(k as i32)
}

/// [`corollary_16_base`] as an exact rational.
pub fn corollary_16_base_exact(k: usize) -> BigRational {
    let half = BigInt::from(1) << (k - 1);
    let num = num_traits::pow(half.clone(), k);
    let den = num_traits::pow(half - 1, k);
    BigRational::new(num, den)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Corollary16Variant {
    /// Lists of size 2 outside the last part.
    Pairs,
    /// Lists of size `ln Δ` outside the last part.
    Logarithmic,
}

/// Builds the list sizes of either variant with every `Δ_i = Δ` and checks
/// C3 with `j` the last part.
pub fn check_corollary_16(
    k: usize,
    eps: f64,
    delta: f64,
    variant: Corollary16Variant,
) -> Result<Witness, ConditionError> {
    check_eps(eps)?;
    if k < 2 {
        return Err(ConditionError::UniformityTooSmall(k));
    }
    if !(delta > 1.0 && delta.is_finite()) {
        return Err(ConditionError::Domain(format!("Delta must exceed 1, got {delta}")));
    }
    let ln_delta = delta.ln();
    let (small, last) = match variant {
        Corollary16Variant::Pairs => {
            let log_b = ln_delta / corollary_16_base(k).ln();
            (2.0, (2.0 + eps) / k as f64 * delta / log_b)
        }
        Corollary16Variant::Logarithmic => {
            (ln_delta, (1.0 + eps) * delta / ln_delta.powi(k as i32 - 1))
        }
    };
    if small < 1.0 || last < 1.0 {
        return Err(ConditionError::Domain(format!(
            "Delta = {delta} too small: derived list sizes {small} and {last} must be at least 1"
        )));
    }
    let mut q = vec![small; k];
    q[k - 1] = last;
    let mut params = ParamVector::new(k - 1, q, vec![delta; k], vec![delta; k]);
    params.eps = Some(eps);
    let verdict = eval_c3(&params)?;
    Ok(Witness { condition: Condition::C3, params, verdict, case: None })
}

/// Lists of size `((k - 1 + ε) D_i / ln D_i)^{1/(k-1)}`. With `j` the part of
/// smallest `D`, takes case 1 (C1) when `Π_{i≠j} D_i >= D_j^{2(k-1)}` and
/// case 2 (C2) otherwise.
pub fn check_corollary_17(d: &[f64], eps: f64) -> Result<Witness, ConditionError> {
    check_eps(eps)?;
    let k = d.len();
    if k < 2 {
        return Err(ConditionError::UniformityTooSmall(k));
    }
    require("D", d, |x| x > 1.0, "must exceed 1")?;
    let km1 = (k - 1) as f64;
    let j = d
        .iter()
        .enumerate()
        .fold(0, |best, (i, &x)| if x < d[best] { i } else { best });
    let q: Vec<f64> = d
        .iter()
        .map(|&x| (((km1 + eps).ln() + x.ln() - x.ln().ln()) / km1).exp())
        .collect();
    let mut params = ParamVector::new(j, q, d.to_vec(), d.to_vec());
    params.eps = Some(eps);
    let ln_prod: f64 = (0..k).filter(|&i| i != j).map(|i| d[i].ln()).sum();
    let (case, condition) = if ln_prod >= 2.0 * km1 * d[j].ln() {
        (1, Condition::C1)
    } else {
        (2, Condition::C2)
    };
    let verdict = eval(condition, &params)?;
    Ok(Witness { condition, params, verdict, case: Some(case) })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pv2(q: [f64; 2], d: [f64; 2]) -> ParamVector {
        ParamVector::new(1, q.to_vec(), d.to_vec(), d.to_vec())
    }

    #[test]
    fn log1mexp_branches_agree_near_cutoff() {
        for t in [-std::f64::consts::LN_2 + 1e-4, -std::f64::consts::LN_2 - 1e-4, -40.0, -800.0] {
            let direct = (1.0 - f64::exp(t)).ln();
            let got = log1mexp(t);
            if t > -30.0 {
                assert!((got - direct).abs() <= 1e-9 * direct.abs().max(1e-300), "{t}");
            }
            assert!(got <= 0.0);
        }
        // 1 - e^t ~ -t for tiny t, where the naive form loses every digit.
        assert!((log1mexp(-1e-12) - (1e-12f64).ln()).abs() < 1e-9);
        assert_eq!(log1mexp(0.0), f64::NEG_INFINITY);
        assert_eq!(log1mexp(f64::NEG_INFINITY), 0.0);
    }

    #[test]
    fn c1_examples() {
        let v = eval_c1(&pv2([100.0, 100.0], [50.0, 50.0])).unwrap();
        assert!(v.satisfied);
        // 50 (e 100 (100 * 50 / 50))^{1/100} = 55.374899260928560917...
        assert!((v.lhs_log - 55.37489926092856f64.ln()).abs() < 1e-12);
        let v = eval_c1(&pv2([2.0, 2.0], [100.0, 100.0])).unwrap();
        assert!(!v.satisfied);
        let big = eval_c1(&pv2([1e12, 1e12], [50.0, 50.0])).unwrap();
        let bigger = eval_c1(&pv2([1e15, 1e15], [50.0, 50.0])).unwrap();
        assert!(big.margin > 0.0 && bigger.margin > big.margin);
        assert!(eval_c1(&pv2([0.0, 2.0], [1.0, 1.0])).is_err());
        assert!(eval_c1(&pv2([2.0, 2.0], [-1.0, 1.0])).is_err());
    }

    #[test]
    fn c2_examples() {
        let v = eval_c2(&pv2([40.0, 40.0], [40.0, 40.0])).unwrap();
        assert!(v.satisfied);
        // e (1600 * 1599 + 1) (1 - (1 - 1/40)^40)^40 = 0.100346056752894...
        assert!((v.lhs_log.exp() - 0.10034605675289422).abs() < 1e-12);
        let zero = eval_c2(&pv2([3.0, 3.0], [5.0, 0.0])).unwrap();
        assert!(zero.satisfied && zero.lhs_log == f64::NEG_INFINITY);
        assert!(!eval_c2(&pv2([3.0, 3.0], [1000.0, 1000.0])).unwrap().satisfied);
        assert!(eval_c2(&pv2([0.5, 3.0], [1.0, 1.0])).is_err());
    }

    #[test]
    fn c3_examples() {
        let iso = ParamVector::new(1, vec![3.0, 3.0], vec![1.0, 1.0], vec![5.0, 0.0]);
        assert!(eval_c3(&iso).unwrap().satisfied);
        // q_j = 1 cannot beat e Δ^2: e * 9901 * 1e-4 ≈ 2.69.
        let v = eval_c3(&ParamVector::new(1, vec![1e6, 1.0], vec![100.0; 2], vec![100.0; 2])).unwrap();
        assert!(!v.satisfied);
        assert!((v.lhs_log.exp() - 2.6913).abs() < 1e-3);
        // All other lists singleton: inner base is 0 and the bound collapses to e * count.
        let v = eval_c3(&ParamVector::new(1, vec![1.0, 7.0], vec![1.0; 2], vec![2.0, 2.0])).unwrap();
        assert!((v.lhs_log - (1.0 + 3f64.ln())).abs() < 1e-12);
    }

    #[test]
    fn main_theorem_examples() {
        assert_eq!(main_theorem_list_size(2, 1.0, 4f64.exp()), Ok(28));
        // (3 * 10^6 / ln 10^6)^{1/2} = 465.99..., whose ceiling is 466.
        assert_eq!(main_theorem_list_size(3, 1.0, 1e6), Ok(466));
        assert!(main_theorem_list_size(2, 1.0, 2.9).is_err());
        assert!(main_theorem_list_size(2, 0.0, 10.0).is_err());
        let mut prev = 0;
        for delta in [3.0, 10.0, 100.0, 1e4, 1e8] {
            let q = main_theorem_list_size(3, 0.5, delta).unwrap();
            assert!(q >= prev);
            prev = q;
        }
    }

    #[test]
    fn lll_examples() {
        assert_eq!(lll_premise(0.0, 1_000_000), Ok(true));
        assert_eq!(lll_premise(1.0 / std::f64::consts::E, 0), Ok(true));
        assert_eq!(lll_premise(0.1, 10), Ok(false));
        assert!(lll_premise(1.0, 0).is_err());
        assert!(lll_premise(-0.1, 0).is_err());
    }

    #[test]
    fn lemma_and_claim_examples() {
        let pv = pv2([2.0, 1.0], [1.0, 1.0]);
        assert_eq!(lemma_41_bound(&pv, 0.0), Ok(0.0));
        assert!((lemma_41_bound(&pv, 1.0).unwrap() - 0.5).abs() < 1e-15);
        let pv = pv2([2.0, 3.0], [1.0, 1.0]);
        assert_eq!(claim_31_bound(&pv, 0.0), Ok(0.0));
        assert!((claim_31_bound(&pv, 1.0).unwrap() - 0.5).abs() < 1e-15);
        assert!((claim_31_bound(&pv, 2.0).unwrap() - 0.75).abs() < 1e-15);
        let mut prev = 0.0;
        for s in 0..50 {
            let b = lemma_41_bound(&pv, s as f64).unwrap();
            assert!(b >= prev);
            prev = b;
        }
    }

    #[test]
    fn lemma_specializes_to_c2_factor() {
        for (q, d) in [(3.0, 5.0), (40.0, 40.0), (7.0, 100.0)] {
            let pv = ParamVector::uniform(3, 2, q, d, d);
            let lemma = lemma_41_log_bound(&pv, q * d).unwrap();
            let c2 = eval_c2(&pv).unwrap();
            let count = ln_dependency_count(q * d, 2.0 * q * d);
            assert!((c2.lhs_log - 1.0 - count - lemma).abs() < 1e-9 * lemma.abs().max(1.0));
        }
    }

    #[test]
    fn jensen_step_dominates_per_color_product() {
        for qj in 1..=4usize {
            let pv = ParamVector::new(1, vec![2.0, qj as f64], vec![1.0; 2], vec![1.0; 2]);
            let mut d = vec![0u32; qj];
            loop {
                let product: f64 = d
                    .iter()
                    .map(|&x| claim_31_bound(&pv, x as f64).unwrap())
                    .product();
                let sum: u32 = d.iter().sum();
                let bound = lemma_41_bound(&pv, sum as f64).unwrap();
                assert!(product <= bound + 1e-12, "{d:?}: {product} > {bound}");
                // odometer over {0..4}^qj
                let mut i = 0;
                while i < qj && d[i] == 4 {
                    d[i] = 0;
                    i += 1;
                }
                if i == qj {
                    break;
                }
                d[i] += 1;
            }
        }
    }

    #[test]
    fn corollary_15_examples() {
        let out = check_corollary_15(&[1e6, 10.0], 1.0).unwrap();
        let w = out.witness().unwrap();
        assert_eq!(w.condition, Condition::C1);
        assert!(w.verdict.satisfied);
        assert!(matches!(
            check_corollary_15(&[1e6, 1e4], 1.0).unwrap(),
            CorollaryOutcome::PremisesFail { .. }
        ));
        // D_k = 10 < (8 * 2 / 0.5)^2 = 1024, so the k = 3, ε = 1/2 regime
        // needs a larger last part.
        assert!(matches!(
            check_corollary_15(&[1e8, 1e8, 10.0], 0.5).unwrap(),
            CorollaryOutcome::PremisesFail { .. }
        ));
        let out = check_corollary_15(&[1e40, 1e40, 1e4], 0.5).unwrap();
        assert!(out.satisfied(), "{out:?}");
    }

    #[test]
    fn corollary_16_base_values() {
        assert_eq!(corollary_16_base(2), 4.0);
        assert!((corollary_16_base(3) - 64.0 / 27.0).abs() < 1e-15);
        assert_eq!(corollary_16_base_exact(2), BigRational::from_integer(4.into()));
        assert_eq!(corollary_16_base_exact(3), BigRational::new(64.into(), 27.into()));
    }

    #[test]
    fn corollary_16_examples() {
        let w = check_corollary_16(2, 1.0, 1e7, Corollary16Variant::Logarithmic).unwrap();
        assert_eq!(w.condition, Condition::C3);
        assert!(w.verdict.satisfied);
        // The pairs variant needs Δ well beyond 10^8 at ε = 1/2.
        let w = check_corollary_16(2, 0.5, 1e8, Corollary16Variant::Pairs).unwrap();
        assert!(!w.verdict.satisfied);
        let w = check_corollary_16(2, 0.5, 1e20, Corollary16Variant::Pairs).unwrap();
        assert!(w.verdict.satisfied);
        assert!(check_corollary_16(2, 1.0, 1.0, Corollary16Variant::Pairs).is_err());
    }

    #[test]
    fn corollary_17_examples() {
        let w = check_corollary_17(&[1e6, 1e6], 1.0).unwrap();
        assert_eq!((w.case, w.condition), (Some(2), Condition::C2));
        assert!(w.verdict.satisfied);
        let w = check_corollary_17(&[1e12, 10.0], 1.0).unwrap();
        assert_eq!((w.case, w.condition), (Some(1), Condition::C1));
        assert!(w.verdict.satisfied);
        assert_eq!(w.params.j, 1);
    }

    #[test]
    fn corollary_17_permutation_invariant() {
        let d = [1e9, 1e7, 1e8];
        let base = check_corollary_17(&d, 0.5).unwrap();
        let perm = [2usize, 0, 1];
        let permuted: Vec<f64> = perm.iter().map(|&i| d[i]).collect();
        let w = check_corollary_17(&permuted, 0.5).unwrap();
        assert_eq!(w.case, base.case);
        assert_eq!(w.verdict.satisfied, base.verdict.satisfied);
        assert!((w.verdict.lhs_log - base.verdict.lhs_log).abs() < 1e-9 * base.verdict.lhs_log.abs().max(1.0));
        for (pos, &src) in perm.iter().enumerate() {
            assert_eq!(w.params.q[pos], base.params.q[src]);
        }
        assert_eq!(perm[w.params.j], base.params.j);
    }

    #[test]
    fn shape_errors() {
        let mut pv = ParamVector::uniform(3, 5, 2.0, 2.0, 2.0);
        assert!(matches!(eval_c2(&pv), Err(ConditionError::BadPart { .. })));
        pv.j = 0;
        pv.q.pop();
        assert!(matches!(eval_c2(&pv), Err(ConditionError::Length { name: "q", .. })));
    }
}
