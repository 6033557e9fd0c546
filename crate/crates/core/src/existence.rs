//! Existence of the weight `u₀`: the limsup ratio criterion, the pointwise
//! inequality, the Kaniadakis certificate, the growth envelope, the
//! constructive `u₀` for the counting measure, and the adversarial harness
//! where κ(α) cannot be found.
//!
//! Everything here is evidence on finite grids. Verdicts say what was
//! sampled; `Inconclusive` is returned rather than guessed.

use crate::deformed_exp::DeformedExp;
use crate::error::{Error, Result};
use crate::kappa_solver::{
    solve_functional, CoordinatePair, KappaSolveResult, NormalizationFunctional, SolverConfig,
    TailRemainder, U0,
};
use crate::measures::{MeasureModel, Piece, TruncatedSum};
use crate::par::{self, Execution};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::f64::consts::LN_2;
use std::sync::Arc;

pub const DEFAULT_U_MAX: f64 = 200.0;
pub const DEFAULT_THRESHOLD: f64 = 1e12;
/// Relative change of the running sup over the last decade that counts as
/// stable.
pub const STABILITY_TOLERANCE: f64 = 1e-6;

const LINEAR_POINTS: usize = 2001;
const GEOMETRIC_POINTS: usize = 2001;
const LOG_TOL: f64 = 1e-12;

fn ln_phi(phi: &DeformedExp, u: f64) -> Option<f64> {
    phi.ln_eval(u).ok()
}

fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![a];
    }
    (0..n)
        .map(|i| {
            if i == n - 1 {
                b
            } else {
                a + (b - a) * i as f64 / (n - 1) as f64
            }
        })
        .collect()
}

/// Linear points up to a split, then geometrically spaced points to `hi`.
pub fn probe_grid(lo: f64, hi: f64) -> Vec<f64> {
    let split = (lo.max(0.0) + 10.0).min(hi);
    let mut grid = linspace(lo, split, LINEAR_POINTS);
    if hi > split {
        let span = (hi - split + 1.0).ln();
        grid.extend((1..GEOMETRIC_POINTS).map(|i| {
            if i == GEOMETRIC_POINTS - 1 {
                hi
            } else {
                split - 1.0 + (span * i as f64 / (GEOMETRIC_POINTS - 1) as f64).exp()
            }
        }));
    }
    grid.dedup();
    grid
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Verdict {
    Bounded {
        k: f64,
        #[serde(with = "crate::ext_real")]
        c: f64,
    },
    Unbounded,
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConditionProbeReport {
    pub family: String,
    pub lambda0: f64,
    pub u_max: f64,
    pub threshold: f64,
    pub u_samples: Vec<f64>,
    /// `φ(u) / φ(u - λ₀)`; `+∞` where the denominator vanishes.
    #[serde(with = "crate::ext_real::vec")]
    pub ratio_samples: Vec<f64>,
    #[serde(with = "crate::ext_real")]
    pub sup_estimate: f64,
    /// Sup over `[u_max / 10, u_max]`.
    #[serde(with = "crate::ext_real")]
    pub last_decade_sup: f64,
    pub verdict: Verdict,
    /// `1 / K` for a bounded verdict.
    pub alpha_used: Option<f64>,
    pub epsilon_used: Option<f64>,
}

impl ConditionProbeReport {
    pub fn is_bounded(&self) -> bool {
        matches!(self.verdict, Verdict::Bounded { .. })
    }
}

/// Samples `φ(u)/φ(u - λ₀)` up to `u_max` and classifies its limsup.
pub fn ratio_limsup_probe(
    phi: &DeformedExp,
    lambda0: f64,
    u_max: f64,
    threshold: f64,
    mode: Execution,
) -> Result<ConditionProbeReport> {
    if !(lambda0 > 0.0 && lambda0.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "lambda0 = {lambda0} must be positive"
        )));
    }
    if !u_max.is_finite() || !(threshold > 1.0) {
        return Err(Error::InvalidParameter(
            "u_max must be finite and threshold > 1".into(),
        ));
    }
    let a = phi.support_infimum();
    let (dlo, dhi) = phi.domain();
    let mut lo = if a.is_finite() {
        a + lambda0
    } else {
        -u_max.abs().max(10.0)
    };
    lo = lo.max(dlo + lambda0);
    let hi = u_max.min(dhi);
    if !(hi > lo) {
        return Err(Error::DegenerateDomain(format!(
            "no sample points in [{lo}, {hi}]"
        )));
    }
    let grid = probe_grid(lo, hi);
    let ln_ratio = |u: f64| -> Option<f64> {
        let num = ln_phi(phi, u)?;
        let den = ln_phi(phi, u - lambda0)?;
        match (num == f64::NEG_INFINITY, den == f64::NEG_INFINITY) {
            (true, _) => None,
            (false, true) => Some(f64::INFINITY),
            _ => Some(num - den),
        }
    };
    let lr: Vec<Option<f64>> = par::map(mode, &grid, |&u| ln_ratio(u));
    let (u_samples, lr): (Vec<f64>, Vec<f64>) = grid
        .iter()
        .zip(&lr)
        .filter_map(|(&u, r)| r.map(|r| (u, r)))
        .unzip();
    let start = match lr.iter().rposition(|r| !r.is_finite()) {
        Some(i) => i + 1,
        None => 0,
    };
    if start >= lr.len() {
        return Err(Error::DegenerateDomain(
            "phi(u - lambda0) vanishes on the whole grid".into(),
        ));
    }
    let whole_line = start == 0 && a == f64::NEG_INFINITY && dlo == f64::NEG_INFINITY;
    let c = if whole_line {
        f64::NEG_INFINITY
    } else {
        u_samples[start]
    };

    let finite = &lr[start..];
    let us = &u_samples[start..];
    let (imax, mut sup_ln) =
        finite
            .iter()
            .copied()
            .enumerate()
            .fold(
                (0, f64::NEG_INFINITY),
                |(bi, b), (i, x)| if x > b { (i, x) } else { (bi, b) },
            );
    if imax > 0 && imax + 1 < finite.len() {
        let f = |u: f64| ln_ratio(u).unwrap_or(f64::NEG_INFINITY);
        sup_ln = sup_ln.max(golden_max(f, us[imax - 1], us[imax + 1]));
    }
    let decade_from = if hi > 0.0 {
        (hi / 10.0).max(us[0])
    } else {
        us[0]
    };
    let t = us.partition_point(|&u| u < decade_from);
    let before = finite[..t]
        .iter()
        .copied()
        .fold(f64::NEG_INFINITY, f64::max);
    let decade = finite[t..]
        .iter()
        .copied()
        .fold(f64::NEG_INFINITY, f64::max);

    let verdict = if decade > threshold.ln() {
        Verdict::Unbounded
    } else if before.is_finite() && (decade - before).max(0.0).exp_m1() < STABILITY_TOLERANCE {
        Verdict::Bounded { k: sup_ln.exp(), c }
    } else {
        Verdict::Inconclusive
    };
    let alpha_used = match verdict {
        Verdict::Bounded { k, .. } => Some(1.0 / k),
        _ => None,
    };
    let ratio_samples = lr.iter().map(|x| x.exp()).collect();
    Ok(ConditionProbeReport {
        family: phi.id(),
        lambda0,
        u_max,
        threshold,
        u_samples,
        ratio_samples,
        sup_estimate: sup_ln.exp(),
        last_decade_sup: decade.exp(),
        verdict,
        alpha_used,
        epsilon_used: None,
    })
}

fn golden_max(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> f64 {
    let g = 0.5 * (5f64.sqrt() - 1.0);
    let mut c = b - g * (b - a);
    let mut d = a + g * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    for _ in 0..120 {
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = f(d);
        }
    }
    fc.max(fd)
}

/// `(u / (u - λ₀))^(1/|κ|)`, the large-`u` ratio of a κ-exponential.
pub fn kaniadakis_asymptotic_ratio(kappa: f64, lambda0: f64, u: f64) -> f64 {
    (u / (u - lambda0)).powf(1.0 / kappa.abs())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InequalityProbeReport {
    pub family: String,
    pub alpha: f64,
    pub u0: f64,
    pub checked: usize,
    pub violations: usize,
    /// Largest grid point with `αφ(u) > φ(u - u₀)`, or `-∞`.
    #[serde(with = "crate::ext_real")]
    pub c_found: f64,
    /// The inequality holds at the top of the grid.
    pub holds: bool,
}

/// Looks for violations of `αφ(u) ≤ φ(u - u₀)` on `u_grid`.
pub fn pointwise_inequality_probe(
    phi: &DeformedExp,
    alpha: f64,
    u0: f64,
    u_grid: &[f64],
) -> Result<InequalityProbeReport> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::AlphaOutOfRange(alpha));
    }
    if !(u0 > 0.0 && u0.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "u0 = {u0} must be positive"
        )));
    }
    let ln_a = alpha.ln();
    let mut checked = 0;
    let mut violations = 0;
    let mut c_found = f64::NEG_INFINITY;
    let mut top = f64::NEG_INFINITY;
    for &u in u_grid {
        let (Some(num), Some(den)) = (ln_phi(phi, u), ln_phi(phi, u - u0)) else {
            continue;
        };
        checked += 1;
        top = top.max(u);
        if violates(ln_a + num, den) {
            violations += 1;
            c_found = c_found.max(u);
        }
    }
    Ok(InequalityProbeReport {
        family: phi.id(),
        alpha,
        u0,
        checked,
        violations,
        c_found,
        holds: checked > 0 && c_found < top,
    })
}

/// `lhs > rhs` beyond a relative log tolerance.
fn violates(lhs: f64, rhs: f64) -> bool {
    if lhs == f64::NEG_INFINITY {
        return false;
    }
    if rhs == f64::NEG_INFINITY {
        return true;
    }
    lhs > rhs + LOG_TOL * (1.0 + rhs.abs())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KaniadakisCertificate {
    pub kappa: f64,
    pub alpha: f64,
    /// Numerical minimizer of `log_κ(v) - log_κ(αv)`.
    pub v0: f64,
    pub v0_closed_form: f64,
    pub v0_matches: bool,
    pub lambda: f64,
    pub n: u64,
    pub grid_points: usize,
    /// Largest `n ln α + ln exp_κ(u) - ln exp_κ(u - 1)` on the grid.
    pub max_log_excess: f64,
    pub check: bool,
}

/// Minimizes `g(v) = log_κ(v) - log_κ(αv)` and checks
/// `αⁿ exp_κ(u) ≤ exp_κ(u - 1)` on `[-50, 50]` with `n = ⌈1/g(v₀)⌉`.
pub fn verify_kaniadakis_u0(kappa: f64, alpha: f64) -> Result<KaniadakisCertificate> {
    if kappa == 0.0 || !(-1.0..=1.0).contains(&kappa) {
        return Err(Error::InvalidParameter(format!(
            "kappa = {kappa} must lie in [-1, 1] without 0"
        )));
    }
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::AlphaOutOfRange(alpha));
    }
    let phi = DeformedExp::kaniadakis(kappa)?;
    let g = |x: f64| -> Result<f64> {
        let v = x.exp();
        Ok(phi.inverse(v)? - phi.inverse(alpha * v)?)
    };
    let dg = |x: f64| -> Result<f64> {
        let v = x.exp();
        Ok(phi.inverse_derivative(v)? - alpha * phi.inverse_derivative(alpha * v)?)
    };

    let xs = linspace(-12.0, 12.0, 2401);
    let gs = xs.iter().map(|&x| g(x)).collect::<Result<Vec<_>>>()?;
    let imin = gs
        .iter()
        .enumerate()
        .fold(0, |b, (i, &v)| if v < gs[b] { i } else { b });
    let tol = |v: f64| 1e-12 * (1.0 + v.abs());
    let unimodal = (0..imin).all(|j| gs[j] + tol(gs[j]) >= gs[j + 1])
        && (imin..gs.len() - 1).all(|j| gs[j + 1] + tol(gs[j]) >= gs[j]);
    if !unimodal || imin == 0 || imin == gs.len() - 1 {
        return Err(Error::MinimizationFailed(format!(
            "samples of log_k(v) - log_k(alpha v) are not unimodal (kappa = {kappa}, alpha = {alpha})"
        )));
    }
    // the derivative of g in v has the sign of its derivative in ln v
    let (mut lo, mut hi) = (xs[imin - 1], xs[imin + 1]);
    if !(dg(lo)? < 0.0 && dg(hi)? > 0.0) {
        return Err(Error::MinimizationFailed(
            "derivative does not change sign around the sampled minimum".into(),
        ));
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if dg(mid)? < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let x0 = 0.5 * (lo + hi);
    let v0 = x0.exp();
    let v0_closed_form = alpha.powf(-0.5);
    let lambda = g(x0)?;
    if !(lambda > 0.0) {
        return Err(Error::MinimizationFailed(format!(
            "minimum value {lambda} is not positive"
        )));
    }
    let n = (1.0 / lambda).ceil() as u64;
    let n_ln_a = n as f64 * alpha.ln();
    let us = linspace(-50.0, 50.0, 10_000);
    let mut max_excess = f64::NEG_INFINITY;
    let mut ok = true;
    for &u in &us {
        let lhs = n_ln_a + phi.ln_eval(u)?;
        let rhs = phi.ln_eval(u - 1.0)?;
        max_excess = max_excess.max(lhs - rhs);
        ok &= !violates(lhs, rhs);
    }
    let v0_matches = (v0 - v0_closed_form).abs() <= 1e-8;
    Ok(KaniadakisCertificate {
        kappa,
        alpha,
        v0,
        v0_closed_form,
        v0_matches,
        lambda,
        n,
        grid_points: us.len(),
        max_log_excess: max_excess,
        check: ok && v0_matches,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnvelopeViolation {
    pub u: f64,
    pub v: f64,
    #[serde(with = "crate::ext_real")]
    pub ln_lhs: f64,
    pub ln_rhs: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnvelopeReport {
    pub family: String,
    pub k: f64,
    pub lambda0: f64,
    #[serde(with = "crate::ext_real")]
    pub c: f64,
    /// `ln K / λ₀`.
    pub lambda: f64,
    pub checked: usize,
    pub violation_count: usize,
    /// First few counterexample points.
    pub violations: Vec<EnvelopeViolation>,
    pub holds: bool,
}

/// Checks `φ(u + v) ≤ K φ(u) e^{λv}` with `λ = ln K / λ₀` for sampled `u ≥ c`
/// and `v ≥ 0`.
pub fn growth_envelope_check(
    phi: &DeformedExp,
    k: f64,
    lambda0: f64,
    c: f64,
    u_grid: &[f64],
    v_grid: &[f64],
    mode: Execution,
) -> Result<EnvelopeReport> {
    if !(k >= 1.0 && k.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "K = {k} must be finite and at least 1"
        )));
    }
    if !(lambda0 > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "lambda0 = {lambda0} must be positive"
        )));
    }
    if let Some(v) = v_grid.iter().find(|v| !(**v >= 0.0)) {
        return Err(Error::InvalidParameter(format!(
            "v = {v} must be non-negative"
        )));
    }
    let ln_k = k.ln();
    let lambda = ln_k / lambda0;
    let us: Vec<f64> = u_grid.iter().copied().filter(|&u| u >= c).collect();
    let rows = par::map(mode, &us, |&u| {
        let mut checked = 0;
        let mut bad = Vec::new();
        let Some(base) = ln_phi(phi, u) else {
            return (checked, bad);
        };
        if base == f64::NEG_INFINITY {
            return (checked, bad);
        }
        for &v in v_grid {
            let Some(lhs) = ln_phi(phi, u + v) else {
                continue;
            };
            checked += 1;
            let rhs = ln_k + base + lambda * v;
            if lhs > rhs + 1e-9 * (1.0 + rhs.abs()) {
                bad.push(EnvelopeViolation {
                    u,
                    v,
                    ln_lhs: lhs,
                    ln_rhs: rhs,
                });
            }
        }
        (checked, bad)
    });
    let checked = rows.iter().map(|r| r.0).sum();
    let violation_count = rows.iter().map(|r| r.1.len()).sum();
    let violations = rows.into_iter().flat_map(|r| r.1).take(16).collect();
    Ok(EnvelopeReport {
        family: phi.id(),
        k,
        lambda0,
        c,
        lambda,
        checked,
        violation_count,
        violations,
        holds: checked > 0 && violation_count == 0,
    })
}

/// `0, 1, ..., 20` in steps of `0.1`.
pub fn default_v_grid() -> Vec<f64> {
    (0..=200).map(|i| i as f64 * 0.1).collect()
}

/// `400` points from `max(c, lowest admissible u)` to `u_max`.
pub fn default_u_grid(phi: &DeformedExp, c: f64, u_max: f64) -> Vec<f64> {
    let a = phi.support_infimum();
    let (dlo, dhi) = phi.domain();
    let lo = c.max(if a.is_finite() { a + 1e-9 } else { -50.0 }).max(dlo);
    linspace(lo, u_max.min(dhi - 20.0).max(lo), 400)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ConstructionStatus {
    Certified,
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct U0Construction {
    pub family: String,
    pub alpha: f64,
    pub eta: f64,
    pub epsilon: f64,
    /// 1-based indices `n_i` into the λ sequence.
    pub lambda_indices: Vec<usize>,
    /// `u_{0,i} = λ_{n_i}`.
    pub u0_sequence: Vec<f64>,
    #[serde(with = "crate::ext_real::vec")]
    pub c_sequence: Vec<f64>,
    /// Upper bounds for `φ(c_i)`.
    pub phi_c_bounds: Vec<f64>,
    pub partial_sum_phi_c: f64,
    /// Bound on `Σ_{i>N} φ(c_i)` for the continuation of the thinning.
    pub tail_bound: f64,
    pub summability_target: f64,
    pub status: ConstructionStatus,
    pub notes: Vec<String>,
}

impl U0Construction {
    pub fn len(&self) -> usize {
        self.u0_sequence.len()
    }

    pub fn is_empty(&self) -> bool {
        self.u0_sequence.is_empty()
    }

    pub fn u0(&self) -> U0 {
        U0::Values {
            values: self.u0_sequence.clone(),
        }
    }

    pub fn certificate(&self) -> TruncatedSum {
        TruncatedSum {
            terms: self.len(),
            partial_sum: self.partial_sum_phi_c,
            tail_bound: self.tail_bound,
        }
    }

    /// `Σφ(c_i)` partial sum plus tail bound stays within the target.
    pub fn certificate_holds(&self) -> bool {
        self.status == ConstructionStatus::Certified
            && self.partial_sum_phi_c + self.tail_bound <= self.summability_target
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }
}

/// `first · ratio^(n-1)` for `n = 1..=len`.
pub fn geometric_lambdas(first: f64, ratio: f64, len: usize) -> Vec<f64> {
    (0..len).map(|i| first * ratio.powi(i as i32)).collect()
}

/// Scan grid from `eta` down toward the left end of the support.
fn construction_grid(phi: &DeformedExp, eta: f64, ln_floor: f64) -> Vec<f64> {
    let a = phi.support_infimum().max(phi.domain().0);
    let mut grid: Vec<f64> = (0..=5000)
        .map(|k| eta - 0.01 * k as f64)
        .take_while(|&u| u > a)
        .collect();
    let last = *grid.last().unwrap_or(&eta);
    if a.is_finite() {
        let d0 = last - a;
        for k in 1..=8000 {
            let u = a + d0 * (-(k as f64) / 8.0).exp2();
            if u <= a {
                break;
            }
            grid.push(u);
        }
    } else {
        for k in 1..=8800 {
            let u = last - 50.0 * ((k as f64 / 8.0).exp2() - 1.0);
            grid.push(u);
            if !(u > -1e300) || ln_phi(phi, u).is_some_and(|l| l <= ln_floor) {
                break;
            }
        }
    }
    grid
}

/// Membership in `{u : αφ(u) > φ(u - λ) and φ(u - λ) ≤ ε}`.
fn in_bad_set(phi: &DeformedExp, ln_a: f64, ln_eps: f64, lambda: f64, u: f64) -> bool {
    let (Some(num), Some(den)) = (ln_phi(phi, u), ln_phi(phi, u - lambda)) else {
        return false;
    };
    num > f64::NEG_INFINITY && ln_a + num > den && den <= ln_eps
}

fn choose_eta(phi: &DeformedExp, ln_a: f64, lambda1: f64) -> Option<f64> {
    let ok = |eta: f64| match (ln_phi(phi, eta), ln_phi(phi, eta - lambda1)) {
        (Some(n), Some(d)) => d > f64::NEG_INFINITY && ln_a + n < d,
        _ => false,
    };
    (0..=64)
        .flat_map(|k| {
            if k == 0 {
                vec![0.0]
            } else {
                vec![k as f64, -(k as f64)]
            }
        })
        .find(|&e| ok(e))
}

/// Builds `u_{0,i} = λ_{n_i}` with `Σφ(c_i)` kept under `summability_target`
/// by selecting `φ(c̃_{n_i}) ≤ target · 2^{-i}`.
pub fn construct_u0_sequence(
    phi: &DeformedExp,
    alpha: f64,
    lambdas: &[f64],
    eta: Option<f64>,
    summability_target: f64,
    n_atoms: usize,
    mode: Execution,
) -> Result<U0Construction> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::AlphaOutOfRange(alpha));
    }
    if !(summability_target > 0.0 && summability_target.is_finite()) || n_atoms == 0 {
        return Err(Error::InvalidParameter(
            "summability target must be positive and at least one atom requested".into(),
        ));
    }
    if lambdas.is_empty()
        || lambdas.iter().any(|l| !(*l > 0.0 && l.is_finite()))
        || lambdas.windows(2).any(|w| !(w[1] < w[0]))
    {
        return Err(Error::InvalidParameter(
            "lambda sequence must be positive and strictly decreasing".into(),
        ));
    }
    let ln_a = alpha.ln();
    let lambda1 = lambdas[0];
    let eta = match eta {
        Some(e) => e,
        None => choose_eta(phi, ln_a, lambda1).ok_or_else(|| {
            Error::InvalidParameter(format!(
                "no eta in [-64, 64] with alpha phi(eta) < phi(eta - {lambda1})"
            ))
        })?,
    };
    let ln_eta = phi.ln_eval(eta)?;
    let ln_eps = phi.ln_eval(eta - lambda1)?;
    if !(ln_eps > f64::NEG_INFINITY && ln_a + ln_eta < ln_eps) {
        return Err(Error::InvalidParameter(format!(
            "eta = {eta} violates alpha phi(eta) < phi(eta - lambda_1)"
        )));
    }
    let epsilon = ln_eps.exp();
    let ln_floor = summability_target.ln() - (n_atoms as f64 + 2.0) * LN_2;
    let grid = construction_grid(phi, eta, ln_floor);
    let lowest = *grid.last().unwrap_or(&eta);
    let floor_bound = ln_phi(phi, lowest).map_or(f64::INFINITY, f64::exp);

    // (c̃_n, bound on φ(c̃_n)) for every n
    let tilde: Vec<(f64, f64)> = par::map(mode, lambdas, |&lam| {
        match grid
            .iter()
            .position(|&u| in_bad_set(phi, ln_a, ln_eps, lam, u))
        {
            None => (f64::NEG_INFINITY, floor_bound),
            Some(0) => (eta, ln_phi(phi, eta).map_or(f64::INFINITY, f64::exp)),
            Some(j) => {
                let (mut lo, mut hi) = (grid[j], grid[j - 1]);
                for _ in 0..100 {
                    let mid = 0.5 * (lo + hi);
                    if mid <= lo || mid >= hi {
                        break;
                    }
                    if in_bad_set(phi, ln_a, ln_eps, lam, mid) {
                        lo = mid;
                    } else {
                        hi = mid;
                    }
                }
                (hi, ln_phi(phi, hi).map_or(f64::INFINITY, f64::exp))
            }
        }
    });

    let mut lambda_indices = Vec::new();
    let mut c_sequence = Vec::new();
    let mut phi_c_bounds = Vec::new();
    let mut u0_sequence = Vec::new();
    for (n, &(c, bound)) in tilde.iter().enumerate() {
        if lambda_indices.len() == n_atoms {
            break;
        }
        let i = lambda_indices.len() as i32 + 1;
        if bound <= summability_target * 0.5f64.powi(i) {
            lambda_indices.push(n + 1);
            c_sequence.push(c);
            phi_c_bounds.push(bound);
            u0_sequence.push(lambdas[n]);
        }
    }
    let selected = lambda_indices.len();
    let mut notes = Vec::new();
    let status = if selected == n_atoms {
        ConstructionStatus::Certified
    } else {
        notes.push(format!(
            "only {selected} of {n_atoms} atoms found with phi(c) below the geometric budget; extend the lambda sequence"
        ));
        ConstructionStatus::Inconclusive
    };
    if floor_bound > summability_target * 0.5f64.powi(n_atoms as i32 + 1) {
        notes.push(format!(
            "scan stopped at u = {lowest} with phi = {floor_bound:e}"
        ));
    }
    Ok(U0Construction {
        family: phi.id(),
        alpha,
        eta,
        epsilon,
        lambda_indices,
        u0_sequence,
        c_sequence,
        phi_c_bounds: phi_c_bounds.clone(),
        partial_sum_phi_c: phi_c_bounds.iter().sum(),
        tail_bound: summability_target * 0.5f64.powi(selected as i32),
        summability_target,
        status,
        notes,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SoundnessReport {
    pub checked: usize,
    pub violations: usize,
    pub certificate_holds: bool,
}

/// Samples `αφ(u) ≤ φ(u - u_{0,i})` for `u > c_i` with `φ(u - u_{0,i}) < ε`.
pub fn check_construction(
    phi: &DeformedExp,
    construction: &U0Construction,
    mode: Execution,
) -> Result<SoundnessReport> {
    let ln_a = construction.alpha.ln();
    let ln_eps = construction.epsilon.ln();
    let ln_floor = construction.summability_target.ln() - (construction.len() as f64 + 2.0) * LN_2;
    let grid = construction_grid(phi, construction.eta, ln_floor);
    let rows = par::map_range(mode, construction.len(), |i| {
        let (c, u0) = (construction.c_sequence[i], construction.u0_sequence[i]);
        let mut checked = 0;
        let mut bad = 0;
        for &u in grid.iter().filter(|&&u| u > c) {
            let (Some(num), Some(den)) = (ln_phi(phi, u), ln_phi(phi, u - u0)) else {
                continue;
            };
            if den < ln_eps {
                checked += 1;
                if violates(ln_a + num, den) {
                    bad += 1;
                }
            }
        }
        (checked, bad)
    });
    Ok(SoundnessReport {
        checked: rows.iter().map(|r| r.0).sum(),
        violations: rows.iter().map(|r| r.1).sum(),
        certificate_holds: construction.certificate_holds(),
    })
}

/// A summable sequence given by its φ-coordinates, with a declared bound on
/// `Σ_{i>N} φ(d_i)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TestSequence {
    pub coords: Vec<f64>,
    pub tail_bound: f64,
}

impl TestSequence {
    /// `φ(d_i) = w_i 2^{-i}` with `w_i` uniform on `[0.05, 1)`.
    pub fn random(phi: &DeformedExp, n: usize, seed: u64) -> Result<Self> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let coords = (1..=n)
            .map(|i| {
                let w: f64 = rng.gen_range(0.05..1.0);
                phi.inverse(w * 0.5f64.powi(i as i32))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            coords,
            tail_bound: 0.5f64.powi(n as i32),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ShiftCheck {
    pub lambda: f64,
    pub sum: TruncatedSum,
    /// The tail terms stay below ε, which the tail bound needs.
    pub tail_precondition: bool,
    pub finite: bool,
}

/// Truncated `Σ φ(d_i + λ u_{0,i})`. Past the truncation each term obeys
/// `T_m ≤ α^{-m} φ(d_i) + φ(c_i) Σ_{k<m} α^{-k}` with `m = ⌈λ⌉`.
pub fn shifted_sum_check(
    phi: &DeformedExp,
    construction: &U0Construction,
    test: &TestSequence,
    lambda: f64,
) -> Result<ShiftCheck> {
    if !(lambda > 0.0 && lambda.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "lambda = {lambda} must be positive"
        )));
    }
    let n = construction.len().min(test.coords.len());
    let mut partial = 0.0;
    for i in 0..n {
        partial += phi.eval(test.coords[i] + lambda * construction.u0_sequence[i])?;
    }
    let m = lambda.ceil() as i32;
    let inv_a = 1.0 / construction.alpha;
    let geometric: f64 = (0..m).map(|k| inv_a.powi(k)).sum();
    let mut d_tail = test.tail_bound;
    let mut c_tail = construction.tail_bound;
    if test.coords.len() > n {
        d_tail += test.coords[n..]
            .iter()
            .map(|&d| phi.eval(d))
            .sum::<Result<f64>>()?;
    }
    if construction.len() > n {
        c_tail += construction.phi_c_bounds[n..].iter().sum::<f64>();
    }
    let tail_bound = inv_a.powi(m) * d_tail + geometric * c_tail;
    let tail_precondition = tail_bound < construction.epsilon;
    let sum = TruncatedSum {
        terms: n,
        partial_sum: partial,
        tail_bound,
    };
    Ok(ShiftCheck {
        lambda,
        finite: sum.is_finite() && tail_precondition,
        tail_precondition,
        sum,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DemoRow {
    pub n: usize,
    pub c: f64,
    pub ln_mass: f64,
    #[serde(with = "crate::ext_real")]
    pub term_phi_c: f64,
    #[serde(with = "crate::ext_real")]
    pub partial_phi_c: f64,
    #[serde(with = "crate::ext_real")]
    pub term_shifted: f64,
    #[serde(with = "crate::ext_real")]
    pub partial_shifted: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DemoTable {
    pub lambda: f64,
    pub n_pieces: usize,
    /// `c_n = n · c_scale`.
    pub c_scale: f64,
    /// The second column diverges for every shift above this value.
    pub certified_lambda_min: f64,
    pub first_column_limit: f64,
    pub first_column_error: f64,
    pub first_column_converges: bool,
    pub second_terms_increasing: bool,
    pub second_column_diverges: bool,
    pub rows: Vec<DemoRow>,
}

/// Level sets `c = n s` on pieces of mass `2^{-n} e^{-(ns+1)²/2}` for the
/// counterexample φ with `u₀ ≡ 1`: `∫φ(c) dμ` converges while `∫φ(c + λ) dμ`
/// diverges. `s = 1` when `e^λ > 2`, otherwise `s = 1/λ`.
pub fn adversarial_nonexistence_demo(lambda: f64, n_pieces: usize) -> Result<DemoTable> {
    if !(lambda > 0.0 && lambda.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "lambda = {lambda} must be positive"
        )));
    }
    if n_pieces < 10 {
        return Err(Error::InvalidParameter(format!(
            "n_pieces = {n_pieces} must be at least 10"
        )));
    }
    let phi = DeformedExp::counterexample();
    let s = if lambda > LN_2 { 1.0 } else { 1.0 / lambda };
    let pieces: Vec<Piece> = (1..=n_pieces)
        .map(|n| {
            let c = n as f64 * s;
            Piece::scaled(
                format!("B{n}"),
                0.5f64.powi(n as i32),
                -(c + 1.0) * (c + 1.0) / 2.0,
            )
        })
        .collect();
    let measure = MeasureModel::simple_non_atomic(pieces)?;
    let mut rows = Vec::with_capacity(n_pieces);
    let (mut p1, mut p2) = (0.0, 0.0);
    // deficit of the first column, exact for dyadic terms
    let mut deficit = 1.0;
    for i in 0..n_pieces {
        let n = i + 1;
        let c = n as f64 * s;
        let (m, ls) = measure.weight_parts(i);
        let t1 = m * (ls + phi.ln_eval(c)?).exp();
        let t2 = m * (ls + phi.ln_eval(c + lambda)?).exp();
        p1 += t1;
        p2 += t2;
        deficit -= t1;
        rows.push(DemoRow {
            n,
            c,
            ln_mass: m.ln() + ls,
            term_phi_c: t1,
            partial_phi_c: p1,
            term_shifted: t2,
            partial_shifted: p2,
        });
    }
    let err = deficit.abs();
    let increasing = rows[n_pieces / 2..]
        .windows(2)
        .all(|w| w[1].term_shifted > w[0].term_shifted);
    Ok(DemoTable {
        lambda,
        n_pieces,
        c_scale: s,
        certified_lambda_min: LN_2 / s,
        first_column_limit: 1.0,
        first_column_error: err,
        first_column_converges: err <= 0.5f64.powi(n_pieces as i32) + 4.0 * f64::EPSILON,
        second_terms_increasing: increasing,
        second_column_diverges: lambda * s > LN_2 && increasing,
        rows,
    })
}

/// The two failure regimes of the integrability condition.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "regime", rename_all = "snake_case")]
pub enum AdversarialRegime {
    /// `∫φ(c + λ)` finite for `λ ≤ λ₀`, infinite above; uses `c_n = n` on
    /// pieces with `m_n φ(n + λ₀) = n^{-2}`.
    Leq { lambda0: f64 },
    /// `∫φ(c + λ)` finite for `λ < ln 2`, infinite from `ln 2` on; the
    /// demo template with blocks shifted by `λ_n ↑ ln 2`.
    Less,
}

#[derive(Debug, Clone)]
pub struct AdversarialPair {
    pub regime: AdversarialRegime,
    pub coords: CoordinatePair,
    /// Mass of the represented p = q pieces.
    pub represented_mass: f64,
    /// Declared mass of the pieces beyond the truncation.
    pub tail_at_zero: f64,
    pub tail: Arc<AdversarialTail>,
}

/// Beyond the truncation the pair puts `+∞` into `N(κ)` for every `κ > 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct AdversarialTail {
    pub at_zero: f64,
}

impl TailRemainder for AdversarialTail {
    fn remainder(&self, kappa: f64) -> f64 {
        if kappa > 0.0 {
            f64::INFINITY
        } else {
            self.at_zero
        }
    }

    fn describe(&self) -> String {
        format!("+inf for kappa > 0, {:e} at kappa = 0", self.at_zero)
    }
}

/// `Σ_{n≥x} n^{-2}` by its asymptotic series, accurate for `x ≥ 50`.
fn trigamma_tail(x: f64) -> f64 {
    let x2 = x * x;
    1.0 / x + 1.0 / (2.0 * x2) + 1.0 / (6.0 * x2 * x) - 1.0 / (30.0 * x2 * x2 * x)
        + 1.0 / (42.0 * x2 * x2 * x2 * x)
}

impl AdversarialPair {
    /// `blocks` p = q pieces are represented explicitly; two head pieces of
    /// unit measure carry the remaining mass with p ≠ q.
    pub fn build(regime: AdversarialRegime, blocks: usize) -> Result<Self> {
        if blocks < 10 {
            return Err(Error::InvalidParameter(
                "at least 10 blocks required".into(),
            ));
        }
        let phi = DeformedExp::counterexample();
        let mut pieces = Vec::new();
        let mut coords = Vec::new();
        let mut represented = 0.0;
        let tail_at_zero;
        match regime {
            AdversarialRegime::Leq { lambda0 } => {
                if !(lambda0 >= 0.0 && lambda0.is_finite()) {
                    return Err(Error::InvalidParameter(format!(
                        "lambda0 = {lambda0} must be non-negative"
                    )));
                }
                for n in 2..blocks + 2 {
                    let x = n as f64;
                    let ln_m = -2.0 * x.ln() - phi.ln_eval(x + lambda0)?;
                    pieces.push(Piece::scaled(format!("B{n}"), 1.0, ln_m));
                    coords.push(x + lambda0);
                    represented += 1.0 / (x * x);
                }
                tail_at_zero = trigamma_tail((blocks + 2) as f64);
            }
            AdversarialRegime::Less => {
                let mut k_prev = 0u64;
                let mut tail = 0.0;
                for n in 1..=blocks + 1000 {
                    let lam = LN_2 * n as f64 / (n + 1) as f64;
                    let need = ((n + 1) as f64 * LN_2 + lam + lam * lam / 2.0) / (LN_2 - lam);
                    let k = (need.ceil() as u64).max(k_prev + 1);
                    k_prev = k;
                    let kf = k as f64;
                    let ln_contrib = -kf * LN_2 + lam * (kf + 1.0) + lam * lam / 2.0;
                    if n <= blocks {
                        let ln_m = -kf * LN_2 - (kf + 1.0) * (kf + 1.0) / 2.0;
                        pieces.push(Piece::scaled(format!("B{n}"), 1.0, ln_m));
                        coords.push(kf + lam);
                        represented += ln_contrib.exp();
                    } else {
                        tail += ln_contrib.exp();
                    }
                }
                tail_at_zero = tail;
            }
        }
        let head = 1.0 - represented - tail_at_zero;
        if !(head > 0.0) {
            return Err(Error::InvalidParameter(
                "tail mass leaves no room for the head".into(),
            ));
        }
        let (hp, hq) = ([0.8 * head, 0.2 * head], [0.3 * head, 0.7 * head]);
        let mut all_pieces = vec![Piece::new("H1", 1.0), Piece::new("H2", 1.0)];
        all_pieces.extend(pieces);
        let mut cp = vec![phi.inverse(hp[0])?, phi.inverse(hp[1])?];
        let mut cq = vec![phi.inverse(hq[0])?, phi.inverse(hq[1])?];
        cp.extend(&coords);
        cq.extend(&coords);
        Ok(Self {
            regime,
            coords: CoordinatePair {
                measure: MeasureModel::simple_non_atomic(all_pieces)?,
                coord_p: cp,
                coord_q: cq,
            },
            represented_mass: represented,
            tail_at_zero,
            tail: Arc::new(AdversarialTail {
                at_zero: tail_at_zero,
            }),
        })
    }

    /// The pair matching [`adversarial_nonexistence_demo`].
    pub fn from_demo_template(blocks: usize) -> Result<Self> {
        Self::build(AdversarialRegime::Less, blocks)
    }

    pub fn functional(&self, alpha: f64) -> Result<NormalizationFunctional> {
        Ok(NormalizationFunctional::from_coordinates(
            &DeformedExp::counterexample(),
            &self.coords,
            alpha,
            &U0::one(),
        )?
        .with_tail(self.tail.clone()))
    }

    /// Total masses of p and q including the declared tail.
    pub fn masses(&self) -> Result<(f64, f64)> {
        let (p, q) = self.coords.masses(&DeformedExp::counterexample())?;
        Ok((p + self.tail_at_zero, q + self.tail_at_zero))
    }

    pub fn solve(&self, alpha: f64, config: &SolverConfig) -> Result<KappaSolveResult> {
        solve_functional(&self.functional(alpha)?, alpha, config)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kappa_solver::SolveStatus;

    fn probe(phi: &DeformedExp, lambda0: f64, u_max: f64) -> ConditionProbeReport {
        ratio_limsup_probe(phi, lambda0, u_max, DEFAULT_THRESHOLD, Execution::Parallel).unwrap()
    }

    #[test]
    fn exp_ratio_is_e_everywhere() {
        let r = probe(&DeformedExp::exp(), 1.0, DEFAULT_U_MAX);
        match r.verdict {
            Verdict::Bounded { k, c } => {
                assert!((k - std::f64::consts::E).abs() < 1e-12);
                assert_eq!(c, f64::NEG_INFINITY);
            }
            v => panic!("{v:?}"),
        }
        assert!(r
            .ratio_samples
            .iter()
            .all(|x| (x - std::f64::consts::E).abs() < 1e-9));
    }

    #[test]
    fn counterexample_ratio_is_unbounded() {
        let r = probe(&DeformedExp::counterexample(), 1.0, 100.0);
        assert_eq!(r.verdict, Verdict::Unbounded);
        // ratio is e^{u + 1/2} for u ≥ 1
        let i = r.u_samples.iter().position(|&u| u > 20.0).unwrap();
        let u = r.u_samples[i];
        assert!((r.ratio_samples[i].ln() - (u + 0.5)).abs() < 1e-9);
    }

    #[test]
    fn bounded_families() {
        for phi in [
            DeformedExp::tsallis(0.5).unwrap(),
            DeformedExp::tsallis(2.0).unwrap(),
            DeformedExp::kaniadakis(0.5).unwrap(),
            DeformedExp::kaniadakis(-0.5).unwrap(),
        ] {
            let r = probe(&phi, 1.0, DEFAULT_U_MAX);
            assert!(r.is_bounded(), "{}: {:?}", phi.id(), r.verdict);
        }
    }

    #[test]
    fn tsallis_two_ratio_is_rational() {
        let r = probe(&DeformedExp::tsallis(2.0).unwrap(), 1.0, DEFAULT_U_MAX);
        // (1+u)(2-u) on [0,1] peaks at 9/4
        let Verdict::Bounded { k, .. } = r.verdict else {
            panic!()
        };
        assert!((k - 2.25).abs() < 1e-9, "{k}");
        let last = *r.ratio_samples.last().unwrap();
        assert!((last - 201.0 / 200.0).abs() < 1e-12);
    }

    #[test]
    fn kaniadakis_ratio_tracks_power_law() {
        let r = probe(&DeformedExp::kaniadakis(0.5).unwrap(), 1.0, DEFAULT_U_MAX);
        let n = r.u_samples.len();
        let u = r.u_samples[n - 1];
        let asym = kaniadakis_asymptotic_ratio(0.5, 1.0, u);
        assert!((r.ratio_samples[n - 1] / asym - 1.0).abs() < 1e-3);
    }

    #[test]
    fn probe_rejects_bad_input() {
        let phi = DeformedExp::exp();
        assert!(ratio_limsup_probe(&phi, 0.0, 100.0, 1e12, Execution::Sequential).is_err());
        assert!(ratio_limsup_probe(&phi, 1.0, f64::INFINITY, 1e12, Execution::Sequential).is_err());
        let tab = DeformedExp::tabulated(vec![
            crate::deformed_exp::Knot { u: 0.0, phi: 1.0 },
            crate::deformed_exp::Knot { u: 0.5, phi: 2.0 },
        ])
        .unwrap();
        assert!(matches!(
            ratio_limsup_probe(&tab, 1.0, 100.0, 1e12, Execution::Sequential),
            Err(Error::DegenerateDomain(_))
        ));
    }

    #[test]
    fn probe_modes_agree() {
        let phi = DeformedExp::kaniadakis(0.25).unwrap();
        let a = ratio_limsup_probe(&phi, 0.5, 150.0, 1e12, Execution::Parallel).unwrap();
        let b = ratio_limsup_probe(&phi, 0.5, 150.0, 1e12, Execution::Sequential).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn inequality_probe_examples() {
        let grid = linspace(-20.0, 50.0, 701);
        let exp = DeformedExp::exp();
        let r = pointwise_inequality_probe(&exp, (-1.0f64).exp(), 1.0, &grid).unwrap();
        assert_eq!(r.c_found, f64::NEG_INFINITY);
        assert!(r.holds);
        let r = pointwise_inequality_probe(&exp, 0.5, 1.0, &grid).unwrap();
        assert_eq!(r.c_found, 50.0);
        assert!(!r.holds);
        let ce = DeformedExp::counterexample();
        for u_max in [30.0, 80.0] {
            let g = linspace(-10.0, u_max, 500);
            for alpha in [0.01, 0.5, 0.99] {
                let r = pointwise_inequality_probe(&ce, alpha, 1.0, &g).unwrap();
                assert_eq!(r.c_found, u_max);
            }
        }
    }

    #[test]
    fn bounded_verdict_implies_no_violation_above_c() {
        for phi in [
            DeformedExp::kaniadakis(0.5).unwrap(),
            DeformedExp::tsallis(2.0).unwrap(),
        ] {
            let r = probe(&phi, 1.0, DEFAULT_U_MAX);
            let Verdict::Bounded { k, c } = r.verdict else {
                panic!()
            };
            let grid: Vec<f64> = r.u_samples.iter().copied().filter(|&u| u >= c).collect();
            let ineq = pointwise_inequality_probe(&phi, 1.0 / k, 1.0, &grid).unwrap();
            assert_eq!(ineq.violations, 0, "{}", phi.id());
        }
    }

    #[test]
    #[allow(clippy::approx_constant)]
    fn kaniadakis_worked_example() {
        let cert = verify_kaniadakis_u0(0.5, 0.25).unwrap();
        assert!((cert.v0 - 2.0).abs() < 1e-8);
        let lambda = (2f64.sqrt() - 0.5f64.sqrt()) - (0.5f64.sqrt() - 2f64.sqrt());
        assert!((cert.lambda - lambda).abs() < 1e-10);
        assert!((cert.lambda - 1.41421).abs() < 1e-5);
        assert_eq!(cert.n, 1);
        assert!(cert.check);
        assert!(verify_kaniadakis_u0(0.0, 0.5).is_err());
        assert!(verify_kaniadakis_u0(0.5, 1.0).is_err());
    }

    #[test]
    fn kaniadakis_minimizer_is_closed_form() {
        for kappa in [-1.0, -0.5, -0.25, 0.25, 0.5, 1.0] {
            for alpha in [0.1, 0.25, 0.5, 0.9] {
                let c = verify_kaniadakis_u0(kappa, alpha).unwrap();
                assert!(c.v0_matches, "{kappa} {alpha}: {}", c.v0);
                assert!(c.check, "{c:?}");
            }
        }
    }

    #[test]
    fn envelope_examples() {
        let v = default_v_grid();
        let exp = DeformedExp::exp();
        let u = default_u_grid(&exp, f64::NEG_INFINITY, 100.0);
        let r = growth_envelope_check(
            &exp,
            std::f64::consts::E,
            1.0,
            f64::NEG_INFINITY,
            &u,
            &v,
            Execution::Parallel,
        )
        .unwrap();
        assert!(r.holds);
        assert!((r.lambda - 1.0).abs() < 1e-15);

        let kan = DeformedExp::kaniadakis(0.5).unwrap();
        let p = probe(&kan, 1.0, DEFAULT_U_MAX);
        let Verdict::Bounded { k, c } = p.verdict else {
            panic!()
        };
        let u = default_u_grid(&kan, c, 150.0);
        let r = growth_envelope_check(&kan, k, 1.0, c, &u, &v, Execution::Parallel).unwrap();
        assert!(r.holds, "{:?}", r.violations.first());

        let ce = DeformedExp::counterexample();
        let u = default_u_grid(&ce, 0.0, 100.0);
        let r = growth_envelope_check(&ce, 1e6, 1.0, 0.0, &u, &v, Execution::Sequential).unwrap();
        assert!(!r.holds);
        assert!(r.violations.len() <= 16 && r.violation_count > 0);
    }

    #[test]
    fn construction_for_every_builtin() {
        let lambdas = geometric_lambdas(0.5, 0.5, 200);
        for phi in crate::deformed_exp::builtin_families() {
            let c = construct_u0_sequence(&phi, 0.5, &lambdas, None, 1.0, 32, Execution::Parallel)
                .unwrap();
            assert_eq!(
                c.status,
                ConstructionStatus::Certified,
                "{}: {:?}",
                phi.id(),
                c.notes
            );
            assert!(c.certificate_holds());
            assert!(c.u0_sequence.windows(2).all(|w| w[1] <= w[0]));
            assert!(c.u0_sequence.iter().all(|&u| u > 0.0));
            let s = check_construction(&phi, &c, Execution::Parallel).unwrap();
            assert_eq!(s.violations, 0, "{}", phi.id());
            for seed in 0..3 {
                let t = TestSequence::random(&phi, 32, seed).unwrap();
                for lam in [0.5, 1.0, 2.0] {
                    let chk = shifted_sum_check(&phi, &c, &t, lam).unwrap();
                    assert!(chk.finite, "{} {lam}: {chk:?}", phi.id());
                }
            }
        }
    }

    #[test]
    fn tsallis_construction_has_finite_c() {
        let phi = DeformedExp::tsallis(0.5).unwrap();
        let lambdas = geometric_lambdas(0.5, 0.5, 200);
        let c = construct_u0_sequence(&phi, 0.5, &lambdas, None, 1.0, 16, Execution::Sequential)
            .unwrap();
        // c̃_n ≈ -2 + 2λ/(2 - √2) near the support edge
        assert!(c.c_sequence.iter().all(|x| x.is_finite() && *x > -2.0));
        let n = c.lambda_indices[5];
        let expected = -2.0 + 2.0 * lambdas[n - 1] / (2.0 - 2f64.sqrt());
        assert!(
            (c.c_sequence[5] - expected).abs() < 1e-9,
            "{} {expected}",
            c.c_sequence[5]
        );
    }

    #[test]
    fn construction_validates_input() {
        let phi = DeformedExp::exp();
        let l = geometric_lambdas(0.5, 0.5, 40);
        let run = |a, l: &[f64], eta, t| {
            construct_u0_sequence(&phi, a, l, eta, t, 8, Execution::Sequential)
        };
        assert!(run(0.5, &[0.5, 0.6], None, 1.0).is_err());
        assert!(run(0.5, &l, None, 0.0).is_err());
        assert!(run(1.5, &l, None, 1.0).is_err());
        // α e^η < e^{η - 0.5} fails for α = 0.9
        assert!(run(0.9, &l, Some(0.0), 1.0).is_err());
        let short = run(0.5, &l[..4], None, 1.0).unwrap();
        assert_eq!(short.status, ConstructionStatus::Inconclusive);
    }

    #[test]
    fn construction_json_round_trip() {
        let phi = DeformedExp::counterexample();
        let c = construct_u0_sequence(
            &phi,
            0.5,
            &geometric_lambdas(0.5, 0.5, 64),
            None,
            1.0,
            16,
            Execution::Parallel,
        )
        .unwrap();
        let back = U0Construction::from_json(&c.to_json().unwrap()).unwrap();
        assert_eq!(back, c);
    }

    #[test]
    fn demo_columns() {
        let d = adversarial_nonexistence_demo(1.0, 60).unwrap();
        assert_eq!(d.first_column_error, 0.5f64.powi(60));
        assert!((1.0 - d.rows[59].partial_phi_c).abs() <= 0.5f64.powi(60));
        assert!(d.first_column_converges && d.second_column_diverges);
        for row in &d.rows {
            assert_eq!(row.term_phi_c, 0.5f64.powi(row.n as i32));
            let t = (std::f64::consts::E / 2.0).powi(row.n as i32) * 1.5f64.exp();
            assert!((row.term_shifted / t - 1.0).abs() < 1e-10);
        }
        let at50 = d.rows[49].partial_shifted;
        assert!(at50 > 1e6);

        let small = adversarial_nonexistence_demo(0.1, 40).unwrap();
        assert_eq!(small.c_scale, 10.0);
        assert!(small.second_column_diverges);
        assert!(small.certified_lambda_min < 0.1);
        assert!(adversarial_nonexistence_demo(1.0, 5).is_err());
    }

    #[test]
    fn adversarial_pairs_have_no_kappa() {
        let cfg = SolverConfig::default();
        for regime in [
            AdversarialRegime::Less,
            AdversarialRegime::Leq { lambda0: 1.0 },
            AdversarialRegime::Leq { lambda0: 0.0 },
        ] {
            let pair = AdversarialPair::build(regime, 40).unwrap();
            let (mp, mq) = pair.masses().unwrap();
            assert!((mp - 1.0).abs() < 1e-12 && (mq - 1.0).abs() < 1e-12);
            let f = pair.functional(0.5).unwrap();
            assert!(f.eval(0.0).unwrap() < 1.0);
            assert_eq!(f.eval(3.0).unwrap(), f64::INFINITY);
            let r = pair.solve(0.5, &cfg).unwrap();
            assert_eq!(r.status, SolveStatus::DivergentIntegral, "{regime:?}");
            assert_eq!(r.last_finite_kappa, Some(0.0));
        }
    }

    #[test]
    fn less_blocks_meet_their_budgets() {
        let pair = AdversarialPair::from_demo_template(30).unwrap();
        assert!(pair.represented_mass <= 0.5);
        assert!(pair.tail_at_zero <= 0.5f64.powi(31));
    }
}
