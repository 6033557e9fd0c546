//! Generalized Rényi divergence `κ(α) / (α(1-α))`, the φ-divergence, the
//! classical oracles and the endpoint limits α → 0, α → 1.

use crate::deformed_exp::{ln_q, DeformedExp};
use crate::error::{Error, Result};
use crate::kappa_solver::{solve_kappa, KappaSolveResult, SolveStatus, SolverConfig, U0};
use crate::measures::{MeasureModel, ProbabilityPair};
use crate::par::{self, Execution};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DivergenceReport {
    pub alpha: f64,
    pub kappa: f64,
    /// `None` unless the solver converged.
    pub value: Option<f64>,
    pub family: String,
    pub u0_id: String,
    pub status: SolveStatus,
    #[serde(with = "crate::ext_real")]
    pub residual: f64,
    pub iterations: usize,
}

impl DivergenceReport {
    pub fn from_solve(phi: &DeformedExp, u0: &U0, r: &KappaSolveResult) -> Self {
        let value = r
            .is_converged()
            .then(|| r.kappa / (r.alpha * (1.0 - r.alpha)));
        Self {
            alpha: r.alpha,
            kappa: r.kappa,
            value,
            family: phi.id(),
            u0_id: u0.describe(),
            status: r.status,
            residual: r.residual,
            iterations: r.iterations,
        }
    }
}

pub fn generalized_renyi(
    phi: &DeformedExp,
    pair: &ProbabilityPair,
    alpha: f64,
    u0: &U0,
    config: &SolverConfig,
) -> Result<DivergenceReport> {
    let r = solve_kappa(phi, pair, alpha, u0, config)?;
    Ok(DivergenceReport::from_solve(phi, u0, &r))
}

/// `generalized_renyi` over a grid of α, rows in input order.
pub fn alpha_sweep(
    phi: &DeformedExp,
    pair: &ProbabilityPair,
    alphas: &[f64],
    u0: &U0,
    config: &SolverConfig,
    mode: Execution,
) -> Result<Vec<DivergenceReport>> {
    par::map(mode, alphas, |&a| {
        generalized_renyi(phi, pair, a, u0, config)
    })
    .into_iter()
    .collect()
}

/// `-ln ∫ p^α q^(1-α) dμ`.
pub fn classical_kappa(pair: &ProbabilityPair, alpha: f64) -> Result<f64> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::AlphaOutOfRange(alpha));
    }
    let ln_terms: Vec<f64> = pair
        .p()
        .iter()
        .zip(pair.q())
        .map(|(&p, &q)| {
            if p == q {
                p.ln()
            } else {
                alpha * p.ln() + (1.0 - alpha) * q.ln()
            }
        })
        .collect();
    Ok(-pair.measure().integrate_ln(&ln_terms)?.ln())
}

/// `-ln(∫ p^α q^(1-α) dμ) / (α(1-α))`.
pub fn classical_renyi(pair: &ProbabilityPair, alpha: f64) -> Result<f64> {
    Ok(classical_kappa(pair, alpha)? / (alpha * (1.0 - alpha)))
}

/// Quotient of `∫ (φ⁻¹(p) - φ⁻¹(q)) / (φ⁻¹)'(p) dμ` by `∫ u₀ / (φ⁻¹)'(p) dμ`.
pub fn phi_divergence(phi: &DeformedExp, pair: &ProbabilityPair, u0: &U0) -> Result<f64> {
    let u0 = u0.resolve(pair.len())?;
    let n = pair.len();
    let mut num = Vec::with_capacity(n);
    let mut den = Vec::with_capacity(n);
    for ((&p, &q), &w) in pair.p().iter().zip(pair.q()).zip(&u0) {
        let d = phi.inverse_derivative(p)?;
        let diff = if p == q {
            0.0
        } else {
            phi.inverse(p)? - phi.inverse(q)?
        };
        num.push(diff / d);
        den.push(w / d);
    }
    let top = integrate_checked(pair.measure(), &num, "numerator")?;
    let bottom = integrate_checked(pair.measure(), &den, "denominator")?;
    if !(bottom > 0.0) {
        return Err(Error::NonPositiveDenominator(bottom));
    }
    Ok(top / bottom)
}

fn integrate_checked(m: &MeasureModel, f: &[f64], which: &'static str) -> Result<f64> {
    if f.iter().any(|x| !x.is_finite()) {
        return Err(Error::DivergentPhiIntegral { which });
    }
    let v = m.integrate(f)?;
    if !v.is_finite() {
        return Err(Error::DivergentPhiIntegral { which });
    }
    Ok(v)
}

pub fn kl_divergence(pair: &ProbabilityPair) -> Result<f64> {
    let f: Vec<f64> = pair
        .p()
        .iter()
        .zip(pair.q())
        .map(|(&p, &q)| if p == q { 0.0 } else { p * (p / q).ln() })
        .collect();
    pair.measure().integrate(&f)
}

/// `∫ p ln_q(p / q) dμ` with the q-logarithm `(x^(1-q) - 1) / (1 - q)`.
pub fn tsallis_relative_entropy(pair: &ProbabilityPair, q_param: f64) -> Result<f64> {
    if q_param == 1.0 || !q_param.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "q = {q_param} must be finite and different from 1"
        )));
    }
    let f: Vec<f64> = pair
        .p()
        .iter()
        .zip(pair.q())
        .map(|(&p, &q)| {
            if p == q {
                0.0
            } else {
                p * ln_q(q_param, p / q)
            }
        })
        .collect();
    pair.measure().integrate(&f)
}

pub fn shannon_entropy(measure: &MeasureModel, p: &[f64]) -> Result<f64> {
    let f: Vec<f64> = p.iter().map(|&x| -x * x.ln()).collect();
    measure.integrate(&f)
}

/// `(1 - ∫ p^q dμ) / (q - 1)`.
pub fn tsallis_entropy(measure: &MeasureModel, p: &[f64], q_param: f64) -> Result<f64> {
    if q_param == 1.0 || !(q_param >= 0.0) {
        return Err(Error::InvalidParameter(format!(
            "q = {q_param} must be non-negative and different from 1"
        )));
    }
    let f: Vec<f64> = p.iter().map(|&x| x.powf(q_param)).collect();
    Ok((1.0 - measure.integrate(&f)?) / (q_param - 1.0))
}

/// `ln(∫ p^α dμ) / (1 - α)`.
pub fn renyi_entropy(measure: &MeasureModel, p: &[f64], alpha: f64) -> Result<f64> {
    if alpha == 1.0 || !(alpha >= 0.0) {
        return Err(Error::InvalidParameter(format!(
            "order {alpha} must be non-negative and different from 1"
        )));
    }
    let f: Vec<f64> = p.iter().map(|&x| x.powf(alpha)).collect();
    Ok(measure.integrate(&f)?.ln() / (1.0 - alpha))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Endpoint {
    #[serde(rename = "0")]
    Zero,
    #[serde(rename = "1")]
    One,
}

impl Endpoint {
    pub fn value(self) -> f64 {
        match self {
            Endpoint::Zero => 0.0,
            Endpoint::One => 1.0,
        }
    }

    /// `2^-k` or `1 - 2^-k` for `k = 4..=14`.
    pub fn default_sequence(self) -> Vec<f64> {
        (4..=14)
            .map(|k| {
                let h = 0.5f64.powi(k);
                match self {
                    Endpoint::Zero => h,
                    Endpoint::One => 1.0 - h,
                }
            })
            .collect()
    }
}

impl std::str::FromStr for Endpoint {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "0" => Ok(Endpoint::Zero),
            "1" => Ok(Endpoint::One),
            _ => Err(Error::InvalidParameter(format!(
                "endpoint must be 0 or 1, got {s}"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LimitRow {
    pub alpha: f64,
    pub kappa: f64,
    pub value: Option<f64>,
    pub status: SolveStatus,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LimitEstimate {
    pub endpoint: Endpoint,
    /// Last table value plus a one-step Richardson correction.
    pub estimate: Option<f64>,
    pub last_value: Option<f64>,
    /// Set when the table does not look convergent.
    pub flagged: bool,
    pub notes: Vec<String>,
    pub table: Vec<LimitRow>,
}

/// Extrapolates `D^(α)` along `alphas` toward the endpoint.
pub fn limit_divergence(
    phi: &DeformedExp,
    pair: &ProbabilityPair,
    u0: &U0,
    endpoint: Endpoint,
    alphas: Option<&[f64]>,
    config: &SolverConfig,
    mode: Execution,
) -> Result<LimitEstimate> {
    let default;
    let alphas = match alphas {
        Some(a) => a,
        None => {
            default = endpoint.default_sequence();
            &default
        }
    };
    check_sequence(alphas, endpoint)?;
    let rows: Vec<LimitRow> = alpha_sweep(phi, pair, alphas, u0, config, mode)?
        .into_iter()
        .map(|r| LimitRow {
            alpha: r.alpha,
            kappa: r.kappa,
            value: r.value,
            status: r.status,
        })
        .collect();

    let mut notes = Vec::new();
    let mut flagged = false;
    if let Some(r) = rows.iter().find(|r| r.status != SolveStatus::Converged) {
        flagged = true;
        notes.push(format!("solver status {} at alpha = {}", r.status, r.alpha));
    }
    let values: Vec<f64> = rows.iter().filter_map(|r| r.value).collect();
    let diffs: Vec<f64> = values.windows(2).map(|w| w[1] - w[0]).collect();
    let noise = 1e-9 * values.last().map_or(1.0, |v| v.abs().max(1.0));
    for (k, w) in diffs.windows(2).enumerate() {
        if w[1].abs() > noise && w[1].abs() > 1.05 * w[0].abs() {
            flagged = true;
            notes.push(format!(
                "successive difference grows at alpha = {}",
                alphas[k + 2]
            ));
            break;
        }
    }

    let n = rows.len();
    let last_value = rows[n - 1].value;
    let estimate = match (rows[n - 2].value, last_value) {
        (Some(prev), Some(last)) => {
            let e = endpoint.value();
            let h_prev = (e - rows[n - 2].alpha).abs();
            let h_last = (e - rows[n - 1].alpha).abs();
            Some(last + (last - prev) * h_last / (h_prev - h_last))
        }
        _ => None,
    };
    Ok(LimitEstimate {
        endpoint,
        estimate,
        last_value,
        flagged,
        notes,
        table: rows,
    })
}

fn check_sequence(alphas: &[f64], endpoint: Endpoint) -> Result<()> {
    if alphas.len() < 2 {
        return Err(Error::InvalidParameter(
            "alpha sequence needs at least two entries".into(),
        ));
    }
    if let Some(a) = alphas.iter().find(|a| !(**a > 0.0 && **a < 1.0)) {
        return Err(Error::AlphaOutOfRange(*a));
    }
    let toward = alphas.windows(2).all(|w| match endpoint {
        Endpoint::One => w[1] > w[0],
        Endpoint::Zero => w[1] < w[0],
    });
    if !toward {
        return Err(Error::InvalidParameter(format!(
            "alpha sequence must move strictly toward {}",
            endpoint.value()
        )));
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DerivativeCheck {
    pub endpoint: Endpoint,
    pub step: f64,
    /// `∂κ/∂α` at 0, or `-∂κ/∂α` at 1, by one-sided second-order differences.
    pub finite_difference: f64,
    pub phi_divergence: f64,
    pub abs_error: f64,
}

/// Compares the one-sided slope of κ at an endpoint with the φ-divergence of
/// the appropriately ordered pair. `κ` vanishes at both endpoints.
pub fn kappa_derivative_check(
    phi: &DeformedExp,
    pair: &ProbabilityPair,
    u0: &U0,
    endpoint: Endpoint,
    step: f64,
    config: &SolverConfig,
) -> Result<DerivativeCheck> {
    if !(step > 0.0 && step < 0.25) {
        return Err(Error::InvalidParameter(format!(
            "step {step} must lie in (0, 0.25)"
        )));
    }
    let kappa_at = |a: f64| -> Result<f64> {
        let r = solve_kappa(phi, pair, a, u0, config)?;
        if !r.is_converged() {
            return Err(Error::InvalidParameter(format!(
                "kappa did not converge at alpha = {a}: {}",
                r.status
            )));
        }
        Ok(r.kappa)
    };
    let (fd, reference) = match endpoint {
        Endpoint::Zero => (
            (4.0 * kappa_at(step)? - kappa_at(2.0 * step)?) / (2.0 * step),
            phi_divergence(phi, &pair.swapped(), u0)?,
        ),
        Endpoint::One => (
            (4.0 * kappa_at(1.0 - step)? - kappa_at(1.0 - 2.0 * step)?) / (2.0 * step),
            phi_divergence(phi, pair, u0)?,
        ),
    };
    Ok(DerivativeCheck {
        endpoint,
        step,
        finite_difference: fd,
        phi_divergence: reference,
        abs_error: (fd - reference).abs(),
    })
}
