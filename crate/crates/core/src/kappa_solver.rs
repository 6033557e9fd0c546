//! The normalization functional and the implicit equation for κ(α).
//!
//! For a deformed exponential `φ`, densities `p, q`, a positive weight
//! function `u₀` and `α ∈ (0, 1)`,
//!
//! ```text
//! N(κ) = ∫ φ(α φ⁻¹(p) + (1-α) φ⁻¹(q) + κ u₀) dμ
//! ```
//!
//! is non-decreasing in κ with `N(0) ≤ 1` by convexity. κ(α) is the
//! non-negative root of `N(κ) = 1`. The solver expands a bracket
//! geometrically from `[0, 1]` and bisects; `N` may jump to `+∞`, in which
//! case the root does not exist and the result says so.

use crate::deformed_exp::DeformedExp;
use crate::error::{Error, Result};
use crate::measures::{MeasureModel, ProbabilityPair};
use serde::{Deserialize, Serialize};
use std::fmt;
use std::sync::Arc;

/// The positive weight function `u₀`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum U0 {
    Constant { value: f64 },
    Values { values: Vec<f64> },
}

impl U0 {
    pub fn constant(value: f64) -> Self {
        U0::Constant { value }
    }

    pub fn one() -> Self {
        U0::constant(1.0)
    }

    /// Expands to one value per atom and checks positivity.
    pub fn resolve(&self, n: usize) -> Result<Vec<f64>> {
        let v = match self {
            U0::Constant { value } => vec![*value; n],
            U0::Values { values } => {
                if values.len() != n {
                    return Err(Error::LengthMismatch {
                        expected: n,
                        got: values.len(),
                    });
                }
                values.clone()
            }
        };
        if let Some(i) = v.iter().position(|x| !(*x > 0.0) || !x.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "u0[{i}] = {} must be positive and finite",
                v[i]
            )));
        }
        Ok(v)
    }

    pub fn describe(&self) -> String {
        match self {
            U0::Constant { value } if (1e-6..1e15).contains(&value.abs()) => {
                format!("const:{value}")
            }
            U0::Constant { value } => format!("const:{value:e}"),
            U0::Values { values } => format!("seq:{} values", values.len()),
        }
    }
}

/// A pair given by its φ-coordinates `φ⁻¹(p)`, `φ⁻¹(q)` rather than by
/// density values. Used where densities themselves overflow `f64`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoordinatePair {
    pub measure: MeasureModel,
    pub coord_p: Vec<f64>,
    pub coord_q: Vec<f64>,
}

impl CoordinatePair {
    pub fn from_pair(phi: &DeformedExp, pair: &ProbabilityPair) -> Result<Self> {
        let inv = |v: &[f64]| {
            v.iter()
                .map(|&x| phi.inverse(x))
                .collect::<Result<Vec<_>>>()
        };
        Ok(Self {
            measure: pair.measure().clone(),
            coord_p: inv(pair.p())?,
            coord_q: inv(pair.q())?,
        })
    }

    /// `(∫ φ(coord_p) dμ, ∫ φ(coord_q) dμ)` over the represented atoms.
    pub fn masses(&self, phi: &DeformedExp) -> Result<(f64, f64)> {
        let ln = |c: &[f64]| {
            c.iter()
                .map(|&x| phi.ln_eval(x))
                .collect::<Result<Vec<_>>>()
        };
        Ok((
            self.measure.integrate_ln(&ln(&self.coord_p)?)?,
            self.measure.integrate_ln(&ln(&self.coord_q)?)?,
        ))
    }
}

/// Contribution to `N(κ)` from atoms beyond a truncation, declared by the
/// construction that produced the truncated pair. May be `+∞`.
pub trait TailRemainder: Send + Sync + fmt::Debug {
    fn remainder(&self, kappa: f64) -> f64;

    fn describe(&self) -> String;
}

#[derive(Debug, Clone)]
pub struct NormalizationFunctional {
    phi: DeformedExp,
    measure: MeasureModel,
    base: Vec<f64>,
    u0: Vec<f64>,
    tail: Option<Arc<dyn TailRemainder>>,
    convexity_bound: f64,
}

impl NormalizationFunctional {
    pub fn new(phi: &DeformedExp, pair: &ProbabilityPair, alpha: f64, u0: &U0) -> Result<Self> {
        Self::from_coordinates(phi, &CoordinatePair::from_pair(phi, pair)?, alpha, u0)
    }

    pub fn from_coordinates(
        phi: &DeformedExp,
        coords: &CoordinatePair,
        alpha: f64,
        u0: &U0,
    ) -> Result<Self> {
        if !(0.0..=1.0).contains(&alpha) {
            return Err(Error::AlphaOutOfRange(alpha));
        }
        let n = coords.measure.len();
        if coords.coord_p.len() != n || coords.coord_q.len() != n {
            return Err(Error::LengthMismatch {
                expected: n,
                got: coords.coord_p.len().min(coords.coord_q.len()),
            });
        }
        let base = coords
            .coord_p
            .iter()
            .zip(&coords.coord_q)
            .map(|(&a, &b)| {
                if a == b {
                    a
                } else {
                    alpha * a + (1.0 - alpha) * b
                }
            })
            .collect();
        let (mp, mq) = coords.masses(phi)?;
        Ok(Self {
            phi: phi.clone(),
            measure: coords.measure.clone(),
            base,
            u0: u0.resolve(n)?,
            tail: None,
            convexity_bound: alpha * mp + (1.0 - alpha) * mq,
        })
    }

    pub fn with_tail(mut self, tail: Arc<dyn TailRemainder>) -> Self {
        self.tail = Some(tail);
        self
    }

    /// `α ∫p + (1-α) ∫q` over the represented atoms, an upper bound for
    /// `N(0)` when φ is convex.
    pub fn convexity_bound(&self) -> f64 {
        self.convexity_bound
    }

    pub fn tail(&self) -> Option<&Arc<dyn TailRemainder>> {
        self.tail.as_ref()
    }

    /// `N(κ)`; `+∞` when the integral diverges or overflows.
    pub fn eval(&self, kappa: f64) -> Result<f64> {
        let ln_terms = self
            .base
            .iter()
            .zip(&self.u0)
            .map(|(&b, &u)| self.phi.ln_eval(b + kappa * u))
            .collect::<Result<Vec<_>>>()?;
        let head = self.measure.integrate_ln(&ln_terms)?;
        let tail = self.tail.as_ref().map_or(0.0, |t| t.remainder(kappa));
        Ok(head + tail)
    }
}

/// `N(κ)` for a single κ.
pub fn normalization_functional(
    phi: &DeformedExp,
    pair: &ProbabilityPair,
    alpha: f64,
    u0: &U0,
    kappa: f64,
) -> Result<f64> {
    NormalizationFunctional::new(phi, pair, alpha, u0)?.eval(kappa)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolverConfig {
    /// Residual tolerance `|N(κ) - 1|`.
    pub tol: f64,
    /// Upper end of the initial bracket `[0, initial_upper]`.
    pub initial_upper: f64,
    /// Largest κ probed before giving up with `BracketFailure`.
    pub kappa_max_probe: f64,
    pub max_iterations: usize,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            tol: 1e-12,
            initial_upper: 1.0,
            kappa_max_probe: 1e6,
            max_iterations: 4000,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.tol > 0.0) || !(self.initial_upper > 0.0) || !(self.kappa_max_probe > 0.0) {
            return Err(Error::InvalidParameter(
                "solver tolerances and bracket bounds must be positive".into(),
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SolveStatus {
    Converged,
    DivergentIntegral,
    BracketFailure,
}

impl fmt::Display for SolveStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SolveStatus::Converged => "converged",
            SolveStatus::DivergentIntegral => "divergent_integral",
            SolveStatus::BracketFailure => "bracket_failure",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KappaSolveResult {
    pub alpha: f64,
    pub kappa: f64,
    #[serde(with = "crate::ext_real")]
    pub residual: f64,
    pub bracket: (f64, f64),
    pub iterations: usize,
    pub status: SolveStatus,
    /// `N(0)`.
    #[serde(with = "crate::ext_real")]
    pub n_at_zero: f64,
    /// Largest probed κ with finite `N(κ)`, for divergent instances.
    pub last_finite_kappa: Option<f64>,
    /// `N(κ - h) < N(κ + h)` around the converged root.
    pub locally_strict: Option<bool>,
}

impl KappaSolveResult {
    pub fn is_converged(&self) -> bool {
        self.status == SolveStatus::Converged
    }
}

pub fn solve_kappa(
    phi: &DeformedExp,
    pair: &ProbabilityPair,
    alpha: f64,
    u0: &U0,
    config: &SolverConfig,
) -> Result<KappaSolveResult> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::AlphaOutOfRange(alpha));
    }
    let f = NormalizationFunctional::new(phi, pair, alpha, u0)?;
    solve_functional(&f, alpha, config)
}

/// Solves `N(κ) = 1` for an already-built functional.
pub fn solve_functional(
    f: &NormalizationFunctional,
    alpha: f64,
    config: &SolverConfig,
) -> Result<KappaSolveResult> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::AlphaOutOfRange(alpha));
    }
    config.validate()?;
    let tol = config.tol;
    let mut iterations = 1;
    let n0 = f.eval(0.0)?;
    let result = |kappa: f64, n: f64, bracket, iterations, status, last_finite| KappaSolveResult {
        alpha,
        kappa,
        residual: n - 1.0,
        bracket,
        iterations,
        status,
        n_at_zero: n0,
        last_finite_kappa: last_finite,
        locally_strict: None,
    };

    if n0 == f64::INFINITY {
        return Ok(result(
            0.0,
            n0,
            (0.0, 0.0),
            iterations,
            SolveStatus::DivergentIntegral,
            None,
        ));
    }
    if n0 > f.convexity_bound().max(1.0) + tol {
        return Err(Error::NormalizationAboveOne(n0));
    }
    if n0 >= 1.0 - tol {
        let mut r = result(
            0.0,
            n0,
            (0.0, 0.0),
            iterations,
            SolveStatus::Converged,
            None,
        );
        r.locally_strict = Some(locally_strict(f, 0.0)?);
        return Ok(r);
    }

    // geometric bracket expansion
    let (mut lo, mut n_lo) = (0.0, n0);
    let mut hi = config.initial_upper.min(config.kappa_max_probe);
    let mut n_hi;
    let mut last_finite = 0.0;
    loop {
        n_hi = f.eval(hi)?;
        iterations += 1;
        if n_hi == f64::INFINITY {
            break;
        }
        last_finite = hi;
        if n_hi >= 1.0 {
            break;
        }
        lo = hi;
        n_lo = n_hi;
        if hi >= config.kappa_max_probe {
            return Ok(result(
                hi,
                n_hi,
                (lo, hi),
                iterations,
                SolveStatus::BracketFailure,
                Some(last_finite),
            ));
        }
        hi = (2.0 * hi).min(config.kappa_max_probe);
    }

    // bisection on the predicate N(κ) ≥ 1 (with +∞ counted as ≥ 1)
    while iterations < config.max_iterations {
        let width_ok = hi - lo <= tol * hi.max(1.0);
        let residual_ok =
            (n_lo - 1.0).abs() <= tol || (n_hi.is_finite() && (n_hi - 1.0).abs() <= tol);
        if width_ok && residual_ok {
            break;
        }
        let mid = lo + 0.5 * (hi - lo);
        if mid <= lo || mid >= hi {
            break;
        }
        let n_mid = f.eval(mid)?;
        iterations += 1;
        if n_mid.is_finite() {
            last_finite = last_finite.max(mid);
        }
        if n_mid >= 1.0 {
            hi = mid;
            n_hi = n_mid;
        } else {
            lo = mid;
            n_lo = n_mid;
            last_finite = last_finite.max(mid);
        }
    }

    let lo_res = (n_lo - 1.0).abs();
    let hi_res = if n_hi.is_finite() {
        (n_hi - 1.0).abs()
    } else {
        f64::INFINITY
    };
    let (kappa, n_k) = if hi_res <= lo_res {
        (hi, n_hi)
    } else {
        (lo, n_lo)
    };
    if (n_k - 1.0).abs() <= tol {
        let mut r = result(
            kappa,
            n_k,
            (lo, hi),
            iterations,
            SolveStatus::Converged,
            None,
        );
        r.locally_strict = Some(locally_strict(f, kappa)?);
        return Ok(r);
    }
    if n_hi == f64::INFINITY {
        // N stays below 1 up to `lo` and is infinite just above it
        let last = if n_lo.is_finite() { lo } else { last_finite };
        return Ok(result(
            lo,
            n_hi,
            (lo, hi),
            iterations,
            SolveStatus::DivergentIntegral,
            Some(last),
        ));
    }
    Ok(result(
        kappa,
        n_k,
        (lo, hi),
        iterations,
        SolveStatus::BracketFailure,
        Some(last_finite),
    ))
}

fn locally_strict(f: &NormalizationFunctional, kappa: f64) -> Result<bool> {
    let h = 1e-6 * kappa.max(1.0);
    let below = f.eval((kappa - h).max(0.0))?;
    let above = f.eval(kappa + h)?;
    Ok(above > below)
}
