//! Deformed exponential functions.
//!
//! A deformed exponential is a convex, non-decreasing `φ: ℝ → [0, ∞)` with
//! `φ(u) → 0` as `u → -∞` and `φ(u) → ∞` as `u → ∞`. Every family here
//! exposes `φ`, `ln φ`, `φ⁻¹` and `(φ⁻¹)'`, all in closed form except for the
//! tabulated family, which interpolates piecewise-linearly in `(u, ln φ)`.
//!
//! | family           | `φ(u)`                                             | `a_φ`          |
//! |------------------|----------------------------------------------------|----------------|
//! | `exp`            | `e^u`                                              | `-∞`           |
//! | `tsallis(q)`     | `[1 + (1-q)u]_+^{1/(1-q)}` (q < 1), spliced (q > 1)| `-1/(1-q)` / `-∞` |
//! | `kaniadakis(κ)`  | `(κu + √(1+κ²u²))^{1/κ}`                          | `-∞`           |
//! | `counterexample` | `e^{(u+1)²/2}` for `u ≥ 0`, `e^{u+1/2}` for `u ≤ 0`| `-∞`           |
//! | `tabulated`      | log-linear through knots                           | first knot     |
//!
//! For `q > 1` the q-exponential blows up at `u = 1/(q-1)`, so it is not a
//! deformed exponential on all of `ℝ`. The `tsallis` family keeps the
//! power-law left tail `exp_q(u)` for `u ≤ 0` and continues with the dual
//! `exp_{2-q}(u)` for `u ≥ 0`. Both pieces equal 1 with slope 1 at the origin,
//! so the splice is C¹ and convex for `q ∈ (1, 2]`.

use crate::error::{Error, Result};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::fmt;

/// `(u, φ(u))` sample of a tabulated deformed exponential.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Knot {
    pub u: f64,
    pub phi: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Family {
    ClassicalExp,
    TsallisQ { q: f64 },
    KaniadakisKappa { kappa: f64 },
    CounterexamplePhi,
    TabulatedMonotone { knots: Vec<Knot> },
}

impl Family {
    pub fn name(&self) -> &'static str {
        match self {
            Family::ClassicalExp => "exp",
            Family::TsallisQ { .. } => "tsallis",
            Family::KaniadakisKappa { .. } => "kaniadakis",
            Family::CounterexamplePhi => "counterexample",
            Family::TabulatedMonotone { .. } => "tabulated",
        }
    }
}

/// A validated deformed exponential.
#[derive(Debug, Clone, PartialEq)]
pub struct DeformedExp {
    family: Family,
    // ln φ at the tabulated knots; empty for closed-form families.
    ln_knots: Vec<f64>,
}

impl DeformedExp {
    pub fn new(family: Family) -> Result<Self> {
        let mut ln_knots = Vec::new();
        match &family {
            Family::ClassicalExp | Family::CounterexamplePhi => {}
            Family::TsallisQ { q } => {
                if !q.is_finite() || !(0.0..=2.0).contains(q) {
                    return Err(Error::InvalidParameter(format!(
                        "tsallis q = {q} must lie in [0, 2] for a convex deformed exponential"
                    )));
                }
            }
            Family::KaniadakisKappa { kappa } => {
                if !kappa.is_finite() || !(-1.0..=1.0).contains(kappa) {
                    return Err(Error::InvalidParameter(format!(
                        "kaniadakis kappa = {kappa} must lie in [-1, 1]"
                    )));
                }
            }
            Family::TabulatedMonotone { knots } => {
                if knots.len() < 2 {
                    return Err(Error::InvalidParameter(
                        "tabulated family needs at least two knots".into(),
                    ));
                }
                for (i, k) in knots.iter().enumerate() {
                    if !k.u.is_finite() || !k.phi.is_finite() || k.phi <= 0.0 {
                        return Err(Error::InvalidParameter(format!(
                            "knot {i}: ({}, {}) must be finite with phi > 0",
                            k.u, k.phi
                        )));
                    }
                }
                for (i, w) in knots.windows(2).enumerate() {
                    if w[1].u <= w[0].u {
                        return Err(Error::InvalidParameter(format!(
                            "knot {}: u values must be strictly increasing",
                            i + 1
                        )));
                    }
                    if w[1].phi < w[0].phi {
                        return Err(Error::InvalidParameter(format!(
                            "knot {}: phi values must be non-decreasing",
                            i + 1
                        )));
                    }
                }
                ln_knots = knots.iter().map(|k| k.phi.ln()).collect();
            }
        }
        Ok(Self { family, ln_knots })
    }

    pub fn exp() -> Self {
        Self::new(Family::ClassicalExp).expect("exp is valid")
    }

    pub fn tsallis(q: f64) -> Result<Self> {
        Self::new(Family::TsallisQ { q })
    }

    pub fn kaniadakis(kappa: f64) -> Result<Self> {
        Self::new(Family::KaniadakisKappa { kappa })
    }

    pub fn counterexample() -> Self {
        Self::new(Family::CounterexamplePhi).expect("counterexample is valid")
    }

    pub fn tabulated(knots: Vec<Knot>) -> Result<Self> {
        Self::new(Family::TabulatedMonotone { knots })
    }

    /// Loads knots from CSV with header `u,phi`.
    pub fn tabulated_from_csv<R: std::io::Read>(reader: R) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new()
            .trim(csv::Trim::All)
            .from_reader(reader);
        let headers = rdr.headers()?.clone();
        if headers.iter().collect::<Vec<_>>() != ["u", "phi"] {
            return Err(Error::Parse(format!(
                "expected header `u,phi`, found `{}`",
                headers.iter().collect::<Vec<_>>().join(",")
            )));
        }
        let mut knots = Vec::new();
        for (i, rec) in rdr.deserialize::<Knot>().enumerate() {
            let k = rec.map_err(|e| Error::InvalidRow {
                row: i + 2,
                msg: e.to_string(),
            })?;
            knots.push(k);
        }
        Self::tabulated(knots)
    }

    pub fn family(&self) -> &Family {
        &self.family
    }

    /// Short identifier such as `kaniadakis(0.5)`.
    pub fn id(&self) -> String {
        match &self.family {
            Family::TsallisQ { q } => format!("tsallis({q})"),
            Family::KaniadakisKappa { kappa } => format!("kaniadakis({kappa})"),
            Family::TabulatedMonotone { knots } => format!("tabulated({} knots)", knots.len()),
            f => f.name().to_string(),
        }
    }

    /// `a_φ = inf{u : φ(u) > 0}`.
    pub fn support_infimum(&self) -> f64 {
        match &self.family {
            Family::TsallisQ { q } if *q < 1.0 => -1.0 / (1.0 - q),
            Family::TabulatedMonotone { knots } => knots[0].u,
            _ => f64::NEG_INFINITY,
        }
    }

    /// Interval on which `φ` can be evaluated.
    pub fn domain(&self) -> (f64, f64) {
        match &self.family {
            Family::TabulatedMonotone { knots } => (knots[0].u, knots[knots.len() - 1].u),
            _ => (f64::NEG_INFINITY, f64::INFINITY),
        }
    }

    /// `φ(u)`. Values beyond `f64::MAX` saturate to `+∞`.
    pub fn eval(&self, u: f64) -> Result<f64> {
        if u.is_nan() {
            return Err(Error::NonFinite { index: 0, value: u });
        }
        Ok(match &self.family {
            Family::ClassicalExp => u.exp(),
            Family::TsallisQ { q } => {
                let q = *q;
                if q == 1.0 {
                    u.exp()
                } else if q < 1.0 || u <= 0.0 {
                    q_exp(q, u)
                } else {
                    q_exp(2.0 - q, u)
                }
            }
            Family::KaniadakisKappa { kappa } => {
                if *kappa == 0.0 {
                    u.exp()
                } else {
                    ((kappa * u).asinh() / kappa).exp()
                }
            }
            Family::CounterexamplePhi => {
                if u >= 0.0 {
                    (0.5 * (u + 1.0) * (u + 1.0)).exp()
                } else {
                    (u + 0.5).exp()
                }
            }
            Family::TabulatedMonotone { .. } => self.tab_ln_eval(u)?.exp(),
        })
    }

    /// `ln φ(u)`, finite well past the point where `φ` itself overflows.
    /// Returns `-∞` where `φ(u) = 0`.
    pub fn ln_eval(&self, u: f64) -> Result<f64> {
        if u.is_nan() {
            return Err(Error::NonFinite { index: 0, value: u });
        }
        Ok(match &self.family {
            Family::ClassicalExp => u,
            Family::TsallisQ { q } => {
                let q = *q;
                if q == 1.0 {
                    u
                } else if q < 1.0 || u <= 0.0 {
                    ln_q_exp(q, u)
                } else {
                    ln_q_exp(2.0 - q, u)
                }
            }
            Family::KaniadakisKappa { kappa } => {
                if *kappa == 0.0 {
                    u
                } else {
                    (kappa * u).asinh() / kappa
                }
            }
            Family::CounterexamplePhi => {
                if u >= 0.0 {
                    0.5 * (u + 1.0) * (u + 1.0)
                } else {
                    u + 0.5
                }
            }
            Family::TabulatedMonotone { .. } => self.tab_ln_eval(u)?,
        })
    }

    /// `φ'(u)`. At the counterexample junction `u = 0` the right branch is used.
    pub fn derivative(&self, u: f64) -> Result<f64> {
        Ok(match &self.family {
            Family::ClassicalExp => u.exp(),
            Family::TsallisQ { q } => {
                let q = *q;
                if q == 1.0 {
                    u.exp()
                } else if q < 1.0 || u <= 0.0 {
                    q_exp_derivative(q, u)
                } else {
                    q_exp_derivative(2.0 - q, u)
                }
            }
            Family::KaniadakisKappa { kappa } => {
                let phi = self.eval(u)?;
                phi / (1.0 + kappa * kappa * u * u).sqrt()
            }
            Family::CounterexamplePhi => counterexample_branch_derivative(u, u >= 0.0),
            Family::TabulatedMonotone { knots } => {
                let i = self.tab_segment(u)?;
                let slope =
                    (self.ln_knots[i + 1] - self.ln_knots[i]) / (knots[i + 1].u - knots[i].u);
                slope * self.eval(u)?
            }
        })
    }

    /// One-sided derivatives `(φ'(0⁻), φ'(0⁺))` of the counterexample at its
    /// branch junction. Both equal `e^{1/2}`.
    pub fn counterexample_junction_derivatives() -> (f64, f64) {
        (
            counterexample_branch_derivative(0.0, false),
            counterexample_branch_derivative(0.0, true),
        )
    }

    /// `φ⁻¹(v)` for `v > 0`.
    pub fn inverse(&self, v: f64) -> Result<f64> {
        if !(v > 0.0) || v.is_nan() {
            return Err(Error::NotInRange(v));
        }
        if v.is_infinite() {
            return Err(Error::NotInRange(v));
        }
        Ok(match &self.family {
            Family::ClassicalExp => v.ln(),
            Family::TsallisQ { q } => {
                let q = *q;
                if q == 1.0 {
                    v.ln()
                } else if q < 1.0 || v <= 1.0 {
                    ln_q(q, v)
                } else {
                    ln_q(2.0 - q, v)
                }
            }
            Family::KaniadakisKappa { kappa } => {
                if *kappa == 0.0 {
                    v.ln()
                } else {
                    (kappa * v.ln()).sinh() / kappa
                }
            }
            Family::CounterexamplePhi => {
                let l = v.ln();
                if l >= 0.5 {
                    (2.0 * l).sqrt() - 1.0
                } else {
                    l - 0.5
                }
            }
            Family::TabulatedMonotone { knots } => {
                let l = v.ln();
                let n = knots.len();
                let (lo, hi) = (self.ln_knots[0], self.ln_knots[n - 1]);
                if l < lo || l > hi {
                    return Err(Error::NotInRange(v));
                }
                let flat = self.ln_knots.windows(2).any(|w| w[0] == w[1] && w[0] == l);
                if flat {
                    return Err(Error::FlatSegment(v));
                }
                // first knot with ln φ ≥ l
                let j = self.ln_knots.partition_point(|&x| x < l);
                if j == 0 {
                    knots[0].u
                } else {
                    let i = j - 1;
                    let t = (l - self.ln_knots[i]) / (self.ln_knots[j] - self.ln_knots[i]);
                    knots[i].u + t * (knots[j].u - knots[i].u)
                }
            }
        })
    }

    /// `(φ⁻¹)'(v) = 1 / φ'(φ⁻¹(v))`.
    pub fn inverse_derivative(&self, v: f64) -> Result<f64> {
        if !(v > 0.0) || !v.is_finite() {
            return Err(Error::NotInRange(v));
        }
        let d = match &self.family {
            Family::ClassicalExp => 1.0 / v,
            Family::TsallisQ { q } => {
                let q = *q;
                if q == 1.0 {
                    1.0 / v
                } else if q < 1.0 || v <= 1.0 {
                    v.powf(-q)
                } else {
                    v.powf(q - 2.0)
                }
            }
            Family::KaniadakisKappa { kappa } => (kappa * v.ln()).cosh() / v,
            Family::CounterexamplePhi => {
                let l = v.ln();
                if l >= 0.5 {
                    1.0 / (v * (2.0 * l).sqrt())
                } else {
                    1.0 / v
                }
            }
            Family::TabulatedMonotone { .. } => self.tab_inverse_derivative(v)?,
        };
        if !(d > 0.0) || !d.is_finite() {
            return Err(Error::FlatSegment(v));
        }
        Ok(d)
    }

    /// Numeric check of the deformed-exponential axioms on a sorted grid.
    pub fn validate(&self, u_grid: &[f64]) -> Result<ValidationReport> {
        if u_grid.len() < 3 {
            return Err(Error::InvalidParameter(
                "validation grid needs at least 3 points".into(),
            ));
        }
        if u_grid.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::InvalidParameter(
                "validation grid must be strictly increasing".into(),
            ));
        }
        let mut out_of_domain = 0;
        let values: Vec<Option<f64>> = u_grid
            .iter()
            .map(|&u| match self.eval(u) {
                Ok(v) => Some(v),
                Err(_) => {
                    out_of_domain += 1;
                    None
                }
            })
            .collect();

        let mut convexity_violations = Vec::new();
        for i in 1..u_grid.len() - 1 {
            let (Some(l), Some(m), Some(r)) = (values[i - 1], values[i], values[i + 1]) else {
                continue;
            };
            let (ul, um, ur) = (u_grid[i - 1], u_grid[i], u_grid[i + 1]);
            let chord = ((ur - um) * l + (um - ul) * r) / (ur - ul);
            if chord.is_infinite() {
                continue;
            }
            let tol = 1e-10 * chord.abs().max(m.abs()) + f64::MIN_POSITIVE;
            if m > chord + tol {
                convexity_violations.push(ConvexityViolation {
                    u_left: ul,
                    u_mid: um,
                    u_right: ur,
                    value: m,
                    chord,
                });
            }
        }

        let mut monotonicity_violations = Vec::new();
        for i in 0..u_grid.len() - 1 {
            let (Some(a), Some(b)) = (values[i], values[i + 1]) else {
                continue;
            };
            if b < a - 1e-12 * a.abs() {
                monotonicity_violations.push(MonotonicityViolation {
                    u_left: u_grid[i],
                    u_right: u_grid[i + 1],
                    left: a,
                    right: b,
                });
            }
        }

        let saturated = values.iter().flatten().filter(|v| v.is_infinite()).count();
        let first = values.iter().position(Option::is_some);
        let last = values.iter().rposition(Option::is_some);
        let probe = |i: Option<usize>| {
            i.map(|i| TailProbe {
                u: u_grid[i],
                value: values[i].unwrap_or(f64::NAN),
            })
        };
        Ok(ValidationReport {
            family: self.id(),
            grid_points: u_grid.len(),
            out_of_domain,
            saturated_points: saturated,
            convexity_violations,
            monotonicity_violations,
            lower_tail: probe(first),
            upper_tail: probe(last),
        })
    }

    fn tab_segment(&self, u: f64) -> Result<usize> {
        let Family::TabulatedMonotone { knots } = &self.family else {
            unreachable!("tabulated helper on closed-form family")
        };
        let n = knots.len();
        let (lo, hi) = (knots[0].u, knots[n - 1].u);
        if u < lo || u > hi {
            return Err(Error::OutOfTabulatedRange { u, lo, hi });
        }
        let j = knots.partition_point(|k| k.u <= u);
        Ok(j.clamp(1, n - 1) - 1)
    }

    fn tab_ln_eval(&self, u: f64) -> Result<f64> {
        let Family::TabulatedMonotone { knots } = &self.family else {
            unreachable!()
        };
        let i = self.tab_segment(u)?;
        let t = (u - knots[i].u) / (knots[i + 1].u - knots[i].u);
        Ok(self.ln_knots[i] + t * (self.ln_knots[i + 1] - self.ln_knots[i]))
    }

    fn tab_inverse_derivative(&self, v: f64) -> Result<f64> {
        let n = self.ln_knots.len();
        let (vmin, vmax) = (self.ln_knots[0].exp(), self.ln_knots[n - 1].exp());
        if v < vmin || v > vmax {
            return Err(Error::NotInRange(v));
        }
        let mut h = 1e-5 * v;
        // shrink the step until the stencil fits inside the tabulated range
        for _ in 0..40 {
            let lo = v - h;
            let hi = v + h;
            if lo >= vmin && hi <= vmax {
                return Ok((self.inverse(hi)? - self.inverse(lo)?) / (2.0 * h));
            }
            if lo < vmin && v + 2.0 * h <= vmax {
                return Ok((self.inverse(v + h)? - self.inverse(v)?) / h);
            }
            if hi > vmax && v - 2.0 * h >= vmin {
                return Ok((self.inverse(v)? - self.inverse(v - h)?) / h);
            }
            h *= 0.5;
        }
        Err(Error::FlatSegment(v))
    }
}

/// Standard q-exponential `[1 + (1-q)u]_+^{1/(1-q)}`, `q ≠ 1`.
fn q_exp(q: f64, u: f64) -> f64 {
    let base = 1.0 + (1.0 - q) * u;
    if base <= 0.0 {
        if q < 1.0 {
            0.0
        } else {
            f64::INFINITY
        }
    } else {
        base.powf(1.0 / (1.0 - q))
    }
}

fn ln_q_exp(q: f64, u: f64) -> f64 {
    let x = (1.0 - q) * u;
    if x <= -1.0 {
        if q < 1.0 {
            f64::NEG_INFINITY
        } else {
            f64::INFINITY
        }
    } else {
        x.ln_1p() / (1.0 - q)
    }
}

fn q_exp_derivative(q: f64, u: f64) -> f64 {
    let base = 1.0 + (1.0 - q) * u;
    if base <= 0.0 {
        0.0
    } else {
        base.powf(q / (1.0 - q))
    }
}

/// Tsallis q-logarithm `(v^{1-q} - 1)/(1-q)`.
pub fn ln_q(q: f64, v: f64) -> f64 {
    if q == 1.0 {
        v.ln()
    } else {
        ((1.0 - q) * v.ln()).exp_m1() / (1.0 - q)
    }
}

fn counterexample_branch_derivative(u: f64, right: bool) -> f64 {
    if right {
        (u + 1.0) * (0.5 * (u + 1.0) * (u + 1.0)).exp()
    } else {
        (u + 0.5).exp()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvexityViolation {
    pub u_left: f64,
    pub u_mid: f64,
    pub u_right: f64,
    pub value: f64,
    pub chord: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MonotonicityViolation {
    pub u_left: f64,
    pub u_right: f64,
    pub left: f64,
    pub right: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TailProbe {
    pub u: f64,
    #[serde(with = "crate::ext_real")]
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub family: String,
    pub grid_points: usize,
    pub out_of_domain: usize,
    pub saturated_points: usize,
    pub convexity_violations: Vec<ConvexityViolation>,
    pub monotonicity_violations: Vec<MonotonicityViolation>,
    pub lower_tail: Option<TailProbe>,
    pub upper_tail: Option<TailProbe>,
}

impl ValidationReport {
    pub fn violation_count(&self) -> usize {
        self.convexity_violations.len() + self.monotonicity_violations.len()
    }
}

impl fmt::Display for DeformedExp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.id())
    }
}

// JSON shape: {"family": "<name>", "params": {...}}
#[derive(Serialize, Deserialize)]
struct RawSpec {
    family: String,
    #[serde(default)]
    params: serde_json::Map<String, serde_json::Value>,
}

impl Serialize for DeformedExp {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut params = serde_json::Map::new();
        match &self.family {
            Family::TsallisQ { q } => {
                params.insert("q".into(), (*q).into());
            }
            Family::KaniadakisKappa { kappa } => {
                params.insert("kappa".into(), (*kappa).into());
            }
            Family::TabulatedMonotone { knots } => {
                params.insert(
                    "knots".into(),
                    serde_json::to_value(knots).map_err(serde::ser::Error::custom)?,
                );
            }
            Family::ClassicalExp | Family::CounterexamplePhi => {}
        }
        RawSpec {
            family: self.family.name().to_string(),
            params,
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for DeformedExp {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let raw = RawSpec::deserialize(d)?;
        let num = |key: &str| -> std::result::Result<f64, D::Error> {
            raw.params
                .get(key)
                .and_then(serde_json::Value::as_f64)
                .ok_or_else(|| D::Error::custom(format!("missing numeric param `{key}`")))
        };
        let family = match raw.family.as_str() {
            "exp" => Family::ClassicalExp,
            "tsallis" => Family::TsallisQ { q: num("q")? },
            "kaniadakis" => Family::KaniadakisKappa {
                kappa: num("kappa")?,
            },
            "counterexample" => Family::CounterexamplePhi,
            "tabulated" => {
                let knots = raw
                    .params
                    .get("knots")
                    .cloned()
                    .ok_or_else(|| D::Error::custom("missing param `knots`"))?;
                Family::TabulatedMonotone {
                    knots: serde_json::from_value(knots).map_err(D::Error::custom)?,
                }
            }
            other => return Err(D::Error::custom(format!("unknown family `{other}`"))),
        };
        DeformedExp::new(family).map_err(D::Error::custom)
    }
}

/// The closed-form families with representative parameters, used by sweeps
/// and tests that must cover "all built-in families".
pub fn builtin_families() -> Vec<DeformedExp> {
    vec![
        DeformedExp::exp(),
        DeformedExp::tsallis(0.5).unwrap(),
        DeformedExp::tsallis(1.5).unwrap(),
        DeformedExp::tsallis(2.0).unwrap(),
        DeformedExp::kaniadakis(0.5).unwrap(),
        DeformedExp::kaniadakis(-0.25).unwrap(),
        DeformedExp::kaniadakis(1.0).unwrap(),
        DeformedExp::counterexample(),
    ]
}
