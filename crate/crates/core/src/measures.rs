//! Underlying measures at desk scale and probability pairs over them.
//!
//! Three regimes are representable:
//!
//! * `Counting`: the counting measure on the first `n_atoms` naturals.
//! * `QuadGrid`: a non-atomic measure on an interval, discretised by
//!   composite-trapezoid nodes and weights.
//! * `SimpleNonAtomic`: an abstract non-atomic measure seen only through the
//!   masses of finitely many disjoint pieces. Functions are simple functions,
//!   constant on each piece. Piece masses carry a separate log scale so that
//!   masses far below `f64::MIN_POSITIVE` stay exact.
//!
//! Integrals of infinite sequences are reported as a [`TruncatedSum`]: the
//! partial sum over the represented atoms plus a tail bound declared by
//! whatever built the sequence.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::io::{Read, Write};
use std::path::Path;

/// Mass tolerance for membership in the set of probability densities.
pub const MASS_TOLERANCE: f64 = 1e-9;

/// Default number of trapezoid nodes for quadrature grids.
pub const DEFAULT_QUAD_NODES: usize = 4096;

/// One piece of a simple-function partition. Its measure is
/// `mass · exp(log_scale)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Piece {
    pub id: String,
    pub mass: f64,
    #[serde(default)]
    pub log_scale: f64,
}

impl Piece {
    pub fn new(id: impl Into<String>, mass: f64) -> Self {
        Self {
            id: id.into(),
            mass,
            log_scale: 0.0,
        }
    }

    pub fn scaled(id: impl Into<String>, mass: f64, log_scale: f64) -> Self {
        Self {
            id: id.into(),
            mass,
            log_scale,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum MeasureKind {
    Counting { n_atoms: usize },
    QuadGrid { nodes: Vec<f64>, weights: Vec<f64> },
    SimpleNonAtomic { pieces: Vec<Piece> },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "MeasureKind", into = "MeasureKind")]
pub struct MeasureModel {
    kind: MeasureKind,
}

impl TryFrom<MeasureKind> for MeasureModel {
    type Error = Error;

    fn try_from(kind: MeasureKind) -> Result<Self> {
        match &kind {
            MeasureKind::Counting { n_atoms } => {
                if *n_atoms == 0 {
                    return Err(Error::InvalidParameter(
                        "counting measure needs at least one atom".into(),
                    ));
                }
            }
            MeasureKind::QuadGrid { nodes, weights } => {
                if nodes.len() != weights.len() {
                    return Err(Error::LengthMismatch {
                        expected: nodes.len(),
                        got: weights.len(),
                    });
                }
                if nodes.is_empty() {
                    return Err(Error::InvalidParameter("empty quadrature grid".into()));
                }
                if let Some(i) = nodes.iter().position(|x| !x.is_finite()) {
                    return Err(Error::NonFinite {
                        index: i,
                        value: nodes[i],
                    });
                }
                if nodes.windows(2).any(|w| !(w[1] > w[0])) {
                    return Err(Error::InvalidParameter(
                        "quadrature nodes must be strictly increasing".into(),
                    ));
                }
                if let Some(i) = weights.iter().position(|w| !(*w > 0.0) || !w.is_finite()) {
                    return Err(Error::InvalidParameter(format!(
                        "quadrature weight {i} = {} must be positive and finite",
                        weights[i]
                    )));
                }
            }
            MeasureKind::SimpleNonAtomic { pieces } => {
                if pieces.is_empty() {
                    return Err(Error::InvalidParameter("no pieces".into()));
                }
                let mut ids: Vec<&str> = pieces.iter().map(|p| p.id.as_str()).collect();
                ids.sort_unstable();
                if ids.windows(2).any(|w| w[0] == w[1]) {
                    return Err(Error::InvalidParameter("piece ids must be unique".into()));
                }
                if let Some(p) = pieces
                    .iter()
                    .find(|p| !(p.mass > 0.0) || !p.mass.is_finite() || !p.log_scale.is_finite())
                {
                    return Err(Error::InvalidParameter(format!(
                        "piece `{}` has mass {}·e^{} (must be positive and finite)",
                        p.id, p.mass, p.log_scale
                    )));
                }
            }
        }
        Ok(Self { kind })
    }
}

impl From<MeasureModel> for MeasureKind {
    fn from(m: MeasureModel) -> Self {
        m.kind
    }
}

impl MeasureModel {
    pub fn counting(n_atoms: usize) -> Result<Self> {
        MeasureKind::Counting { n_atoms }.try_into()
    }

    pub fn quad_grid(nodes: Vec<f64>, weights: Vec<f64>) -> Result<Self> {
        MeasureKind::QuadGrid { nodes, weights }.try_into()
    }

    /// Composite trapezoid rule on `n` uniform nodes over `[a, b]`.
    pub fn trapezoid(a: f64, b: f64, n: usize) -> Result<Self> {
        if n < 3 {
            return Err(Error::InvalidParameter(
                "trapezoid grid needs >= 3 nodes".into(),
            ));
        }
        if !(b > a) || !a.is_finite() || !b.is_finite() {
            return Err(Error::InvalidParameter(format!("bad interval [{a}, {b}]")));
        }
        let nodes = (0..n)
            .map(|i| a + (b - a) * i as f64 / (n - 1) as f64)
            .collect();
        Self::trapezoid_on(nodes)
    }

    /// Composite trapezoid weights on arbitrary strictly increasing nodes.
    pub fn trapezoid_on(nodes: Vec<f64>) -> Result<Self> {
        if nodes.len() < 2 {
            return Err(Error::InvalidParameter(
                "trapezoid grid needs >= 2 nodes".into(),
            ));
        }
        let n = nodes.len();
        let mut weights = vec![0.0; n];
        for i in 0..n - 1 {
            let h = 0.5 * (nodes[i + 1] - nodes[i]);
            weights[i] += h;
            weights[i + 1] += h;
        }
        Self::quad_grid(nodes, weights)
    }

    pub fn simple_non_atomic(pieces: Vec<Piece>) -> Result<Self> {
        MeasureKind::SimpleNonAtomic { pieces }.try_into()
    }

    pub fn kind(&self) -> &MeasureKind {
        &self.kind
    }

    pub fn len(&self) -> usize {
        match &self.kind {
            MeasureKind::Counting { n_atoms } => *n_atoms,
            MeasureKind::QuadGrid { nodes, .. } => nodes.len(),
            MeasureKind::SimpleNonAtomic { pieces } => pieces.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// `(mass, log_scale)` of atom `i`; its measure is `mass · e^{log_scale}`.
    pub fn weight_parts(&self, i: usize) -> (f64, f64) {
        match &self.kind {
            MeasureKind::Counting { .. } => (1.0, 0.0),
            MeasureKind::QuadGrid { weights, .. } => (weights[i], 0.0),
            MeasureKind::SimpleNonAtomic { pieces } => (pieces[i].mass, pieces[i].log_scale),
        }
    }

    pub fn weight(&self, i: usize) -> f64 {
        let (m, s) = self.weight_parts(i);
        if s == 0.0 {
            m
        } else {
            m * s.exp()
        }
    }

    fn check_len(&self, got: usize) -> Result<()> {
        if got != self.len() {
            return Err(Error::LengthMismatch {
                expected: self.len(),
                got,
            });
        }
        Ok(())
    }

    /// `∫ f dμ` for `f` given per atom. Any `+∞` entry yields `+∞`.
    pub fn integrate(&self, f: &[f64]) -> Result<f64> {
        self.check_len(f.len())?;
        if let Some(i) = f.iter().position(|x| x.is_nan()) {
            return Err(Error::NonFinite {
                index: i,
                value: f[i],
            });
        }
        if f.contains(&f64::INFINITY) {
            return Ok(f64::INFINITY);
        }
        let mut total = 0.0;
        for (i, &x) in f.iter().enumerate() {
            total += self.weight(i) * x;
        }
        Ok(total)
    }

    /// `∫ exp(g) dμ` for `g = ln f` given per atom. Each term is formed as
    /// `mass · exp(log_scale + g)`, so huge densities on tiny pieces combine
    /// without overflow. `g = +∞` yields `+∞`; `g = -∞` contributes zero.
    pub fn integrate_ln(&self, ln_f: &[f64]) -> Result<f64> {
        self.check_len(ln_f.len())?;
        if let Some(i) = ln_f.iter().position(|x| x.is_nan()) {
            return Err(Error::NonFinite {
                index: i,
                value: ln_f[i],
            });
        }
        let mut total = 0.0;
        for (i, &g) in ln_f.iter().enumerate() {
            if g == f64::INFINITY {
                return Ok(f64::INFINITY);
            }
            let (m, s) = self.weight_parts(i);
            total += m * (s + g).exp();
        }
        Ok(total)
    }

    /// Rescales strictly positive `raw` to unit mass.
    pub fn normalize(&self, raw: &[f64]) -> Result<Vec<f64>> {
        self.check_len(raw.len())?;
        if let Some(i) = raw.iter().position(|x| !(*x > 0.0) || !x.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "entry {i} = {} must be positive and finite",
                raw[i]
            )));
        }
        let total = self.integrate(raw)?;
        if !(total > 0.0) || !total.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "total mass {total} cannot be normalized"
            )));
        }
        Ok(raw.iter().map(|x| x / total).collect())
    }

    /// Quadrature nodes, if this is a grid.
    pub fn nodes(&self) -> Option<&[f64]> {
        match &self.kind {
            MeasureKind::QuadGrid { nodes, .. } => Some(nodes),
            _ => None,
        }
    }
}

/// Partial sum of a series plus a declared bound on the omitted tail.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TruncatedSum {
    pub terms: usize,
    #[serde(with = "crate::ext_real")]
    pub partial_sum: f64,
    #[serde(with = "crate::ext_real")]
    pub tail_bound: f64,
}

impl TruncatedSum {
    pub fn upper(&self) -> f64 {
        self.partial_sum + self.tail_bound
    }

    pub fn is_finite(&self) -> bool {
        self.upper().is_finite()
    }
}

/// Two strictly positive densities with unit mass over a shared measure.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProbabilityPair {
    measure: MeasureModel,
    p: Vec<f64>,
    q: Vec<f64>,
}

#[derive(Deserialize)]
struct RawPair {
    measure: MeasureModel,
    p: Vec<f64>,
    q: Vec<f64>,
}

impl<'de> Deserialize<'de> for ProbabilityPair {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = RawPair::deserialize(d)?;
        ProbabilityPair::new(raw.measure, raw.p, raw.q).map_err(serde::de::Error::custom)
    }
}

impl ProbabilityPair {
    /// Validates membership of both densities. Values are kept as given.
    pub fn new(measure: MeasureModel, p: Vec<f64>, q: Vec<f64>) -> Result<Self> {
        check_density(&measure, &p, "p")?;
        check_density(&measure, &q, "q")?;
        Ok(Self { measure, p, q })
    }

    /// Builds a pair from unnormalized positive weights.
    pub fn from_raw(measure: MeasureModel, raw_p: &[f64], raw_q: &[f64]) -> Result<Self> {
        let p = measure.normalize(raw_p)?;
        let q = measure.normalize(raw_q)?;
        Self::new(measure, p, q)
    }

    /// Pair on the counting measure.
    pub fn discrete(p: Vec<f64>, q: Vec<f64>) -> Result<Self> {
        let m = MeasureModel::counting(p.len())?;
        Self::new(m, p, q)
    }

    pub fn measure(&self) -> &MeasureModel {
        &self.measure
    }

    pub fn p(&self) -> &[f64] {
        &self.p
    }

    pub fn q(&self) -> &[f64] {
        &self.q
    }

    pub fn len(&self) -> usize {
        self.p.len()
    }

    pub fn is_empty(&self) -> bool {
        self.p.is_empty()
    }

    /// The pair with `p` and `q` exchanged.
    pub fn swapped(&self) -> Self {
        Self {
            measure: self.measure.clone(),
            p: self.q.clone(),
            q: self.p.clone(),
        }
    }

    pub fn is_identical(&self) -> bool {
        self.p == self.q
    }

    /// Rescales each density to unit mass when it is off by more than
    /// `1e-12`; values already at unit mass are left bit-for-bit unchanged.
    pub fn to_unit_mass(mut self) -> Result<Self> {
        for v in [&mut self.p, &mut self.q] {
            let mass = self.measure.integrate(v)?;
            if (mass - 1.0).abs() > 1e-12 {
                v.iter_mut().for_each(|x| *x /= mass);
            }
        }
        Ok(self)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    /// CSV: `atom,p,q` for counting measures, `node,weight,p,q` for grids.
    /// Floats are written with 17 significant digits.
    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut wtr = csv::Writer::from_writer(w);
        match self.measure.kind() {
            MeasureKind::Counting { .. } => {
                wtr.write_record(["atom", "p", "q"])?;
                for i in 0..self.len() {
                    wtr.write_record([i.to_string(), fmt17(self.p[i]), fmt17(self.q[i])])?;
                }
            }
            MeasureKind::QuadGrid { nodes, weights } => {
                wtr.write_record(["node", "weight", "p", "q"])?;
                for i in 0..self.len() {
                    wtr.write_record([
                        fmt17(nodes[i]),
                        fmt17(weights[i]),
                        fmt17(self.p[i]),
                        fmt17(self.q[i]),
                    ])?;
                }
            }
            MeasureKind::SimpleNonAtomic { .. } => {
                return Err(Error::InvalidParameter(
                    "simple-function pairs serialize to JSON only".into(),
                ))
            }
        }
        wtr.flush()?;
        Ok(())
    }

    pub fn read_csv<R: Read>(r: R) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new()
            .trim(csv::Trim::All)
            .from_reader(r);
        let header: Vec<String> = rdr.headers()?.iter().map(str::to_string).collect();
        let header: Vec<&str> = header.iter().map(String::as_str).collect();
        let grid = match header.as_slice() {
            ["atom", "p", "q"] => false,
            ["node", "weight", "p", "q"] => true,
            other => {
                return Err(Error::Parse(format!(
                    "expected header `atom,p,q` or `node,weight,p,q`, found `{}`",
                    other.join(",")
                )))
            }
        };
        let (mut nodes, mut weights, mut p, mut q) = (vec![], vec![], vec![], vec![]);
        for rec in rdr.records() {
            let rec = rec?;
            let row = rec.position().map_or(0, |pos| pos.line() as usize);
            let field = |k: usize| -> Result<f64> {
                rec[k].parse::<f64>().map_err(|e| Error::InvalidRow {
                    row,
                    msg: format!("column {}: `{}`: {e}", header[k], &rec[k]),
                })
            };
            if grid {
                nodes.push(field(0)?);
                weights.push(field(1)?);
                p.push(field(2)?);
                q.push(field(3)?);
            } else {
                rec[0].parse::<u64>().map_err(|e| Error::InvalidRow {
                    row,
                    msg: format!("atom `{}`: {e}", &rec[0]),
                })?;
                p.push(field(1)?);
                q.push(field(2)?);
            }
            for (name, v) in [("p", *p.last().unwrap()), ("q", *q.last().unwrap())] {
                if !(v > 0.0) || !v.is_finite() {
                    return Err(Error::InvalidRow {
                        row,
                        msg: format!("{name} = {v} must be strictly positive and finite"),
                    });
                }
            }
        }
        let measure = if grid {
            MeasureModel::quad_grid(nodes, weights)?
        } else {
            MeasureModel::counting(p.len())?
        };
        Self::new(measure, p, q)
    }
}

fn check_density(m: &MeasureModel, v: &[f64], name: &str) -> Result<()> {
    if v.len() != m.len() {
        return Err(Error::LengthMismatch {
            expected: m.len(),
            got: v.len(),
        });
    }
    if let Some(i) = v.iter().position(|x| !(*x > 0.0) || !x.is_finite()) {
        return Err(Error::InvalidPair(format!(
            "{name}[{i}] = {} must be strictly positive and finite",
            v[i]
        )));
    }
    let mass = m.integrate(v)?;
    if (mass - 1.0).abs() > MASS_TOLERANCE {
        return Err(Error::InvalidPair(format!(
            "{name} integrates to {mass}, not 1"
        )));
    }
    Ok(())
}

/// Float with 17 significant digits.
pub fn fmt17(x: f64) -> String {
    format!("{x:.16e}")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PairFormat {
    Csv,
    Json,
}

impl PairFormat {
    pub fn from_path(path: &Path) -> Result<Self> {
        match path.extension().and_then(|e| e.to_str()) {
            Some("csv") => Ok(PairFormat::Csv),
            Some("json") => Ok(PairFormat::Json),
            _ => Err(Error::Parse(format!(
                "cannot infer pair format from `{}` (use .csv or .json)",
                path.display()
            ))),
        }
    }
}

/// Loads and validates a pair, then rescales it to unit mass.
pub fn load_pair(path: &Path, format: Option<PairFormat>) -> Result<ProbabilityPair> {
    let format = match format {
        Some(f) => f,
        None => PairFormat::from_path(path)?,
    };
    let file = std::fs::File::open(path)?;
    let pair = match format {
        PairFormat::Csv => ProbabilityPair::read_csv(file)?,
        PairFormat::Json => {
            let mut text = String::new();
            std::io::BufReader::new(file).read_to_string(&mut text)?;
            ProbabilityPair::from_json(&text)?
        }
    };
    pair.to_unit_mass()
}

pub fn save_pair(pair: &ProbabilityPair, path: &Path, format: Option<PairFormat>) -> Result<()> {
    let format = match format {
        Some(f) => f,
        None => PairFormat::from_path(path)?,
    };
    let file = std::fs::File::create(path)?;
    match format {
        PairFormat::Csv => pair.write_csv(file),
        PairFormat::Json => {
            let mut w = std::io::BufWriter::new(file);
            w.write_all(pair.to_json()?.as_bytes())?;
            Ok(())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn integrate_examples() {
        let m = MeasureModel::counting(3).unwrap();
        assert!((m.integrate(&[0.2, 0.3, 0.5]).unwrap() - 1.0).abs() < 1e-15);

        let g = MeasureModel::trapezoid(0.0, 1.0, 1001).unwrap();
        let uniform = vec![1.0; 1001];
        assert!((g.integrate(&uniform).unwrap() - 1.0).abs() < 1e-9);

        let pieces = (1..=20)
            .map(|n| Piece::new(format!("n{n}"), 0.5f64.powi(n)))
            .collect();
        let s = MeasureModel::simple_non_atomic(pieces).unwrap();
        let total = s.integrate(&[1.0; 20]).unwrap();
        assert_eq!(total, 1.0 - 0.5f64.powi(20));
    }

    #[test]
    fn integrate_propagates_saturation_and_checks_length() {
        let m = MeasureModel::counting(3).unwrap();
        assert_eq!(
            m.integrate(&[1.0, f64::INFINITY, 2.0]).unwrap(),
            f64::INFINITY
        );
        assert!(matches!(
            m.integrate(&[1.0, 2.0]),
            Err(Error::LengthMismatch {
                expected: 3,
                got: 2
            })
        ));
        assert!(m.integrate(&[1.0, f64::NAN, 2.0]).is_err());
        assert_eq!(
            m.integrate_ln(&[0.0, f64::INFINITY, 0.0]).unwrap(),
            f64::INFINITY
        );
        assert_eq!(m.integrate_ln(&[0.0, f64::NEG_INFINITY, 0.0]).unwrap(), 2.0);
    }

    #[test]
    fn log_scaled_pieces_stay_exact() {
        // mass 2^{-n} e^{-h}, density e^{h}: each term is exactly 2^{-n}
        let h = 0.5 * 61.0 * 61.0;
        let m = MeasureModel::simple_non_atomic(vec![Piece::scaled("a", 0.25, -h)]).unwrap();
        assert_eq!(m.integrate_ln(&[h]).unwrap(), 0.25);
        assert_eq!(m.weight(0), 0.0); // underflows in linear form
    }

    #[test]
    fn trapezoid_exact_on_linear_functions() {
        let g = MeasureModel::trapezoid(-2.0, 3.0, 257).unwrap();
        let nodes = g.nodes().unwrap().to_vec();
        let f: Vec<f64> = nodes.iter().map(|x| 3.0 * x - 1.0).collect();
        // ∫_{-2}^{3} (3x - 1) dx = 1.5(9 - 4) - 5 = 2.5
        assert!((g.integrate(&f).unwrap() - 2.5).abs() < 1e-12);
    }

    #[test]
    fn normalize_examples() {
        let m = MeasureModel::counting(2).unwrap();
        assert_eq!(m.normalize(&[1.0, 1.0]).unwrap(), vec![0.5, 0.5]);
        let m = MeasureModel::counting(4).unwrap();
        let n = m.normalize(&[1.0, 2.0, 3.0, 4.0]).unwrap();
        for (a, b) in n.iter().zip([0.1, 0.2, 0.3, 0.4]) {
            assert!((a - b).abs() < 1e-15);
        }
        assert!(m.normalize(&[1.0, 0.0, 1.0, 1.0]).is_err());
        assert!(m.normalize(&[1.0, f64::INFINITY, 1.0, 1.0]).is_err());

        // e^{-x} on [0, 10]: closed-form normalizer 1 - e^{-10}
        let g = MeasureModel::trapezoid(0.0, 10.0, 4001).unwrap();
        let raw: Vec<f64> = g.nodes().unwrap().iter().map(|x| (-x).exp()).collect();
        let dens = g.normalize(&raw).unwrap();
        let z = 1.0 - (-10f64).exp();
        // trapezoid error on h = 2.5e-3 is h²/12 · (1 - e^{-10}) ≈ 5e-7 relative
        assert!((dens[0] - 1.0 / z).abs() < 1e-6);
    }

    #[test]
    fn measure_validation() {
        assert!(MeasureModel::counting(0).is_err());
        assert!(MeasureModel::quad_grid(vec![0.0, 1.0], vec![1.0]).is_err());
        assert!(MeasureModel::quad_grid(vec![1.0, 0.0], vec![1.0, 1.0]).is_err());
        assert!(MeasureModel::quad_grid(vec![0.0, 1.0], vec![1.0, 0.0]).is_err());
        assert!(
            MeasureModel::simple_non_atomic(vec![Piece::new("a", 1.0), Piece::new("a", 2.0)])
                .is_err()
        );
        assert!(MeasureModel::simple_non_atomic(vec![Piece::new("a", -1.0)]).is_err());
        let bad: std::result::Result<MeasureModel, _> =
            serde_json::from_str(r#"{"kind":"counting","n_atoms":0}"#);
        assert!(bad.is_err());
    }

    #[test]
    fn pair_validation() {
        assert!(ProbabilityPair::discrete(vec![0.5, 0.5], vec![0.9, 0.1]).is_ok());
        assert!(ProbabilityPair::discrete(vec![0.5, 0.5], vec![1.0, 0.0]).is_err());
        assert!(ProbabilityPair::discrete(vec![0.5, 0.6], vec![0.9, 0.1]).is_err());
        assert!(ProbabilityPair::discrete(vec![0.5, 0.5], vec![0.9]).is_err());
        let p = ProbabilityPair::discrete(vec![0.5, 0.5], vec![0.9, 0.1]).unwrap();
        assert_eq!(p.swapped().p(), &[0.9, 0.1]);
    }

    #[test]
    fn csv_round_trip_counting_and_grid() {
        let pair = ProbabilityPair::from_raw(
            MeasureModel::counting(4).unwrap(),
            &[1.0, 2.0, 3.0, 4.0],
            &[0.3, 0.3, 0.2, 0.7],
        )
        .unwrap();
        let mut buf = Vec::new();
        pair.write_csv(&mut buf).unwrap();
        let back = ProbabilityPair::read_csv(buf.as_slice()).unwrap();
        assert_eq!(back, pair);

        let g = MeasureModel::trapezoid(0.0, 1.0, 33).unwrap();
        let raw_q: Vec<f64> = g.nodes().unwrap().iter().map(|x| 1.0 + x).collect();
        let pair = ProbabilityPair::from_raw(g, &[1.0; 33], &raw_q).unwrap();
        let mut buf = Vec::new();
        pair.write_csv(&mut buf).unwrap();
        assert!(String::from_utf8(buf.clone())
            .unwrap()
            .starts_with("node,weight,p,q\n"));
        let back = ProbabilityPair::read_csv(buf.as_slice()).unwrap();
        assert_eq!(back, pair);
        let json = pair.to_json().unwrap();
        assert_eq!(ProbabilityPair::from_json(&json).unwrap(), pair);
    }

    #[test]
    fn csv_errors_name_rows() {
        let err =
            ProbabilityPair::read_csv("atom,p,q\n0,0.5,0.5\n1,0,0.5\n".as_bytes()).unwrap_err();
        assert!(matches!(err, Error::InvalidRow { row: 3, .. }), "{err:?}");
        let err = ProbabilityPair::read_csv("atom,p,q\n0,0.5,0.5,9\n".as_bytes()).unwrap_err();
        assert!(matches!(err, Error::InvalidRow { .. }), "{err:?}");
        let err = ProbabilityPair::read_csv("a,b\n0,1\n".as_bytes()).unwrap_err();
        assert!(matches!(err, Error::Parse(_)));
        let err =
            ProbabilityPair::read_csv("atom,p,q\n0,0.5,x\n1,0.5,0.5\n".as_bytes()).unwrap_err();
        assert!(matches!(err, Error::InvalidRow { row: 2, .. }), "{err:?}");
    }

    #[test]
    fn unit_mass_rescaling() {
        let m = MeasureModel::counting(2).unwrap();
        let pair = ProbabilityPair::new(m, vec![0.5, 0.5 + 4e-10], vec![0.5, 0.5]).unwrap();
        let fixed = pair.clone().to_unit_mass().unwrap();
        let mass: f64 = fixed.p().iter().sum();
        assert!((mass - 1.0).abs() < 1e-15);
        assert_eq!(fixed.q(), pair.q());
    }
}
