use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use deformed_renyi::deformed_exp::Family;
use deformed_renyi::existence::{
    check_construction, default_u_grid, default_v_grid, geometric_lambdas, probe_grid,
    ConstructionStatus, DemoTable, SoundnessReport, DEFAULT_THRESHOLD,
};
use deformed_renyi::measures::{fmt17, load_pair, MeasureModel};
use deformed_renyi::{
    adversarial_nonexistence_demo, alpha_sweep, classical_renyi, construct_u0_sequence,
    generalized_renyi, growth_envelope_check, kl_divergence, par, pointwise_inequality_probe,
    ratio_limsup_probe, solve_kappa, verify_kaniadakis_u0, AdversarialPair, DeformedExp, Error,
    Execution, KappaSolveResult, ProbabilityPair, SolveStatus, SolverConfig, U0Construction,
    Verdict, U0,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

const EXIT_VALIDATION: u8 = 2;
const EXIT_SOLVER: u8 = 3;
const EXIT_INCONCLUSIVE: u8 = 4;
const EXIT_USAGE: u8 = 64;

/// Generalized Rényi divergences through deformed exponentials.
#[derive(Parser, Debug)]
#[command(name = "deformed-div", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Solve for κ(α) and report D = κ / (α(1 - α)).
    Divergence(SolveArgs),
    /// Full solver diagnostics for one α.
    Kappa(SolveArgs),
    /// Divergence over an α grid.
    Sweep(SweepArgs),
    /// Existence-condition probes.
    #[command(subcommand)]
    Probe(Probe),
    /// Construct a summable u₀ sequence for the counting measure.
    #[command(name = "construct-u0")]
    ConstructU0(ConstructArgs),
    /// Level-set tables showing that no κ exists for a constant u₀.
    #[command(name = "demo-counterexample")]
    DemoCounterexample(DemoArgs),
    /// Check convexity and monotonicity of φ on a grid.
    #[command(name = "validate-phi")]
    ValidatePhi(ValidateArgs),
    /// Compare against closed forms for the classical exponential.
    Oracle(OracleArgs),
}

#[derive(Subcommand, Debug)]
enum Probe {
    /// limsup of φ(u) / φ(u - λ₀).
    Ratio(RatioArgs),
    /// Search for c with αφ(u) ≤ φ(u - u₀) for u > c.
    Inequality(InequalityArgs),
    /// φ(u + v) ≤ K φ(u) e^{λv} on a sampled grid.
    Envelope(EnvelopeArgs),
    /// Certificate for the Kaniadakis family.
    Kaniadakis(KaniadakisArgs),
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum FamilyName {
    Exp,
    Tsallis,
    Kaniadakis,
    Counterexample,
    Tabulated,
}

#[derive(Args, Debug)]
struct FamilyArgs {
    #[arg(long, value_enum, default_value = "exp")]
    family: FamilyName,
    /// Tsallis parameter.
    #[arg(long, allow_negative_numbers = true)]
    q: Option<f64>,
    /// Kaniadakis parameter.
    #[arg(long, allow_negative_numbers = true)]
    kappa: Option<f64>,
    /// CSV with header `u,phi` for the tabulated family.
    #[arg(long)]
    knots: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct Common {
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    /// Exit with status 4 when a probe is inconclusive.
    #[arg(long)]
    strict: bool,
}

#[derive(Args, Debug)]
struct SolveArgs {
    #[command(flatten)]
    family: FamilyArgs,
    /// CSV (`atom,p,q` or `node,weight,p,q`) or JSON pair.
    #[arg(long)]
    pair: PathBuf,
    #[arg(long, allow_negative_numbers = true)]
    alpha: f64,
    /// `const:<x>`, `seq:<csv-path>` or `constructed:<json-path>`.
    #[arg(long, default_value = "const:1")]
    u0: String,
    #[arg(long, allow_negative_numbers = true, default_value_t = 1e-12)]
    tol: f64,
    #[command(flatten)]
    common: Common,
}

#[derive(Args, Debug)]
struct SweepArgs {
    #[command(flatten)]
    family: FamilyArgs,
    #[arg(long)]
    pair: PathBuf,
    #[arg(long, default_value = "const:1")]
    u0: String,
    /// Explicit α values, comma separated. Overrides the grid.
    #[arg(long, allow_negative_numbers = true, value_delimiter = ',')]
    alphas: Option<Vec<f64>>,
    /// Number of interior grid points `k / (n + 1)`.
    #[arg(long, default_value_t = 19)]
    points: usize,
    #[arg(long, allow_negative_numbers = true, default_value_t = 1e-12)]
    tol: f64,
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
}

#[derive(Args, Debug)]
struct RatioArgs {
    #[command(flatten)]
    family: FamilyArgs,
    #[arg(long, allow_negative_numbers = true, default_value_t = 1.0)]
    lambda0: f64,
    #[arg(long, allow_negative_numbers = true, default_value_t = 200.0)]
    umax: f64,
    #[arg(long, allow_negative_numbers = true, default_value_t = DEFAULT_THRESHOLD)]
    threshold: f64,
    #[command(flatten)]
    common: Common,
}

#[derive(Args, Debug)]
struct InequalityArgs {
    #[command(flatten)]
    family: FamilyArgs,
    #[arg(long, allow_negative_numbers = true)]
    alpha: f64,
    /// Shift u₀ > 0.
    #[arg(long, allow_negative_numbers = true, default_value_t = 1.0)]
    shift: f64,
    #[arg(long, allow_negative_numbers = true, default_value_t = 200.0)]
    umax: f64,
    #[command(flatten)]
    common: Common,
}

#[derive(Args, Debug)]
struct EnvelopeArgs {
    #[command(flatten)]
    family: FamilyArgs,
    /// Ratio bound K ≥ 1.
    #[arg(long, allow_negative_numbers = true)]
    k: f64,
    #[arg(long, allow_negative_numbers = true, default_value_t = 1.0)]
    lambda0: f64,
    /// Lower end c of the checked u range.
    #[arg(long, allow_negative_numbers = true, default_value_t = 0.0)]
    c: f64,
    #[arg(long, allow_negative_numbers = true, default_value_t = 100.0)]
    umax: f64,
    #[command(flatten)]
    common: Common,
}

#[derive(Args, Debug)]
struct KaniadakisArgs {
    #[arg(long, allow_negative_numbers = true)]
    kappa: f64,
    #[arg(long, allow_negative_numbers = true)]
    alpha: f64,
    #[command(flatten)]
    common: Common,
}

#[derive(Args, Debug)]
struct ConstructArgs {
    #[command(flatten)]
    family: FamilyArgs,
    #[arg(long, allow_negative_numbers = true, default_value_t = 0.5)]
    alpha: f64,
    /// λ_n = first · ratio^(n-1).
    #[arg(long, allow_negative_numbers = true, default_value_t = 0.5)]
    lambda_first: f64,
    #[arg(long, allow_negative_numbers = true, default_value_t = 0.5)]
    lambda_ratio: f64,
    #[arg(long, default_value_t = 200)]
    lambda_len: usize,
    #[arg(long, allow_negative_numbers = true)]
    eta: Option<f64>,
    #[arg(long, allow_negative_numbers = true, default_value_t = 1.0)]
    target: f64,
    #[arg(long, default_value_t = 32)]
    atoms: usize,
    #[command(flatten)]
    common: Common,
}

#[derive(Args, Debug)]
struct DemoArgs {
    #[arg(long, allow_negative_numbers = true, default_value_t = 1.0)]
    lambda: f64,
    #[arg(long, default_value_t = 60)]
    pieces: usize,
    /// Blocks in the adversarial pair handed to the solver.
    #[arg(long, default_value_t = 40)]
    blocks: usize,
    #[arg(long, allow_negative_numbers = true, default_value_t = 0.5)]
    alpha: f64,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
}

#[derive(Args, Debug)]
struct ValidateArgs {
    #[command(flatten)]
    family: FamilyArgs,
    #[arg(long, allow_negative_numbers = true, default_value_t = -100.0)]
    umin: f64,
    #[arg(long, allow_negative_numbers = true, default_value_t = 100.0)]
    umax: f64,
    #[arg(long, default_value_t = 2001)]
    points: usize,
}

#[derive(Args, Debug)]
struct OracleArgs {
    /// Pair to check. Random pairs are drawn when absent.
    #[arg(long)]
    pair: Option<PathBuf>,
    #[arg(long, allow_negative_numbers = true, default_value_t = 0.5)]
    alpha: f64,
    /// Number of random pairs.
    #[arg(long, default_value_t = 100)]
    count: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, allow_negative_numbers = true, default_value_t = 1e-12)]
    tol: f64,
}

#[derive(Debug)]
enum Failure {
    Validation(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Validation(e.to_string())
    }
}

type Run = Result<u8, Failure>;

fn family(a: &FamilyArgs) -> Result<DeformedExp, Failure> {
    let need = |v: Option<f64>, flag: &str| {
        v.ok_or_else(|| {
            let name = a
                .family
                .to_possible_value()
                .map(|p| p.get_name().to_string());
            Failure::Validation(format!(
                "--family {} needs --{flag}",
                name.unwrap_or_default()
            ))
        })
    };
    Ok(match a.family {
        FamilyName::Exp => DeformedExp::exp(),
        FamilyName::Counterexample => DeformedExp::counterexample(),
        FamilyName::Tsallis => DeformedExp::new(Family::TsallisQ { q: need(a.q, "q")? })?,
        FamilyName::Kaniadakis => DeformedExp::new(Family::KaniadakisKappa {
            kappa: need(a.kappa, "kappa")?,
        })?,
        FamilyName::Tabulated => {
            let path = a
                .knots
                .as_ref()
                .ok_or_else(|| Failure::Validation("--family tabulated needs --knots".into()))?;
            DeformedExp::tabulated_from_csv(fs::File::open(path).map_err(Error::from)?)?
        }
    })
}

fn parse_u0(u0_arg: &str) -> Result<U0, Failure> {
    let bad = || {
        Failure::Validation(format!(
            "bad --u0 `{u0_arg}`; use const:<x>, seq:<csv>, constructed:<json>"
        ))
    };
    let (kind, rest) = u0_arg.split_once(':').ok_or_else(bad)?;
    match kind {
        "const" => {
            let v: f64 = rest.parse().map_err(|_| bad())?;
            Ok(U0::constant(v))
        }
        "seq" => {
            let text = fs::read_to_string(rest).map_err(Error::from)?;
            let mut values = Vec::new();
            for (i, line) in text.lines().enumerate() {
                let field = line.split(',').next().unwrap_or("").trim();
                if field.is_empty() {
                    continue;
                }
                match field.parse::<f64>() {
                    Ok(v) => values.push(v),
                    // header
                    Err(_) if i == 0 => {}
                    Err(e) => {
                        return Err(Error::InvalidRow {
                            row: i + 1,
                            msg: e.to_string(),
                        }
                        .into())
                    }
                }
            }
            Ok(U0::Values { values })
        }
        "constructed" => {
            let c = U0Construction::from_json(&fs::read_to_string(rest).map_err(Error::from)?)?;
            Ok(c.u0())
        }
        _ => Err(bad()),
    }
}

fn config(tol: f64) -> Result<SolverConfig, Failure> {
    let c = SolverConfig {
        tol,
        ..SolverConfig::default()
    };
    c.validate()?;
    Ok(c)
}

/// A closed pipe downstream is not an error.
fn write_out(text: &str) -> Result<(), Failure> {
    match io::stdout().lock().write_all(text.as_bytes()) {
        Err(e) if e.kind() != io::ErrorKind::BrokenPipe => Err(Failure::Validation(e.to_string())),
        _ => Ok(()),
    }
}

fn emit_json<T: Serialize>(value: &T) -> Result<(), Failure> {
    let text =
        serde_json::to_string_pretty(value).map_err(|e| Failure::Validation(e.to_string()))?;
    write_out(&(text + "\n"))
}

fn emit_csv(header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> Result<(), Failure> {
    let mut text = header.join(",");
    text.push('\n');
    for row in rows {
        text.push_str(&row.join(","));
        text.push('\n');
    }
    write_out(&text)
}

fn num(x: f64) -> String {
    fmt17(x)
}

fn opt(x: Option<f64>) -> String {
    x.map(num).unwrap_or_default()
}

fn solver_exit(status: SolveStatus) -> u8 {
    match status {
        SolveStatus::Converged => 0,
        SolveStatus::DivergentIntegral | SolveStatus::BracketFailure => EXIT_SOLVER,
    }
}

fn strict_exit(strict: bool, conclusive: bool) -> u8 {
    if strict && !conclusive {
        EXIT_INCONCLUSIVE
    } else {
        0
    }
}

fn load(path: &Path) -> Result<ProbabilityPair, Failure> {
    Ok(load_pair(path, None)?)
}

fn divergence(a: &SolveArgs) -> Run {
    let phi = family(&a.family)?;
    let pair = load(&a.pair)?;
    let u0 = parse_u0(&a.u0)?;
    let r = generalized_renyi(&phi, &pair, a.alpha, &u0, &config(a.tol)?)?;
    match a.common.format {
        Format::Json => emit_json(&r)?,
        Format::Csv => emit_csv(
            &["alpha", "kappa", "D", "status"],
            [vec![
                num(r.alpha),
                num(r.kappa),
                opt(r.value),
                r.status.to_string(),
            ]],
        )?,
    }
    Ok(solver_exit(r.status))
}

fn kappa(a: &SolveArgs) -> Run {
    let phi = family(&a.family)?;
    let pair = load(&a.pair)?;
    let u0 = parse_u0(&a.u0)?;
    let r: KappaSolveResult = solve_kappa(&phi, &pair, a.alpha, &u0, &config(a.tol)?)?;
    match a.common.format {
        Format::Json => emit_json(&r)?,
        Format::Csv => emit_csv(
            &["alpha", "kappa", "residual", "iterations", "status"],
            [vec![
                num(r.alpha),
                num(r.kappa),
                num(r.residual),
                r.iterations.to_string(),
                r.status.to_string(),
            ]],
        )?,
    }
    Ok(solver_exit(r.status))
}

fn sweep(a: &SweepArgs) -> Run {
    let phi = family(&a.family)?;
    let pair = load(&a.pair)?;
    let u0 = parse_u0(&a.u0)?;
    let alphas = match &a.alphas {
        Some(v) => v.clone(),
        None => {
            if a.points == 0 {
                return Err(Failure::Validation("--points must be positive".into()));
            }
            (1..=a.points)
                .map(|k| k as f64 / (a.points + 1) as f64)
                .collect()
        }
    };
    let rows = alpha_sweep(
        &phi,
        &pair,
        &alphas,
        &u0,
        &config(a.tol)?,
        Execution::Parallel,
    )?;
    match a.format {
        Format::Json => emit_json(&rows)?,
        Format::Csv => emit_csv(
            &["alpha", "kappa", "D", "status"],
            rows.iter().map(|r| {
                vec![
                    num(r.alpha),
                    num(r.kappa),
                    opt(r.value),
                    r.status.to_string(),
                ]
            }),
        )?,
    }
    Ok(rows
        .iter()
        .map(|r| solver_exit(r.status))
        .max()
        .unwrap_or(0))
}

fn probe(p: &Probe) -> Run {
    match p {
        Probe::Ratio(a) => {
            let phi = family(&a.family)?;
            let r = ratio_limsup_probe(&phi, a.lambda0, a.umax, a.threshold, Execution::Parallel)?;
            match a.common.format {
                Format::Json => emit_json(&r)?,
                Format::Csv => emit_csv(
                    &["u", "ratio"],
                    r.u_samples
                        .iter()
                        .zip(&r.ratio_samples)
                        .map(|(u, q)| vec![num(*u), num(*q)]),
                )?,
            }
            Ok(strict_exit(
                a.common.strict,
                r.verdict != Verdict::Inconclusive,
            ))
        }
        Probe::Inequality(a) => {
            let phi = family(&a.family)?;
            let a_phi = phi.support_infimum();
            let lo = if a_phi.is_finite() {
                a_phi + a.shift
            } else {
                -50.0
            };
            let (_, hi) = phi.domain();
            let grid = probe_grid(lo.max(phi.domain().0 + a.shift), a.umax.min(hi));
            let r = pointwise_inequality_probe(&phi, a.alpha, a.shift, &grid)?;
            json_only(a.common.format, &r)?;
            Ok(strict_exit(a.common.strict, r.holds))
        }
        Probe::Envelope(a) => {
            let phi = family(&a.family)?;
            let grid = default_u_grid(&phi, a.c, a.umax);
            let r = growth_envelope_check(
                &phi,
                a.k,
                a.lambda0,
                a.c,
                &grid,
                &default_v_grid(),
                Execution::Parallel,
            )?;
            json_only(a.common.format, &r)?;
            Ok(strict_exit(a.common.strict, r.holds))
        }
        Probe::Kaniadakis(a) => {
            let r = verify_kaniadakis_u0(a.kappa, a.alpha)?;
            json_only(a.common.format, &r)?;
            Ok(strict_exit(a.common.strict, r.check && r.v0_matches))
        }
    }
}

fn json_only<T: Serialize>(format: Format, value: &T) -> Result<(), Failure> {
    match format {
        Format::Json => emit_json(value),
        Format::Csv => Err(Failure::Validation(
            "this report has no tabular form; use --format json".into(),
        )),
    }
}

fn construct(a: &ConstructArgs) -> Run {
    let phi = family(&a.family)?;
    let lambdas = geometric_lambdas(a.lambda_first, a.lambda_ratio, a.lambda_len);
    let c = construct_u0_sequence(
        &phi,
        a.alpha,
        &lambdas,
        a.eta,
        a.target,
        a.atoms,
        Execution::Parallel,
    )?;
    match a.common.format {
        Format::Json => emit_json(&c)?,
        Format::Csv => emit_csv(
            &["i", "lambda_index", "u0", "c", "phi_c_bound"],
            (0..c.len()).map(|i| {
                vec![
                    (i + 1).to_string(),
                    c.lambda_indices[i].to_string(),
                    num(c.u0_sequence[i]),
                    num(c.c_sequence[i]),
                    num(c.phi_c_bounds[i]),
                ]
            }),
        )?,
    }
    let sound: SoundnessReport = check_construction(&phi, &c, Execution::Parallel)?;
    let conclusive = c.status == ConstructionStatus::Certified && sound.violations == 0;
    Ok(strict_exit(a.common.strict, conclusive))
}

#[derive(Serialize)]
struct DemoReport {
    table: DemoTable,
    adversarial_solve: KappaSolveResult,
}

fn demo(a: &DemoArgs) -> Run {
    let table = adversarial_nonexistence_demo(a.lambda, a.pieces)?;
    match a.format {
        Format::Json => {
            let pair = AdversarialPair::from_demo_template(a.blocks)?;
            let solve = pair.solve(a.alpha, &SolverConfig::default())?;
            emit_json(&DemoReport {
                table,
                adversarial_solve: solve,
            })?
        }
        Format::Csv => emit_csv(
            &[
                "n",
                "c",
                "ln_mass",
                "term_phi_c",
                "partial_phi_c",
                "term_shifted",
                "partial_shifted",
            ],
            table.rows.iter().map(|r| {
                vec![
                    r.n.to_string(),
                    num(r.c),
                    num(r.ln_mass),
                    num(r.term_phi_c),
                    num(r.partial_phi_c),
                    num(r.term_shifted),
                    num(r.partial_shifted),
                ]
            }),
        )?,
    }
    Ok(0)
}

fn validate(a: &ValidateArgs) -> Run {
    let phi = family(&a.family)?;
    if a.points < 3 || a.umax.partial_cmp(&a.umin) != Some(std::cmp::Ordering::Greater) {
        return Err(Failure::Validation(
            "need --points >= 3 and --umax > --umin".into(),
        ));
    }
    let (lo, hi) = phi.domain();
    let (umin, umax) = (a.umin.max(lo), a.umax.min(hi));
    let grid: Vec<f64> = (0..a.points)
        .map(|i| umin + (umax - umin) * i as f64 / (a.points - 1) as f64)
        .collect();
    let r = phi.validate(&grid)?;
    emit_json(&r)?;
    Ok(if r.violation_count() == 0 {
        0
    } else {
        EXIT_VALIDATION
    })
}

#[derive(Serialize)]
struct OracleCase {
    size: usize,
    generalized: Option<f64>,
    classical: f64,
    abs_error: Option<f64>,
    kl_pq: f64,
    kl_qp: f64,
}

#[derive(Serialize)]
struct OracleReport {
    alpha: f64,
    seed: Option<u64>,
    max_abs_error: Option<f64>,
    cases: Vec<OracleCase>,
}

fn oracle(a: &OracleArgs) -> Run {
    let pairs = match &a.pair {
        Some(path) => vec![load(path)?],
        None => {
            let mut rng = ChaCha8Rng::seed_from_u64(a.seed);
            let mut out = Vec::with_capacity(a.count);
            for _ in 0..a.count {
                let n = rng.gen_range(2..=64);
                let p: Vec<f64> = (0..n).map(|_| rng.gen_range(0.01..1.0)).collect();
                let q: Vec<f64> = (0..n).map(|_| rng.gen_range(0.01..1.0)).collect();
                out.push(ProbabilityPair::from_raw(
                    MeasureModel::counting(n)?,
                    &p,
                    &q,
                )?);
            }
            out
        }
    };
    let cfg = config(a.tol)?;
    let cases = par::map(
        Execution::Parallel,
        &pairs,
        |pair| -> Result<OracleCase, Error> {
            let g = generalized_renyi(&DeformedExp::exp(), pair, a.alpha, &U0::one(), &cfg)?;
            let c = classical_renyi(pair, a.alpha)?;
            Ok(OracleCase {
                size: pair.len(),
                generalized: g.value,
                classical: c,
                abs_error: g.value.map(|v| (v - c).abs()),
                kl_pq: kl_divergence(pair)?,
                kl_qp: kl_divergence(&pair.swapped())?,
            })
        },
    )
    .into_iter()
    .collect::<Result<Vec<_>, _>>()?;
    let max_abs_error = cases
        .iter()
        .map(|c| c.abs_error)
        .try_fold(0.0f64, |m, e| e.map(|e| m.max(e)));
    emit_json(&OracleReport {
        alpha: a.alpha,
        seed: a.pair.is_none().then_some(a.seed),
        max_abs_error,
        cases,
    })?;
    Ok(if max_abs_error.is_some() {
        0
    } else {
        EXIT_SOLVER
    })
}

fn run(cli: &Cli) -> Run {
    match &cli.command {
        Command::Divergence(a) => divergence(a),
        Command::Kappa(a) => kappa(a),
        Command::Sweep(a) => sweep(a),
        Command::Probe(p) => probe(p),
        Command::ConstructU0(a) => construct(a),
        Command::DemoCounterexample(a) => demo(a),
        Command::ValidatePhi(a) => validate(a),
        Command::Oracle(a) => oracle(a),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(EXIT_USAGE)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    if let Ok(v) = std::env::var("DEFORMED_DIV_THREADS") {
        match v.trim().parse::<usize>() {
            Ok(n) if n > 0 => {
                par::configure_threads(n);
            }
            _ => {
                eprintln!("error: DEFORMED_DIV_THREADS must be a positive integer, got `{v}`");
                return ExitCode::from(EXIT_USAGE);
            }
        }
    }
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(Failure::Validation(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_VALIDATION)
        }
    }
}
