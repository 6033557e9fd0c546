use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_deformed-div"));
    c.env_remove("DEFORMED_DIV_THREADS");
    c
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("spawn deformed-div")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| {
        panic!(
            "stdout is not JSON ({e}): {}",
            String::from_utf8_lossy(&o.stdout)
        )
    })
}

fn schema_path(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("schemas")
        .join(format!("{name}.schema.json"))
}

fn assert_schema(name: &str, doc: &Value) {
    let schema: Value =
        serde_json::from_str(&fs::read_to_string(schema_path(name)).unwrap()).unwrap();
    let compiled = jsonschema::JSONSchema::compile(&schema).expect("schema compiles");
    if let Err(errors) = compiled.validate(doc) {
        let msgs: Vec<String> = errors
            .map(|e| format!("{} at {}", e, e.instance_path))
            .collect();
        panic!("{name} output violates its schema: {msgs:#?}");
    };
}

struct Files {
    dir: TempDir,
}

impl Files {
    fn new() -> Self {
        let dir = tempfile::tempdir().unwrap();
        fs::write(
            dir.path().join("pair.csv"),
            "atom,p,q\n0,0.5,0.9\n1,0.5,0.1\n",
        )
        .unwrap();
        fs::write(
            dir.path().join("identical.csv"),
            "atom,p,q\n0,0.2,0.2\n1,0.3,0.3\n2,0.5,0.5\n",
        )
        .unwrap();
        fs::write(
            dir.path().join("bad.csv"),
            "atom,p,q\n0,0.5,-0.9\n1,0.5,0.1\n",
        )
        .unwrap();
        Self { dir }
    }

    fn path(&self, name: &str) -> String {
        self.dir.path().join(name).to_str().unwrap().to_string()
    }
}

#[test]
fn divergence_matches_closed_form() {
    let f = Files::new();
    let o = run(&[
        "divergence",
        "--family",
        "exp",
        "--u0",
        "const:1",
        "--pair",
        &f.path("pair.csv"),
        "--alpha",
        "0.5",
    ]);
    assert_eq!(code(&o), 0);
    let v = json(&o);
    let s: f64 = (0.5f64 * 0.9).sqrt() + (0.5f64 * 0.1).sqrt();
    let oracle = -s.ln() / 0.25;
    assert!((v["value"].as_f64().unwrap() - oracle).abs() < 1e-9);
    assert_eq!(v["status"], "converged");
    assert_schema("divergence", &v);
}

#[test]
fn identical_pair_gives_zero() {
    let f = Files::new();
    let o = run(&[
        "divergence",
        "--family",
        "exp",
        "--pair",
        &f.path("identical.csv"),
        "--alpha",
        "0.3",
    ]);
    assert_eq!(code(&o), 0);
    let v = json(&o);
    assert_eq!(v["value"].as_f64(), Some(0.0));
    assert_eq!(v["kappa"].as_f64(), Some(0.0));
}

#[test]
fn counterexample_ratio_is_unbounded() {
    let o = run(&[
        "probe",
        "ratio",
        "--family",
        "counterexample",
        "--lambda0",
        "1",
        "--umax",
        "100",
    ]);
    assert_eq!(code(&o), 0);
    let v = json(&o);
    assert_eq!(v["verdict"]["kind"], "unbounded");
    assert_schema("probe-ratio", &v);
}

#[test]
fn exit_codes() {
    let f = Files::new();
    assert_eq!(code(&run(&["divergence", "--nonsense"])), 64);
    assert_eq!(code(&run(&["frobnicate"])), 64);
    assert_eq!(code(&run(&[])), 64);
    assert_eq!(code(&run(&["--help"])), 0);
    assert_eq!(code(&run(&["--version"])), 0);
    // validation
    assert_eq!(
        code(&run(&[
            "divergence",
            "--pair",
            &f.path("bad.csv"),
            "--alpha",
            "0.5"
        ])),
        2
    );
    assert_eq!(
        code(&run(&[
            "divergence",
            "--pair",
            &f.path("pair.csv"),
            "--alpha",
            "1.5"
        ])),
        2
    );
    assert_eq!(
        code(&run(&[
            "divergence",
            "--family",
            "tsallis",
            "--pair",
            &f.path("pair.csv"),
            "--alpha",
            "0.5"
        ])),
        2
    );
    assert_eq!(
        code(&run(&[
            "divergence",
            "--pair",
            &f.path("missing.csv"),
            "--alpha",
            "0.5"
        ])),
        2
    );
    assert_eq!(
        code(&run(&[
            "divergence",
            "--pair",
            &f.path("pair.csv"),
            "--alpha",
            "0.5",
            "--u0",
            "bogus"
        ])),
        2
    );
    assert_eq!(
        code(&run(&[
            "divergence",
            "--pair",
            &f.path("pair.csv"),
            "--alpha",
            "0.5",
            "--tol",
            "0"
        ])),
        2
    );
    // solver: κ needed exceeds the probe limit
    let o = run(&[
        "divergence",
        "--pair",
        &f.path("pair.csv"),
        "--alpha",
        "0.5",
        "--u0",
        "const:1e-300",
    ]);
    assert_eq!(code(&o), 3);
    assert_eq!(json(&o)["status"], "bracket_failure");
    // inconclusive under --strict only
    let args = [
        "probe",
        "ratio",
        "--family",
        "counterexample",
        "--umax",
        "12",
    ];
    let o = run(&args);
    assert_eq!(code(&o), 0);
    assert_eq!(json(&o)["verdict"]["kind"], "inconclusive");
    let mut strict = args.to_vec();
    strict.push("--strict");
    assert_eq!(code(&run(&strict)), 4);
}

#[test]
fn threads_env_is_checked() {
    let o = bin()
        .args(["probe", "kaniadakis", "--kappa", "0.5", "--alpha", "0.5"])
        .env("DEFORMED_DIV_THREADS", "many")
        .output()
        .unwrap();
    assert_eq!(code(&o), 64);
}

#[test]
fn output_is_deterministic() {
    let f = Files::new();
    let cases: Vec<Vec<String>> = vec![
        vec![
            "oracle".into(),
            "--seed".into(),
            "7".into(),
            "--count".into(),
            "20".into(),
        ],
        vec![
            "sweep".into(),
            "--pair".into(),
            f.path("pair.csv"),
            "--format".into(),
            "json".into(),
        ],
        vec![
            "construct-u0".into(),
            "--family".into(),
            "counterexample".into(),
        ],
        vec![
            "probe".into(),
            "ratio".into(),
            "--family".into(),
            "kaniadakis".into(),
            "--kappa".into(),
            "0.5".into(),
        ],
    ];
    for args in cases {
        let a = bin().args(&args).output().unwrap();
        let b = bin().args(&args).output().unwrap();
        let c = bin()
            .args(&args)
            .env("DEFORMED_DIV_THREADS", "1")
            .output()
            .unwrap();
        assert_eq!(code(&a), 0, "{args:?}");
        assert_eq!(a.stdout, b.stdout, "{args:?}");
        assert_eq!(a.stdout, c.stdout, "{args:?} with one thread");
    }
}

#[test]
fn every_json_output_matches_its_schema() {
    let f = Files::new();
    let pair = f.path("pair.csv");
    let cases: Vec<(&str, Vec<&str>)> = vec![
        (
            "divergence",
            vec![
                "divergence",
                "--pair",
                &pair,
                "--alpha",
                "0.25",
                "--family",
                "kaniadakis",
                "--kappa",
                "-0.5",
            ],
        ),
        (
            "divergence",
            vec![
                "divergence",
                "--pair",
                &pair,
                "--alpha",
                "0.5",
                "--u0",
                "const:1e-300",
            ],
        ),
        (
            "kappa",
            vec![
                "kappa", "--pair", &pair, "--alpha", "0.7", "--family", "tsallis", "--q", "1.5",
            ],
        ),
        (
            "sweep",
            vec![
                "sweep", "--pair", &pair, "--format", "json", "--points", "5",
            ],
        ),
        (
            "probe-ratio",
            vec!["probe", "ratio", "--family", "exp", "--umax", "50"],
        ),
        (
            "probe-ratio",
            vec!["probe", "ratio", "--family", "tsallis", "--q", "0.5"],
        ),
        (
            "probe-inequality",
            vec!["probe", "inequality", "--family", "exp", "--alpha", "0.3"],
        ),
        (
            "probe-inequality",
            vec![
                "probe",
                "inequality",
                "--family",
                "counterexample",
                "--alpha",
                "0.5",
            ],
        ),
        (
            "probe-envelope",
            vec!["probe", "envelope", "--family", "exp", "--k", "3"],
        ),
        (
            "probe-envelope",
            vec![
                "probe",
                "envelope",
                "--family",
                "counterexample",
                "--k",
                "3",
            ],
        ),
        (
            "probe-kaniadakis",
            vec!["probe", "kaniadakis", "--kappa", "-0.25", "--alpha", "0.1"],
        ),
        (
            "construct-u0",
            vec!["construct-u0", "--family", "tsallis", "--q", "0.5"],
        ),
        (
            "demo-counterexample",
            vec!["demo-counterexample", "--pieces", "30", "--blocks", "12"],
        ),
        (
            "validate-phi",
            vec!["validate-phi", "--family", "kaniadakis", "--kappa", "1"],
        ),
        ("oracle", vec!["oracle", "--count", "5"]),
        ("oracle", vec!["oracle", "--pair", &pair, "--alpha", "0.9"]),
    ];
    for (schema, args) in cases {
        let o = run(&args);
        assert!(
            matches!(code(&o), 0 | 3),
            "{args:?}: {}",
            String::from_utf8_lossy(&o.stderr)
        );
        assert_schema(schema, &json(&o));
    }
}

#[test]
fn constructed_u0_round_trips() {
    let f = Files::new();
    let o = run(&["construct-u0", "--family", "counterexample", "--atoms", "2"]);
    assert_eq!(code(&o), 0);
    let path = f.path("u0.json");
    fs::write(&path, &o.stdout).unwrap();
    let u0_arg = format!("constructed:{path}");
    let d = run(&[
        "divergence",
        "--family",
        "counterexample",
        "--pair",
        &f.path("pair.csv"),
        "--alpha",
        "0.5",
        "--u0",
        &u0_arg,
    ]);
    assert_eq!(code(&d), 0);
    let v = json(&d);
    assert_eq!(v["u0_id"], "seq:2 values");
    assert!(v["value"].as_f64().unwrap() > 0.0);
}

#[test]
fn sequence_u0_scales_kappa() {
    let f = Files::new();
    let seq = f.path("u0.csv");
    fs::write(&seq, "u0\n2\n2\n").unwrap();
    let u0_arg = format!("seq:{seq}");
    let a = json(&run(&[
        "kappa",
        "--pair",
        &f.path("pair.csv"),
        "--alpha",
        "0.5",
        "--u0",
        &u0_arg,
    ]));
    let b = json(&run(&[
        "kappa",
        "--pair",
        &f.path("pair.csv"),
        "--alpha",
        "0.5",
    ]));
    // for exp, κ scales as 1/u₀
    let (ka, kb) = (a["kappa"].as_f64().unwrap(), b["kappa"].as_f64().unwrap());
    assert!((2.0 * ka - kb).abs() < 1e-10);
}

#[test]
fn sweep_csv_has_one_row_per_alpha() {
    let f = Files::new();
    let o = run(&[
        "sweep",
        "--pair",
        &f.path("pair.csv"),
        "--alphas",
        "0.1,0.5,0.9",
    ]);
    assert_eq!(code(&o), 0);
    let text = String::from_utf8(o.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "alpha,kappa,D,status");
    assert_eq!(lines.len(), 4);
    assert!(lines[1..].iter().all(|l| l.ends_with(",converged")));
}

#[test]
fn tabulated_family_from_knots() {
    let f = Files::new();
    let knots = f.path("knots.csv");
    fs::write(&knots, "u,phi\n-5,0.0067\n0,1\n1,2.72\n2,7.39\n").unwrap();
    let o = run(&[
        "validate-phi",
        "--family",
        "tabulated",
        "--knots",
        &knots,
        "--umin",
        "-5",
        "--umax",
        "2",
    ]);
    assert_eq!(code(&o), 0);
    // concave middle knot
    fs::write(&knots, "u,phi\n0,1\n1,3\n2,4\n").unwrap();
    let o = run(&[
        "validate-phi",
        "--family",
        "tabulated",
        "--knots",
        &knots,
        "--umin",
        "0",
        "--umax",
        "2",
        "--points",
        "3",
    ]);
    assert_eq!(code(&o), 2);
    assert_eq!(
        json(&o)["convexity_violations"].as_array().unwrap().len(),
        1
    );
}

#[test]
fn demo_reports_divergent_solve() {
    let v = json(&run(&["demo-counterexample"]));
    assert_eq!(v["adversarial_solve"]["status"], "divergent_integral");
    assert_eq!(v["table"]["first_column_converges"], true);
    assert_eq!(v["table"]["second_column_diverges"], true);
}

#[test]
fn csv_is_refused_for_non_tabular_reports() {
    let o = run(&[
        "probe",
        "kaniadakis",
        "--kappa",
        "0.5",
        "--alpha",
        "0.5",
        "--format",
        "csv",
    ]);
    assert_eq!(code(&o), 2);
}
