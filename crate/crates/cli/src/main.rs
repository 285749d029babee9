//! `filiaut`: JSON front end for filiaut-core.
//!
//! Exit status: 0 pass, 1 fail, 2 malformed input (bad flags, unreadable or
//! ill-formed JSON, dimensions that do not fit).

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use filiaut_core::{
    build_automorphism, classify_profile, counterexample, is_automorphism, is_local_automorphism, make_algebra,
    power_profile, random_automorphism, recover_params, solve_witness, verify_2local, AlgebraFamily, AlgebraSpec,
    Classification, ExactScalar, FamilyTag, Mode, PointMap, SquareMatrix, Vector, Verdict, WitnessError,
};
use serde::Deserialize;
use serde_json::{json, Value};

const SEED_ENV: &str = "FILIAUT_SEED";

#[derive(Parser, Debug)]
#[command(name = "filiaut", version, about = "Automorphisms, local and 2-local automorphisms of mu0 and mu11..mu14")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// mu0, mu11, mu12, mu13 or mu14
    #[arg(long, global = true)]
    family: Option<FamilyTag>,
    #[arg(long, global = true)]
    n: Option<usize>,
    /// Overridden by FILIAUT_SEED when that is set.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Sample points for local checks.
    #[arg(long, global = true, default_value_t = 1000, value_parser = clap::value_parser!(u64).range(1..))]
    samples: u64,
    #[arg(long, global = true, default_value = "exact")]
    mode: Mode,
    /// JSON input file.
    #[arg(long = "in", global = true)]
    input: Option<PathBuf>,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Subcommand, Debug, Clone)]
enum Command {
    /// Random automorphism parameters and matrix, self-checked.
    GenAut,
    /// Is the input matrix an automorphism?
    CheckAut,
    /// Local-automorphism check: zero pattern plus a witness per sampled point.
    CheckLocal,
    /// Solve for the automorphism agreeing with the input matrix at one point.
    Witness {
        /// Comma-separated rationals; otherwise the input's "x".
        #[arg(long = "x", value_delimiter = ',', allow_hyphen_values = true)]
        x: Option<Vec<ExactScalar>>,
    },
    /// A local automorphism that is not an automorphism.
    Counterexample,
    /// Reconstruct and verify a 2-local automorphism from a point map.
    #[command(name = "check-2local")]
    Check2local,
    /// Power series dimensions and classification of an algebra.
    Profile,
}

#[derive(Debug)]
enum CliError {
    /// Exit 2.
    Malformed(String),
    /// Exit 1: a self-check failed or the report could not be written.
    Failed(String),
}

fn malformed(e: impl ToString) -> CliError {
    CliError::Malformed(e.to_string())
}

struct Report {
    body: Value,
    verdict: Verdict,
}

/// Matrix input; also accepts the output of `gen-aut` and `counterexample`.
#[derive(Deserialize)]
struct MatrixDoc {
    family: Option<FamilyTag>,
    n: Option<usize>,
    matrix: SquareMatrix<ExactScalar>,
    x: Option<Vec<ExactScalar>>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = seed(&cli).and_then(|seed| run(&cli, seed)).and_then(|r| emit(&cli, r));
    match result {
        Ok(Verdict::Pass) => ExitCode::SUCCESS,
        Ok(Verdict::Fail) => ExitCode::from(1),
        Err(CliError::Failed(msg)) => {
            eprintln!("filiaut: {msg}");
            ExitCode::from(1)
        }
        Err(CliError::Malformed(msg)) => {
            eprintln!("filiaut: {msg}");
            ExitCode::from(2)
        }
    }
}

fn seed(cli: &Cli) -> Result<u64, CliError> {
    match std::env::var(SEED_ENV) {
        Ok(s) => s.trim().parse().map_err(|_| malformed(format!("{SEED_ENV}={s:?} is not an unsigned integer"))),
        Err(_) => Ok(cli.seed),
    }
}

fn emit(cli: &Cli, r: Report) -> Result<Verdict, CliError> {
    let mut text = serde_json::to_string_pretty(&r.body).expect("reports serialize");
    text.push('\n');
    match &cli.out {
        Some(path) => fs::write(path, text).map_err(|e| CliError::Failed(format!("{}: {e}", path.display())))?,
        None => print!("{text}"),
    }
    Ok(r.verdict)
}

fn run(cli: &Cli, seed: u64) -> Result<Report, CliError> {
    match &cli.command {
        Command::GenAut => gen_aut(cli, seed),
        Command::CheckAut => check_aut(cli),
        Command::CheckLocal => check_local(cli, seed),
        Command::Witness { x } => witness(cli, x.clone()),
        Command::Counterexample => cmd_counterexample(cli, seed),
        Command::Check2local => check_2local(cli),
        Command::Profile => profile(cli),
    }
}

fn read_input<T: for<'de> Deserialize<'de>>(cli: &Cli) -> Result<T, CliError> {
    let path = cli.input.as_ref().ok_or_else(|| malformed("this command needs --in FILE"))?;
    let text = fs::read_to_string(path).map_err(|e| malformed(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| malformed(format!("{}: {e}", path.display())))
}

fn flag_family(cli: &Cli) -> Result<AlgebraFamily, CliError> {
    let tag = cli.family.ok_or_else(|| malformed("--family is required"))?;
    let n = cli.n.ok_or_else(|| malformed("--n is required"))?;
    AlgebraFamily::new(tag, n).map_err(malformed)
}

/// Family and dimension from the document, falling back to the flags; the
/// two must agree where both are given.
fn doc_family(cli: &Cli, doc: &MatrixDoc) -> Result<AlgebraFamily, CliError> {
    let tag = match (doc.family, cli.family) {
        (Some(a), Some(b)) if a != b => return Err(malformed(format!("input family {a} but --family {b}"))),
        (Some(t), _) | (None, Some(t)) => t,
        (None, None) => return Err(malformed("no family in the input and no --family")),
    };
    let n = doc.matrix.dim();
    for (what, given) in [("input n", doc.n), ("--n", cli.n)] {
        if let Some(g) = given {
            if g != n {
                return Err(malformed(format!("{what} = {g} but the matrix is {n}x{n}")));
            }
        }
    }
    AlgebraFamily::new(tag, n).map_err(malformed)
}

fn aut_label(tag: FamilyTag) -> String {
    format!("aut-{tag}")
}

fn local_label(tag: FamilyTag) -> String {
    format!("local-{tag}")
}

fn gen_aut(cli: &Cli, seed: u64) -> Result<Report, CliError> {
    let family = flag_family(cli)?;
    let params = random_automorphism(family, seed);
    let matrix = build_automorphism(&params).map_err(|e| CliError::Failed(e.to_string()))?;
    if let Err(f) = is_automorphism(&make_algebra(family), &matrix) {
        return Err(CliError::Failed(format!("generated matrix failed its self-check: {f}")));
    }
    let body = json!({
        "theorem": aut_label(family.tag),
        "family": family.tag,
        "n": family.n,
        "seed": seed,
        "params": params,
        "matrix": matrix,
        "verdict": Verdict::Pass,
    });
    Ok(Report { body, verdict: Verdict::Pass })
}

fn check_aut(cli: &Cli) -> Result<Report, CliError> {
    let doc: MatrixDoc = read_input(cli)?;
    let family = doc_family(cli, &doc)?;
    let check = is_automorphism(&make_algebra(family), &doc.matrix);
    let verdict = Verdict::from_bool(check.is_ok());
    let mut body = json!({
        "theorem": aut_label(family.tag),
        "family": family.tag,
        "n": family.n,
        "verdict": verdict,
    });
    match check {
        Ok(()) => {
            if let Ok(p) = recover_params(family, &doc.matrix) {
                body["params"] = json!(p);
            }
        }
        Err(f) => body["failure"] = json!(f.to_string()),
    }
    Ok(Report { body, verdict })
}

fn check_local(cli: &Cli, seed: u64) -> Result<Report, CliError> {
    let doc: MatrixDoc = read_input(cli)?;
    let family = doc_family(cli, &doc)?;
    let v = is_local_automorphism(family, &doc.matrix, cli.samples as usize, seed, cli.mode);
    let mut body = json!({
        "theorem": local_label(family.tag),
        "family": family.tag,
        "n": family.n,
        "seed": seed,
        "samples": cli.samples,
        "mode": cli.mode,
    });
    merge(&mut body, json!(v));
    Ok(Report { body, verdict: v.verdict })
}

fn witness(cli: &Cli, x_flag: Option<Vec<ExactScalar>>) -> Result<Report, CliError> {
    let doc: MatrixDoc = read_input(cli)?;
    let family = doc_family(cli, &doc)?;
    let x = x_flag.or(doc.x).ok_or_else(|| malformed("no point: pass --x or put \"x\" in the input"))?;
    let x = Vector::new(x);
    let mut body = json!({
        "theorem": local_label(family.tag),
        "family": family.tag,
        "n": family.n,
        "x": x,
        "mode": cli.mode,
    });
    let verdict = match solve_witness(family, &doc.matrix, &x, cli.mode) {
        Ok(r) => {
            merge(&mut body, json!(r));
            Verdict::Pass
        }
        Err(e @ (WitnessError::ZeroVector | WitnessError::DimensionMismatch { .. })) => return Err(malformed(e)),
        Err(e) => {
            body["error"] = json!(e);
            body["message"] = json!(e.to_string());
            Verdict::Fail
        }
    };
    body["verdict"] = json!(verdict);
    Ok(Report { body, verdict })
}

/// Verdict pass means the counterexample behaves as claimed: local, not an
/// automorphism.
fn cmd_counterexample(cli: &Cli, seed: u64) -> Result<Report, CliError> {
    let family = flag_family(cli)?;
    let matrix = counterexample(family);
    let aut = is_automorphism(&make_algebra(family), &matrix);
    let local = is_local_automorphism(family, &matrix, cli.samples as usize, seed, cli.mode);
    let verdict = Verdict::from_bool(aut.is_err() && local.passed());
    let body = json!({
        "theorem": local_label(family.tag),
        "family": family.tag,
        "n": family.n,
        "matrix": matrix,
        "automorphism": {
            "verdict": Verdict::from_bool(aut.is_ok()),
            "failure": aut.err().map(|f| f.to_string()),
        },
        "local": {
            "shape": local.shape,
            "samples": cli.samples,
            "seed": seed,
            "witnesses": local.witnesses.len(),
            "failures": local.failures,
            "verdict": local.verdict,
        },
        "verdict": verdict,
    });
    Ok(Report { body, verdict })
}

fn check_2local(cli: &Cli) -> Result<Report, CliError> {
    let pm: PointMap<ExactScalar> = read_input(cli)?;
    pm.validate().map_err(malformed)?;
    let v = verify_2local(&pm);
    let mut body = json!({ "theorem": "twolocal", "family": pm.family, "n": pm.n, "samples": pm.samples.len() });
    merge(&mut body, json!(v));
    Ok(Report { body, verdict: v.verdict })
}

fn profile(cli: &Cli) -> Result<Report, CliError> {
    let spec: AlgebraSpec = match &cli.input {
        Some(_) => read_input(cli)?,
        None => {
            let f = flag_family(cli)?;
            AlgebraSpec::Family { family: f.tag, n: f.n }
        }
    };
    let alg = spec.build().map_err(malformed)?;
    let associative = alg.associativity_violation();
    let class = classify_profile(&alg);
    let mut body = json!({
        "theorem": "profile",
        "n": alg.dim(),
        "associative": associative.is_none(),
        "classification": class,
    });
    if let Some((i, j, k)) = associative {
        body["associativity_violation"] = json!([i, j, k]);
    }
    match power_profile(&alg) {
        Ok(p) => merge(&mut body, json!(p)),
        Err(e) => body["error"] = json!(e.to_string()),
    }
    let verdict = Verdict::from_bool(associative.is_none() && class != Classification::Neither);
    body["verdict"] = json!(verdict);
    Ok(Report { body, verdict })
}

fn merge(into: &mut Value, from: Value) {
    if let (Value::Object(a), Value::Object(b)) = (into, from) {
        a.extend(b);
    }
}
