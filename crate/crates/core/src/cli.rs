//! Command-line front end. Every command returns its exit code:
//! 0 success, 1 verification failure, 2 invalid input or violated hypothesis,
//! 3 precision shortfall.

use std::fs;
use std::io::{self, Read, Write};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::characters::{parse_character, DirichletCharacter};
use crate::fixtures;
use crate::plusspace::{project_plus, project_two, PlusContext};
use crate::qseries::{CoefficientSource, LiftInput, QExp, Weight};
use crate::scalars::{kronecker, parse_rational};
use crate::shimura::{lift, predict_level, square_free_split, DiamondOrbit, LevelFlags, LiftRequest, ShimuraError, CONSTANT_SIGN};
use crate::verify::{level1_exact_check, modularity_residual, Multiplier, VerifyError};
use crate::weilrep::self_test;

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY: i32 = 1;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_PRECISION: i32 = 3;

/// Residuals below this count as modular.
pub const NUMERIC_THRESHOLD: f64 = 1e-6;

#[derive(Parser, Debug)]
#[command(name = "shimura-lift", version, about = "Exact Shimura lifts of half-integral weight q-expansions")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Lift a half-integral weight expansion to integral weight.
    Lift(LiftArgs),
    /// Kohnen projection onto the plus space (or onto the second summand).
    Project(ProjectArgs),
    /// Predict the level of a lift.
    LevelPredict(LevelArgs),
    /// Check an expansion numerically or against level-one forms.
    Verify(VerifyArgs),
    /// Check the Weil representation relations.
    WeilSelftest(WeilArgs),
    /// List fixtures, print one as JSON, or re-emit a JSON expansion.
    Fixtures(FixtureArgs),
}

#[derive(Args, Debug, Clone)]
pub struct Source {
    /// JSON expansion file; `-` reads stdin.
    #[arg(long, conflicts_with = "fixture")]
    pub input: Option<String>,
    /// Name of a built-in fixture.
    #[arg(long)]
    pub fixture: Option<String>,
}

#[derive(Args, Debug)]
pub struct LiftArgs {
    #[command(flatten)]
    pub source: Source,
    #[arg(long = "N", default_value_t = 1)]
    pub n: u64,
    /// Input weight is k + 1/2; defaults to the fixture's own k.
    #[arg(long)]
    pub k: Option<u32>,
    #[arg(long, default_value_t = 1)]
    pub t: u64,
    #[arg(long, default_value_t = 1)]
    pub s: u64,
    #[arg(long = "M", default_value_t = 1)]
    pub m: u64,
    /// Plus-space sign; defaults to (-1/t) for odd t and +1 otherwise.
    #[arg(long, allow_hyphen_values = true)]
    pub epsilon: Option<i32>,
    /// `trivial`, `kronecker:D` or character JSON, modulo N.
    #[arg(long)]
    pub character: Option<String>,
    /// Highest output exponent.
    #[arg(long, default_value_t = 20)]
    pub prec: u64,
    #[arg(long)]
    pub json: bool,
}

#[derive(Args, Debug)]
pub struct ProjectArgs {
    #[command(flatten)]
    pub source: Source,
    #[arg(long = "N", default_value_t = 4)]
    pub n: u64,
    #[arg(long)]
    pub k: Option<u32>,
    /// Project onto the complement `pr_2` instead of the plus space.
    #[arg(long)]
    pub two: bool,
    #[arg(long, default_value_t = 50)]
    pub prec: u64,
    #[arg(long)]
    pub json: bool,
}

#[derive(Args, Debug)]
pub struct LevelArgs {
    #[arg(long = "N")]
    pub n: u64,
    #[arg(long, default_value_t = 1)]
    pub t: u64,
    #[arg(long, default_value_t = 1)]
    pub s: u64,
    #[arg(long = "M", default_value_t = 1)]
    pub m: u64,
    /// `t` odd and the input lies in the matching plus space.
    #[arg(long)]
    pub plus_space: bool,
    /// The input lies in one `ψ^ε` subspace.
    #[arg(long)]
    pub psi_known: bool,
    #[arg(long)]
    pub json: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Exact,
    Numeric,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub source: Source,
    /// Weight such as `4` or `1/2`; defaults to the weight stored in the input.
    #[arg(long)]
    pub weight: Option<String>,
    #[arg(long, default_value_t = 1)]
    pub level: u64,
    #[arg(long)]
    pub character: Option<String>,
    #[arg(long, value_enum, default_value_t = Mode::Numeric)]
    pub mode: Mode,
    /// Coefficients used when reading a fixture.
    #[arg(long, default_value_t = 200)]
    pub prec: u64,
    #[arg(long)]
    pub json: bool,
}

#[derive(Args, Debug)]
pub struct WeilArgs {
    /// Check `D_1(N)` for every N up to this bound.
    #[arg(long = "N", default_value_t = 12)]
    pub bound: u64,
    #[arg(long, default_value_t = 100)]
    pub words: usize,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// Perturb ρ(S) to exercise the failure path.
    #[arg(long, hide = true)]
    pub perturb: bool,
    #[arg(long)]
    pub json: bool,
}

#[derive(Args, Debug)]
pub struct FixtureArgs {
    /// Fixture to print; omit to list all names.
    pub name: Option<String>,
    /// Re-emit a JSON expansion in canonical form.
    #[arg(long, conflicts_with = "name")]
    pub input: Option<String>,
    #[arg(long, default_value_t = 20)]
    pub prec: u64,
}

struct Failure {
    code: i32,
    message: String,
    detail: Value,
}

impl Failure {
    fn invalid(message: impl Into<String>) -> Failure {
        Failure {
            code: EXIT_INVALID,
            message: message.into(),
            detail: Value::Null,
        }
    }
}

impl From<ShimuraError> for Failure {
    fn from(e: ShimuraError) -> Failure {
        match e {
            ShimuraError::Precision { required, available } => Failure {
                code: EXIT_PRECISION,
                message: format!("{e}; required window [0, {}]", required + 1),
                detail: json!({ "required_window": [0, required + 1], "available": available }),
            },
            other => Failure::invalid(other.to_string()),
        }
    }
}

impl From<VerifyError> for Failure {
    fn from(e: VerifyError) -> Failure {
        match e {
            VerifyError::Tail { .. } | VerifyError::Window { .. } => Failure {
                code: EXIT_PRECISION,
                message: e.to_string(),
                detail: Value::Null,
            },
            other => Failure::invalid(other.to_string()),
        }
    }
}

fn read_text(path: &str) -> Result<String, Failure> {
    if path == "-" {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s).map_err(|e| Failure::invalid(format!("stdin: {e}")))?;
        Ok(s)
    } else {
        fs::read_to_string(path).map_err(|e| Failure::invalid(format!("{path}: {e}")))
    }
}

fn read_qexp(path: &str) -> Result<QExp, Failure> {
    let text = read_text(path)?;
    let v: Value = serde_json::from_str(&text).map_err(|e| Failure::invalid(format!("{path}: {e}")))?;
    QExp::from_json(&v).map_err(|e| Failure::invalid(format!("{path}: {e}")))
}

fn load(source: &Source, prec: u64) -> Result<LiftInput, Failure> {
    match (&source.input, &source.fixture) {
        (Some(path), _) => Ok(read_qexp(path)?.into()),
        (None, Some(name)) => fixtures::named(name, prec).map_err(|e| Failure::invalid(e.to_string())),
        (None, None) => Err(Failure::invalid("one of --input or --fixture is required")),
    }
}

fn character(spec: &Option<String>, modulus: u64) -> Result<DirichletCharacter, Failure> {
    match spec {
        None => Ok(DirichletCharacter::trivial(modulus.max(1))),
        Some(text) => parse_character(text, modulus.max(1)).map_err(|e| Failure::invalid(e.to_string())),
    }
}

fn emit(out: &mut dyn Write, v: &Value) {
    let _ = writeln!(out, "{}", serde_json::to_string_pretty(v).expect("JSON values serialize"));
}

fn cmd_lift(a: &LiftArgs, out: &mut dyn Write) -> Result<i32, Failure> {
    if a.t == 0 || a.s == 0 {
        return Err(Failure::invalid("t and s must be positive"));
    }
    let k = match (a.k, &a.source.fixture) {
        (Some(k), _) => k,
        (None, Some(name)) => fixtures::half_integral_index(name)
            .ok_or_else(|| Failure::invalid(format!("--k is required for fixture '{name}'")))?,
        (None, None) => return Err(Failure::invalid("--k is required with --input")),
    };
    let (t0, s0) = square_free_split(a.t * a.s * a.s);
    let epsilon = match a.epsilon {
        Some(e) => e,
        None if t0 % 2 == 1 => kronecker(-1, t0 as i64).map_err(|e| Failure::invalid(e.to_string()))?,
        None => 1,
    };
    let level = a.n * a.m;
    let required = a.t * a.s * a.s * a.prec * a.prec;
    let f = load(&a.source, required + 1)?;
    let chi = character(&a.character, a.n)?;
    let req = LiftRequest {
        f,
        orbit: DiamondOrbit::Character(chi),
        n: a.n,
        k,
        t: a.t,
        s: a.s,
        m: a.m,
        epsilon,
        plus_space: true,
        constant_sign: CONSTANT_SIGN,
        prec: a.prec,
    };
    if level == 0 {
        return Err(Failure::invalid("N and M must be positive"));
    }
    let g = lift(&req)?;
    let verdict = match LevelFlags::from_request(&req).and_then(|fl| predict_level(a.n, t0, s0, a.m, fl)) {
        Ok(v) => serde_json::to_value(v).expect("verdict serializes"),
        Err(e) => json!({ "error": e.to_string() }),
    };
    if a.json {
        emit(out, &json!({ "expansion": g.to_json(), "verdict": verdict, "request": req.to_json() }));
    } else {
        let _ = writeln!(out, "S_{{{}}} at level {}: {}", a.t * a.s * a.s, level, g);
        let _ = writeln!(out, "verdict: {verdict}");
    }
    Ok(EXIT_OK)
}

fn cmd_project(a: &ProjectArgs, out: &mut dyn Write) -> Result<i32, Failure> {
    let f = load(&a.source, a.prec)?;
    let (_, hi) = f.window();
    let f = f.materialize(hi);
    let k = match a.k {
        Some(k) => k,
        None => {
            let w = f.weight();
            if w.is_integral() {
                return Err(Failure::invalid("--k is required for integral-weight input"));
            }
            (w.to_f64() - 0.5).round() as u32
        }
    };
    let ctx = PlusContext::new(k, 1, a.n).map_err(|e| Failure::invalid(e.to_string()))?;
    let g = if a.two { project_two(&f, &ctx) } else { project_plus(&f, &ctx) }.map_err(|e| Failure::invalid(e.to_string()))?;
    if a.json {
        emit(out, &g.to_json());
    } else {
        let _ = writeln!(out, "{g}");
    }
    Ok(EXIT_OK)
}

fn cmd_level(a: &LevelArgs, out: &mut dyn Write) -> Result<i32, Failure> {
    let flags = LevelFlags {
        plus_space_matching: a.plus_space,
        psi_subspace_known: a.psi_known,
    };
    let v = predict_level(a.n, a.t, a.s, a.m, flags)?;
    if a.json {
        emit(out, &serde_json::to_value(&v).expect("verdict serializes"));
    } else {
        let _ = writeln!(out, "case {}: level {} = {} · {} · lcm(N, s) = {}", v.case, v.level, v.factor, v.p_j, v.lcm_ns);
        if v.needs_correction {
            let _ = writeln!(out, "the lift needs the 2-correction to reach this level");
        }
    }
    Ok(EXIT_OK)
}

fn parse_weight(text: &str) -> Result<Weight, Failure> {
    let r = parse_rational(text).map_err(|e| Failure::invalid(e.to_string()))?;
    let (num, den) = (r.numer(), r.denom());
    let as_i64 = |x: &num_bigint::BigInt| i64::try_from(x).map_err(|_| Failure::invalid("weight out of range"));
    let (num, den) = (as_i64(num)?, as_i64(den)?);
    if den != 1 && den != 2 {
        return Err(Failure::invalid(format!("weight {text} is neither integral nor half-integral")));
    }
    Ok(Weight::new(num, den))
}

fn cmd_verify(a: &VerifyArgs, out: &mut dyn Write) -> Result<i32, Failure> {
    let f = load(&a.source, a.prec)?;
    let (_, hi) = f.window();
    let mut f = f.materialize(hi);
    if let Some(w) = &a.weight {
        f = f.with_weight(parse_weight(w)?);
    }
    let weight = f.weight();
    let (passed, report) = match a.mode {
        Mode::Exact => {
            if a.level != 1 {
                return Err(Failure::invalid("exact verification is available at level 1 only"));
            }
            if !weight.is_integral() {
                return Err(Failure::invalid("exact verification needs integral weight"));
            }
            let fit = level1_exact_check(&f, weight.to_f64().round() as i64)?;
            (fit.ok(), serde_json::to_value(&fit).expect("fit serializes"))
        }
        Mode::Numeric => {
            let chi = character(&a.character, a.level)?;
            let m = if weight.is_integral() { Multiplier::Dirichlet(chi) } else { Multiplier::Theta(chi) };
            let r = modularity_residual(&f, a.level, &m)?;
            (r.max_residual < NUMERIC_THRESHOLD, serde_json::to_value(&r).expect("report serializes"))
        }
    };
    let report = json!({ "passed": passed, "report": report });
    if a.json {
        emit(out, &report);
    } else {
        let _ = writeln!(out, "{}: {}", if passed { "PASS" } else { "FAIL" }, report["report"]);
    }
    Ok(if passed { EXIT_OK } else { EXIT_VERIFY })
}

fn cmd_weil(a: &WeilArgs, out: &mut dyn Write) -> Result<i32, Failure> {
    let r = self_test(a.bound, a.words, a.seed, a.perturb);
    if a.json {
        emit(out, &serde_json::to_value(&r).expect("report serializes"));
    } else {
        for c in &r.checks {
            let _ = writeln!(out, "{:<4} {:<12} {:<28} {:.2e}", if c.passed { "ok" } else { "FAIL" }, c.module, c.relation, c.max_error);
        }
    }
    Ok(if r.passed { EXIT_OK } else { EXIT_VERIFY })
}

fn cmd_fixtures(a: &FixtureArgs, out: &mut dyn Write) -> Result<i32, Failure> {
    let v = match (&a.name, &a.input) {
        (_, Some(path)) => read_qexp(path)?.to_json(),
        (Some(name), None) => {
            let f = fixtures::named(name, a.prec).map_err(|e| Failure::invalid(e.to_string()))?;
            let (_, hi) = f.window();
            f.materialize(hi).to_json()
        }
        (None, None) => {
            for n in fixtures::names() {
                let _ = writeln!(out, "{n}");
            }
            return Ok(EXIT_OK);
        }
    };
    emit(out, &v);
    Ok(EXIT_OK)
}

/// Runs a parsed command, writing results to `out` and diagnostics to `err`.
pub fn run(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let result = match &cli.command {
        Command::Lift(a) => cmd_lift(a, out),
        Command::Project(a) => cmd_project(a, out),
        Command::LevelPredict(a) => cmd_level(a, out),
        Command::Verify(a) => cmd_verify(a, out),
        Command::WeilSelftest(a) => cmd_weil(a, out),
        Command::Fixtures(a) => cmd_fixtures(a, out),
    };
    match result {
        Ok(code) => code,
        Err(f) => {
            let payload = json!({ "error": f.message, "exit_code": f.code, "detail": f.detail });
            let _ = writeln!(err, "{}", serde_json::to_string(&payload).expect("JSON values serialize"));
            f.code
        }
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run_from<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => run(&cli, out, err),
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INVALID } else { EXIT_OK };
            if e.use_stderr() {
                let _ = write!(err, "{e}");
            } else {
                let _ = write!(out, "{e}");
            }
            code
        }
    }
}
