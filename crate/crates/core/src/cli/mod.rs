//! Command-line front end.
//!
//! Exit codes: 0 on success, 1 when a check fails (`el check` off shell,
//! `bicomplex verify` with a failing identity), 2 on usage, parse or
//! evaluation errors.

use std::collections::{BTreeMap, BTreeSet};
use std::ffi::OsString;
use std::io::Write;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};

use crate::bicomplex::verify_identities;
use crate::expr::{self, ZeroTest};
use crate::jet::{split_assignments, JetContext, Section};
use crate::variational::{
    euler_lagrange, parse_point, perturb_expand, residual, Grid, Jacobi, Lagrangian, DEFAULT_TOLERANCE, FD_STEP,
};
use crate::weil::{taylor_extend, WeilAlgebra, WeilElement};

/// Environment variable that overrides the default seed.
pub const SEED_ENV: &str = "CAHIERS_SEED";

#[derive(Parser, Debug)]
#[command(name = "cahiers", version, about = "Weil-algebra AD and jet-bundle variational calculus")]
struct Cli {
    /// Print machine-readable JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Seed for random sampling (zero tests, random suites).
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Weil-algebra arithmetic.
    #[command(subcommand)]
    Weil(WeilCmd),
    /// Jet prolongation.
    #[command(subcommand)]
    Jet(JetCmd),
    /// Euler-Lagrange equations.
    #[command(subcommand)]
    El(ElCmd),
    /// Linearized Euler-Lagrange operator.
    #[command(subcommand)]
    Jacobi(JacobiCmd),
    /// Variational bicomplex.
    #[command(subcommand)]
    Bicomplex(BicomplexCmd),
    /// Perturbative expansion.
    #[command(subcommand)]
    Perturb(PerturbCmd),
}

#[derive(Subcommand, Debug)]
enum WeilCmd {
    /// Evaluate a smooth function at Weil-algebra arguments.
    Eval {
        /// Algebra spec such as `D(2,1)` or `D(1,3);rel=e1^2`.
        #[arg(long)]
        algebra: String,
        /// Arguments, e.g. `x=0+e1,y=2`.
        #[arg(long)]
        map: String,
        #[arg(long)]
        expr: String,
    },
}

#[derive(Args, Debug)]
struct ContextArgs {
    /// Base coordinates, comma separated single letters.
    #[arg(long)]
    coords: Option<String>,
    /// Field names, comma separated.
    #[arg(long)]
    fields: Option<String>,
}

#[derive(Subcommand, Debug)]
enum JetCmd {
    /// Print the jet prolongation of a section.
    Prolong {
        #[command(flatten)]
        ctx: ContextArgs,
        #[arg(long)]
        order: usize,
        /// Section, e.g. `u=sin(x-t)`.
        #[arg(long)]
        section: String,
    },
}

#[derive(Subcommand, Debug)]
enum ElCmd {
    /// Derive the Euler-Lagrange expressions.
    Derive {
        #[command(flatten)]
        ctx: ContextArgs,
        #[arg(long)]
        lagrangian: String,
    },
    /// Evaluate the Euler-Lagrange residual of a section on a grid.
    Check {
        #[command(flatten)]
        ctx: ContextArgs,
        #[arg(long)]
        lagrangian: String,
        #[arg(long)]
        section: String,
        /// Grid axes `name:lo:hi:count[:periodic]`, comma separated.
        #[arg(long)]
        grid: String,
        #[arg(long, default_value_t = DEFAULT_TOLERANCE)]
        tol: f64,
    },
}

#[derive(Subcommand, Debug)]
enum JacobiCmd {
    /// Print the Jacobi operator and its coefficients.
    Derive {
        #[command(flatten)]
        ctx: ContextArgs,
        #[arg(long)]
        lagrangian: String,
    },
}

#[derive(Subcommand, Debug)]
enum BicomplexCmd {
    /// Check d_H^2 = d_V^2 = {d_H, d_V} = d^2 = 0 on random forms.
    Verify {
        #[arg(long)]
        coords: String,
        #[arg(long)]
        fields: String,
        #[arg(long, default_value_t = 3)]
        order: usize,
        #[arg(long, default_value_t = 50)]
        trials: usize,
    },
}

#[derive(Subcommand, Debug)]
enum PerturbCmd {
    /// Truncated Taylor expansion of a function at a point.
    Expand {
        #[arg(long = "fn")]
        function: String,
        /// Expansion point, e.g. `x=0,y=1`.
        #[arg(long)]
        at: String,
        #[arg(long)]
        order: u32,
    },
}

/// Settings recorded in every JSON output.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Config {
    pub seed: u64,
    pub tolerances: Tolerances,
    pub format: &'static str,
    pub threads: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Tolerances {
    pub zero: f64,
    pub zero_samples: usize,
    pub residual: f64,
    pub fd_step: f64,
}

impl Config {
    fn new(seed: Option<u64>, json: bool, residual: f64) -> Result<Config, CliError> {
        let zero = ZeroTest::default();
        let seed = match (seed, std::env::var(SEED_ENV)) {
            (Some(s), _) => s,
            (None, Ok(v)) => v.trim().parse().map_err(|_| CliError::Usage(format!("{SEED_ENV}=`{v}` is not a u64")))?,
            (None, Err(_)) => zero.seed,
        };
        Ok(Config {
            seed,
            tolerances: Tolerances { zero: zero.tol, zero_samples: zero.samples, residual, fd_step: FD_STEP },
            format: if json { "json" } else { "text" },
            threads: 1,
        })
    }

    fn zero_test(&self) -> ZeroTest {
        ZeroTest { tol: self.tolerances.zero, samples: self.tolerances.zero_samples, ..ZeroTest::with_seed(self.seed) }
    }
}

#[derive(Debug)]
enum CliError {
    Usage(String),
}

impl<E: std::error::Error> From<E> for CliError {
    fn from(e: E) -> Self {
        CliError::Usage(e.to_string())
    }
}

/// Command output: text lines, a JSON result and whether the checks passed.
struct Outcome {
    text: String,
    json: Value,
    ok: bool,
}

/// Runs the command line with the process streams.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with(args, &mut stdout.lock(), &mut stderr.lock())
}

/// Runs the command line writing to the given streams; returns the exit code.
pub fn run_with<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let stream: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = write!(stream, "{text}");
            return code;
        }
    };
    let residual_tol = match &cli.command {
        Command::El(ElCmd::Check { tol, .. }) => *tol,
        _ => DEFAULT_TOLERANCE,
    };
    let result = Config::new(cli.seed, cli.json, residual_tol).and_then(|config| {
        let outcome = dispatch(&cli.command, &config)?;
        Ok((config, outcome))
    });
    match result {
        Ok((config, outcome)) => {
            let written = if cli.json {
                let doc = json!({ "command": command_name(&cli.command), "config": config, "result": outcome.json });
                writeln!(out, "{}", serde_json::to_string_pretty(&doc).expect("serializable"))
            } else {
                write!(out, "{}", outcome.text)
            };
            if written.is_err() {
                return 2;
            }
            if outcome.ok {
                0
            } else {
                1
            }
        }
        Err(CliError::Usage(msg)) => {
            if cli.json {
                let doc = json!({ "command": command_name(&cli.command), "error": msg });
                let _ = writeln!(err, "{}", serde_json::to_string_pretty(&doc).expect("serializable"));
            } else {
                let _ = writeln!(err, "error: {msg}");
            }
            2
        }
    }
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Weil(_) => "weil eval",
        Command::Jet(_) => "jet prolong",
        Command::El(ElCmd::Derive { .. }) => "el derive",
        Command::El(ElCmd::Check { .. }) => "el check",
        Command::Jacobi(_) => "jacobi derive",
        Command::Bicomplex(_) => "bicomplex verify",
        Command::Perturb(_) => "perturb expand",
    }
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("serializable")
}

fn dispatch(command: &Command, config: &Config) -> Result<Outcome, CliError> {
    match command {
        Command::Weil(WeilCmd::Eval { algebra, map, expr: text }) => weil_eval(algebra, map, text),
        Command::Jet(JetCmd::Prolong { ctx, order, section }) => {
            let context = build_context(ctx, &[], Some(section))?;
            let s = Section::parse(&context, section)?;
            let p = context.prolong(&s, *order)?;
            let assignments: BTreeMap<String, Value> =
                p.values.iter().map(|(v, e)| (context.var_name(v), to_value(e))).collect();
            Ok(Outcome {
                text: context.display_table(&p),
                json: json!({ "context": context, "order": order, "assignments": assignments }),
                ok: true,
            })
        }
        Command::El(ElCmd::Derive { ctx, lagrangian }) => {
            let context = build_context(ctx, &[lagrangian], None)?;
            let l = Lagrangian::parse(&context, lagrangian)?;
            let el = euler_lagrange(&l);
            Ok(Outcome { text: format!("{el}\n"), json: el_json(&context, &l, &el), ok: true })
        }
        Command::El(ElCmd::Check { ctx, lagrangian, section, grid, tol }) => {
            let context = build_context(ctx, &[lagrangian], Some(section))?;
            let l = Lagrangian::parse(&context, lagrangian)?;
            let s = Section::parse(&context, section)?;
            let g = Grid::parse(grid)?;
            let r = residual(&l, &s, &g, *tol)?;
            let verdict = if r.on_shell { "on-shell" } else { "off-shell" };
            let text = format!("{}\nresidual = {:e}\nverdict: {verdict} (tol {:e})\n", euler_lagrange(&l), r.max, tol);
            let mut doc = el_json(&context, &l, &euler_lagrange(&l));
            doc["residual"] = json!(r.max);
            doc["tolerance"] = json!(tol);
            doc["on_shell"] = json!(r.on_shell);
            doc["grid"] = to_value(&g);
            Ok(Outcome { text, json: doc, ok: r.on_shell })
        }
        Command::Jacobi(JacobiCmd::Derive { ctx, lagrangian }) => {
            let context = build_context(ctx, &[lagrangian], None)?;
            let l = Lagrangian::parse(&context, lagrangian)?;
            let j = Jacobi::derive(&l);
            let operator: BTreeMap<String, Value> = j
                .operator()
                .iter()
                .zip(context.fields())
                .map(|(e, f)| (format!("J_{f}"), to_value(e)))
                .collect();
            let json = json!({
                "context": context,
                "perturbation": j.perturbation,
                "operator": operator,
                "coefficients": j.entries(),
            });
            Ok(Outcome { text: j.to_string(), json, ok: true })
        }
        Command::Bicomplex(BicomplexCmd::Verify { coords, fields, order, trials }) => {
            let context = JetContext::new(split_list(coords), split_list(fields))?;
            if context.dim() == 0 || context.fields().is_empty() {
                return Err(CliError::Usage("need at least one coordinate and one field".into()));
            }
            let report = verify_identities(&context, *order, *trials, config.seed, &config.zero_test());
            Ok(Outcome { text: report.to_string(), json: to_value(&report), ok: report.passed() })
        }
        Command::Perturb(PerturbCmd::Expand { function, at, order }) => {
            let f = expr::parse(function)?;
            let point = parse_point(at)?;
            let e = perturb_expand(&f, &point, *order)?;
            Ok(Outcome { text: format!("{}\n", e.polynomial), json: to_value(&e), ok: true })
        }
    }
}

fn weil_eval(algebra: &str, map: &str, text: &str) -> Result<Outcome, CliError> {
    let alg = WeilAlgebra::parse_spec(algebra)?;
    let f = expr::parse(text)?;
    let mut vars = Vec::new();
    let mut args = Vec::new();
    for piece in split_assignments(map) {
        let (name, value) =
            piece.split_once('=').ok_or_else(|| CliError::Usage(format!("`{piece}`: expected <var>=<element>")))?;
        vars.push(name.trim().to_string());
        args.push(WeilElement::parse(&alg, value)?);
    }
    let value = if args.is_empty() { WeilElement::from_expr(&alg, &f)? } else { taylor_extend(&f, &vars, &args)? };
    Ok(Outcome {
        text: format!("{value}\n"),
        json: json!({ "algebra": alg.spec_string(), "element": value, "text": value.to_string() }),
        ok: true,
    })
}

fn el_json(ctx: &JetContext, l: &Lagrangian, el: &crate::variational::ElResult) -> Value {
    let equations: BTreeMap<String, Value> =
        ctx.fields().iter().zip(&el.equations).map(|(f, e)| (format!("EL_{f}"), to_value(e))).collect();
    json!({ "context": ctx, "lagrangian": l.density(), "equations": equations, "text": el.to_string() })
}

fn split_list(s: &str) -> Vec<String> {
    s.split(',').map(str::trim).filter(|p| !p.is_empty()).map(String::from).collect()
}

/// Coordinates and fields from the flags, inferred from the inputs when
/// omitted: `u_tx` names field `u` and coordinates `t`, `x`; other
/// single-letter names are coordinates. Inferred lists are sorted.
fn build_context(args: &ContextArgs, exprs: &[&String], section: Option<&String>) -> Result<JetContext, CliError> {
    let mut fields = BTreeSet::new();
    let mut coords = BTreeSet::new();
    let mut bare = BTreeSet::new();
    let mut names = BTreeSet::new();
    for text in exprs {
        names.extend(expr::parse(text)?.free_vars());
    }
    if let Some(s) = section {
        for piece in split_assignments(s) {
            if let Some((lhs, rhs)) = piece.split_once('=') {
                fields.insert(lhs.trim().to_string());
                names.extend(expr::parse(rhs)?.free_vars());
            }
        }
    }
    for n in names {
        match n.split_once('_') {
            Some((field, letters)) => {
                fields.insert(field.to_string());
                coords.extend(letters.chars().map(String::from));
            }
            None => {
                bare.insert(n);
            }
        }
    }
    for n in bare {
        if !fields.contains(&n) && n.chars().count() == 1 {
            coords.insert(n);
        }
    }
    let coords = match &args.coords {
        Some(c) => split_list(c),
        None if coords.is_empty() => return Err(CliError::Usage("cannot infer coordinates; pass --coords".into())),
        None => coords.into_iter().collect(),
    };
    let fields = match &args.fields {
        Some(f) => split_list(f),
        None if fields.is_empty() => return Err(CliError::Usage("cannot infer fields; pass --fields".into())),
        None => fields.into_iter().collect(),
    };
    Ok(JetContext::new(coords, fields)?)
}
