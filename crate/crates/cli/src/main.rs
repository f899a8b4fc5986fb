use std::io::Read;
use std::path::Path;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use freetorus_core::acceptance;
use freetorus_core::bundle::{circle_bundle, suspend, torus_bundle, torus_bundle_over_4, FourManifoldSpec};
use freetorus_core::catalog::{stabilization_m0, table1_base};
use freetorus_core::error::Error;
use freetorus_core::feasibility::{cohom2_check, cohom4_classify, free_torus_feasible, quotient_tower};
use freetorus_core::lattice::{IntMat, IntVec};
use freetorus_core::manifold::{from_betti, ManifoldInput};
use freetorus_core::oracle::{exhaustive_row_sweep, MAX_SWEEP_BOUND};

#[derive(Parser, Debug)]
#[command(name = "freetorus", version, about = "Free torus actions on connected sums of sphere products")]
struct Cli {
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Args, Debug)]
struct Input {
    /// Inline JSON, a file path, or `-` for standard input (the default).
    input: Option<String>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Betti profile and canonical connected sum of a manifold.
    Normalize(Input),
    /// Total space of a circle bundle: {"base": …, "euler": [..]}.
    BundleCircle(Input),
    /// Total space of a torus bundle: {"base": …, "euler": [[..], ..]}.
    BundleTorus(Input),
    /// Total space as an explicit connected sum: {"base": …, "euler": [..]}.
    Suspend {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        twisted: bool,
    },
    /// Whether a free T^k action with a form-(*) quotient can exist.
    Feasible {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        k: usize,
    },
    /// The tower of quotients realizing a feasible T^k action.
    Tower {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        k: usize,
    },
    /// Cohomogeneity-four or -two classification.
    Classify {
        #[command(flatten)]
        input: Input,
        #[arg(long, conflicts_with = "cohom2", required_unless_present = "cohom2")]
        cohom4: bool,
        #[arg(long)]
        cohom2: bool,
    },
    /// A catalog base and Euler class for a circle action.
    Base {
        #[command(flatten)]
        input: Input,
        #[arg(long, required = true)]
        table1: bool,
    },
    /// Least m after which the stabilized manifold carries a free circle action.
    Stabilize {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        twisted: bool,
    },
    /// Acceptance suite plus the exhaustive catalog sweep.
    Selftest {
        #[arg(long, default_value_t = 5)]
        bound: usize,
    },
}

/// Outcome of one command: the payload and whether the verdict is affirmative.
struct Outcome {
    value: Value,
    affirmative: bool,
}

impl Outcome {
    fn yes(value: Value) -> Self {
        Outcome { value, affirmative: true }
    }
}

enum Failure {
    Input(String),
    Engine(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Engine(e)
    }
}

impl Failure {
    fn exit_code(&self) -> u8 {
        match self {
            Failure::Input(_) => 2,
            Failure::Engine(e) => match e {
                Error::Infeasible(_) => 1,
                Error::Unsupported(_)
                | Error::NotPrimitive { .. }
                | Error::NotBasis { .. }
                | Error::SideCondition { .. }
                | Error::CatalogDefect(_)
                | Error::ExtendedCatalog(_) => 3,
                _ => 2,
            },
        }
    }

    fn to_json(&self) -> Value {
        let (code, message, diagnostics) = match self {
            Failure::Input(m) => ("input", m.clone(), Value::Null),
            Failure::Engine(e) => (e.code(), e.to_string(), e.diagnostics()),
        };
        json!({"error": {"code": code, "message": message, "diagnostics": diagnostics}})
    }
}

fn read_payload(input: &Input) -> Result<Value, Failure> {
    let raw = match input.input.as_deref() {
        None | Some("-") => {
            let mut s = String::new();
            std::io::stdin()
                .read_to_string(&mut s)
                .map_err(|e| Failure::Input(format!("reading standard input: {e}")))?;
            s
        }
        Some(s) if s.trim_start().starts_with(['{', '[']) => s.to_string(),
        Some(path) => std::fs::read_to_string(Path::new(path))
            .map_err(|e| Failure::Input(format!("reading {path}: {e}")))?,
    };
    serde_json::from_str(&raw).map_err(|e| Failure::Input(format!("malformed JSON: {e}")))
}

fn field<'a>(v: &'a Value, key: &str) -> Result<&'a Value, Failure> {
    v.get(key).ok_or_else(|| Failure::Input(format!("payload lacks \"{key}\"")))
}

/// A bundle base: a manifold in the shared schema, or a 4-manifold given as
/// {"b2": …, "w2": [..]}.
enum Base {
    Manifold(ManifoldInput),
    Four(FourManifoldSpec),
}

fn parse_base(v: &Value) -> Result<Base, Failure> {
    if v.get("dim").is_none() && v.get("b2").is_some() {
        return Ok(Base::Four(FourManifoldSpec::from_json(v)?));
    }
    if v.get("dim").and_then(Value::as_u64) == Some(4) {
        return Err(Failure::Input("give 4-manifold bases as {\"b2\": …, \"w2\": [..]}".into()));
    }
    Ok(Base::Manifold(ManifoldInput::from_json(v)?))
}

fn parse_vec(v: &Value) -> Result<IntVec, Failure> {
    Ok(IntVec(freetorus_core::json::value_to_ints(v)?))
}

fn parse_mat(v: &Value, cols: usize) -> Result<IntMat, Failure> {
    let rows = v
        .as_array()
        .ok_or_else(|| Failure::Input("\"euler\" must be an array of arrays".into()))?
        .iter()
        .map(parse_vec)
        .collect::<Result<Vec<_>, _>>()?;
    Ok(IntMat::from_rows(cols, rows)?)
}

fn manifold(input: &Input) -> Result<ManifoldInput, Failure> {
    Ok(ManifoldInput::from_json(&read_payload(input)?)?)
}

fn run(cmd: &Command) -> Result<Outcome, Failure> {
    match cmd {
        Command::Normalize(input) => {
            let m = manifold(input)?;
            let profile = match &m {
                ManifoldInput::Profile(p) => p.clone(),
                ManifoldInput::Expr(e) => e.betti_profile(),
            };
            let canonical = match &m {
                ManifoldInput::Expr(e) => e.canonicalize().ok(),
                ManifoldInput::Profile(p) => from_betti(p).ok(),
            };
            let form_star = profile.check_form_star().is_ok();
            Ok(Outcome::yes(json!({
                "profile": profile.to_json(),
                "form_star": form_star,
                "canonical": canonical.map(|c| c.to_json()),
            })))
        }
        Command::BundleCircle(input) => {
            let v = read_payload(input)?;
            let e = parse_vec(field(&v, "euler")?)?;
            let total = match parse_base(field(&v, "base")?)? {
                Base::Manifold(m) => circle_bundle(&m.expr()?, &e)?,
                Base::Four(f) => torus_bundle_over_4(&f, &IntMat::from_rows(f.b2, vec![e])?)?,
            };
            Ok(Outcome::yes(json!({"total": total.to_json()})))
        }
        Command::BundleTorus(input) => {
            let v = read_payload(input)?;
            let euler = field(&v, "euler")?;
            match parse_base(field(&v, "base")?)? {
                Base::Manifold(m) => {
                    let base = m.expr()?;
                    let e = parse_mat(euler, base.h2_basis().len())?;
                    Ok(Outcome::yes(torus_bundle(&base, &e)?.to_json()))
                }
                Base::Four(f) => {
                    let e = parse_mat(euler, f.b2)?;
                    Ok(Outcome::yes(json!({"total": torus_bundle_over_4(&f, &e)?.to_json()})))
                }
            }
        }
        Command::Suspend { input, twisted } => {
            let v = read_payload(input)?;
            let e = parse_vec(field(&v, "euler")?)?;
            let base = ManifoldInput::from_json(field(&v, "base")?)?.expr()?;
            let total = suspend(&base, &e, *twisted)?;
            Ok(Outcome::yes(json!({"total": total.to_json(), "profile": total.betti_profile().to_json()})))
        }
        Command::Feasible { input, k } => {
            let report = free_torus_feasible(&manifold(input)?.form_star_profile()?, *k)?;
            Ok(Outcome { affirmative: report.verdict, value: report.to_json() })
        }
        Command::Tower { input, k } => {
            let tower = quotient_tower(&manifold(input)?.form_star_profile()?, *k)?;
            Ok(Outcome::yes(tower.to_json()))
        }
        Command::Classify { input, cohom4, .. } => {
            let p = manifold(input)?.form_star_profile()?;
            if *cohom4 {
                let w = cohom4_classify(&p)?;
                Ok(Outcome {
                    affirmative: w.is_some(),
                    value: json!({"verdict": w.is_some(), "witness": w.map(|w| w.to_json())}),
                })
            } else {
                let ok = cohom2_check(&p)?;
                Ok(Outcome { affirmative: ok, value: json!({"verdict": ok}) })
            }
        }
        Command::Base { input, .. } => {
            let w = table1_base(&manifold(input)?.form_star_profile()?)?;
            Ok(Outcome {
                affirmative: w.is_some(),
                value: json!({"found": w.is_some(), "witness": w.map(|w| w.to_json())}),
            })
        }
        Command::Stabilize { input, twisted } => {
            let r = stabilization_m0(&manifold(input)?.form_star_profile()?, *twisted)?;
            Ok(Outcome::yes(r.to_json()))
        }
        Command::Selftest { bound } => {
            if *bound > MAX_SWEEP_BOUND {
                return Err(Failure::Input(format!("--bound is at most {MAX_SWEEP_BOUND}")));
            }
            let criteria = acceptance::run_all();
            let sweep = exhaustive_row_sweep(*bound)?;
            let ok = criteria.iter().all(|c| c.passed) && sweep.counterexamples.is_empty();
            Ok(Outcome {
                affirmative: ok,
                value: json!({
                    "passed": ok,
                    "criteria": criteria.iter().map(|c| c.to_json()).collect::<Vec<_>>(),
                    "sweep": sweep.to_json(),
                }),
            })
        }
    }
}

fn scalar(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

/// Aligned `key  value` lines; nested objects are flattened with dotted keys
/// and arrays of scalars are printed inline.
fn render_text(v: &Value) -> String {
    fn walk(prefix: &str, v: &Value, out: &mut Vec<(String, String)>) {
        match v {
            Value::Object(map) => {
                for (k, x) in map {
                    let key = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
                    walk(&key, x, out);
                }
            }
            Value::Array(xs) if xs.iter().any(|x| x.is_object() || x.is_array()) => {
                for (i, x) in xs.iter().enumerate() {
                    walk(&format!("{prefix}[{i}]"), x, out);
                }
            }
            Value::Array(xs) => {
                let items: Vec<String> = xs.iter().map(scalar).collect();
                out.push((prefix.to_string(), format!("[{}]", items.join(", "))));
            }
            other => out.push((prefix.to_string(), scalar(other))),
        }
    }
    let mut rows = Vec::new();
    walk("", v, &mut rows);
    let width = rows.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
    rows.iter().map(|(k, x)| format!("{k:<width$}  {x}\n")).collect()
}

fn emit(v: &Value, format: Format) {
    match format {
        Format::Json => println!("{}", serde_json::to_string_pretty(v).expect("JSON values serialize")),
        Format::Text => print!("{}", render_text(v)),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                return ExitCode::SUCCESS;
            }
            let f = Failure::Input(e.render().to_string().trim().to_string());
            emit(&f.to_json(), Format::Json);
            return ExitCode::from(2);
        }
    };
    match run(&cli.command) {
        Ok(out) => {
            emit(&out.value, cli.format);
            ExitCode::from(if out.affirmative { 0 } else { 1 })
        }
        Err(f) => {
            emit(&f.to_json(), cli.format);
            ExitCode::from(f.exit_code())
        }
    }
}
