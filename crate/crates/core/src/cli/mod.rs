//! Command-line front end behind the `qmap` binary.

pub mod verify;

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::exactalg::rational::format_rational;
use crate::exactalg::Truncation;
use crate::ifunction::{big_i, big_i_operator, first_difference, small_i, IFunction};
use crate::mirror::{
    birkhoff, extract_invariant, flatten, virtual_dimension_ok, Coordinates, InvariantQuery,
    MirrorOutput,
};
use crate::target::TargetModel;
pub use verify::{run_suite, Check, Suite};

pub const EXIT_OK: i32 = 0;
pub const EXIT_OTHER: i32 = 1;
pub const EXIT_VALIDATION: i32 = 2;
pub const EXIT_INCONSISTENCY: i32 = 3;
pub const EXIT_TRUNCATION: i32 = 4;
pub const EXIT_ORACLE_MISMATCH: i32 = 5;

#[derive(Debug, Parser)]
#[command(name = "qmap", version, about = "Exact quasimap I-functions and genus-zero invariants")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[arg(long, global = true, value_enum, default_value = "json")]
    pub format: Format,
    /// Directory for cached results.
    #[arg(long, global = true, env = "QMAP_CACHE_DIR")]
    pub cache: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

#[derive(Debug, Args)]
pub struct TargetArg {
    /// Target spec file, or a bundled name (p1, p2, p4_quintic, p1xp1).
    #[arg(long, default_value = "p2")]
    pub target: String,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check the GIT data and print the chamber.
    Validate {
        #[command(flatten)]
        target: TargetArg,
        /// Degree up to which twist convexity is checked.
        #[arg(short = 'D', default_value_t = 3)]
        d: u32,
    },
    /// Small or big I-function.
    Ifun {
        #[arg(long, conflicts_with = "big", required_unless_present = "big")]
        small: bool,
        #[arg(long)]
        big: bool,
        #[command(flatten)]
        target: TargetArg,
        #[arg(short = 'D', default_value_t = 2)]
        d: u32,
        #[arg(short = 'T', default_value_t = 1)]
        t: u32,
    },
    /// Mirror map and J-function from the big I-function truncated at (D, T).
    Mirror {
        #[command(flatten)]
        target: TargetArg,
        #[arg(short = 'D', default_value_t = 2)]
        d: u32,
        #[arg(short = 'T', default_value_t = 2)]
        t: u32,
        #[arg(long, value_enum, default_value = "flat")]
        coordinates: CoordArg,
    },
    /// One genus-zero invariant ⟨γ_{j1}, …, γ_{jk}, last·ψ^a⟩_β.
    Invariants {
        #[command(flatten)]
        target: TargetArg,
        /// Defaults to the θ-degree of the class.
        #[arg(short = 'D')]
        d: Option<u32>,
        /// Defaults to one more than the number of insertions.
        #[arg(short = 'T')]
        t: Option<u32>,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
        beta: Vec<i64>,
        /// Basis labels or indices, comma separated.
        #[arg(long = "insert", value_delimiter = ',')]
        insertions: Vec<String>,
        /// Basis label or class expression for the last marking.
        #[arg(long)]
        last: String,
        #[arg(long, default_value_t = 0)]
        psi: u32,
    },
    /// Compare engine output with the independent oracles.
    Verify {
        #[arg(long, value_enum, default_value = "all")]
        suite: Suite,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum CoordArg {
    Flat,
    Mirror,
}

/// What a command printed and how it exits.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn ok(stdout: String) -> Outcome {
        Outcome {
            code: EXIT_OK,
            stdout,
            stderr: String::new(),
        }
    }

    fn from_error(e: &Error) -> Outcome {
        Outcome {
            code: exit_code(e),
            stdout: String::new(),
            stderr: format!("qmap: {e}\n"),
        }
    }
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::InvalidArgument(_)
        | Error::MalformedRing(_)
        | Error::EmptyQuotient { .. }
        | Error::ConditionStarViolated { .. }
        | Error::NonProjective(_)
        | Error::NonConvexTwist { .. }
        | Error::NoDivisorLift(_)
        | Error::Configuration(_)
        | Error::Parse(_) => EXIT_VALIDATION,
        Error::InternalInconsistency(_) => EXIT_INCONSISTENCY,
        Error::InsufficientTruncation(_) | Error::SaturatedTruncation(_) => EXIT_TRUNCATION,
        Error::NotInvertible(_)
        | Error::NonNilpotentExponent(_)
        | Error::Unsupported(_)
        | Error::Io(_) => EXIT_OTHER,
    }
}

/// Parses `args` (program name first) and runs the command.
pub fn run_args<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => run(&cli),
        Err(e) => {
            let code = e.exit_code();
            let text = e.render().to_string();
            if code == 0 {
                Outcome::ok(text)
            } else {
                Outcome {
                    code,
                    stdout: String::new(),
                    stderr: text,
                }
            }
        }
    }
}

pub fn run(cli: &Cli) -> Outcome {
    match dispatch(cli) {
        Ok(o) => o,
        Err(e) => Outcome::from_error(&e),
    }
}

fn dispatch(cli: &Cli) -> Result<Outcome> {
    let fmt = cli.format;
    match &cli.command {
        Command::Validate { target, d } => {
            let t = load_target(&target.target)?;
            Ok(Outcome::ok(render(fmt, &cmd_validate(&t, *d)?, text_validate)))
        }
        Command::Ifun {
            small,
            target,
            d,
            t,
            ..
        } => {
            let tm = load_target(&target.target)?;
            let tdeg = if *small { 0 } else { *t };
            let key = json!({"kind": if *small { "small" } else { "big" }});
            cached(cli, "ifun", &tm, Truncation { d: *d, t: tdeg }, key, || {
                let doc = cmd_ifun(&tm, *small, *d, tdeg)?;
                Ok(render(fmt, &doc, text_series))
            })
        }
        Command::Mirror {
            target,
            d,
            t,
            coordinates,
        } => {
            let tm = load_target(&target.target)?;
            let key = json!({"coordinates": format!("{coordinates:?}")});
            cached(cli, "mirror", &tm, Truncation { d: *d, t: *t }, key, || {
                let out = cmd_mirror(&tm, *d, *t, *coordinates)?;
                let mut doc = out.to_json();
                doc["target_sha256"] = json!(target_hash(&tm));
                Ok(render(fmt, &doc, text_mirror))
            })
        }
        Command::Invariants {
            target,
            d,
            t,
            beta,
            insertions,
            last,
            psi,
        } => {
            let tm = load_target(&target.target)?;
            let query = parse_query(&tm, beta, insertions, last, *psi)?;
            let deg = crate::exactalg::series::theta_degree(tm.theta(), beta);
            let d = d.unwrap_or_else(|| {
                let c = deg.ceil().to_integer();
                u32::try_from(c).unwrap_or(0)
            });
            let t = t.unwrap_or(insertions.len() as u32 + 1);
            let key = json!({"beta": beta, "insertions": query.insertions, "last": query.last_class.to_strings(), "psi": psi});
            cached(cli, "invariants", &tm, Truncation { d, t }, key, || {
                let doc = cmd_invariants(&tm, &query, d, t)?;
                Ok(render(fmt, &doc, text_invariant))
            })
        }
        Command::Verify { suite } => {
            let checks = run_suite(*suite)?;
            let pass = checks.iter().all(|c| c.pass);
            let doc = json!({"suite": format!("{suite:?}").to_lowercase(), "pass": pass, "checks": checks});
            let mut out = Outcome::ok(render(fmt, &doc, text_verify));
            if !pass {
                out.code = EXIT_ORACLE_MISMATCH;
                out.stderr = "qmap: oracle mismatch\n".into();
            }
            Ok(out)
        }
    }
}

/// A spec file path, or the name of a bundled target.
pub fn load_target(name: &str) -> Result<TargetModel> {
    let path = Path::new(name);
    if path.is_file() {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        return TargetModel::from_json(&text, path.parent());
    }
    TargetModel::bundled(name).map_err(|_| {
        Error::Configuration(format!(
            "target {name:?} is neither a readable file nor a bundled target"
        ))
    })
}

/// Canonical content of a resolved target, for cache keys.
pub fn fingerprint(t: &TargetModel) -> Value {
    let ring = t.ring();
    let names = ring.generator_names();
    let lifts: Vec<Option<String>> = (0..ring.rank())
        .map(|i| t.insertion_lift(i).map(|p| p.display(&names)))
        .collect();
    json!({
        "name": t.name(),
        "charges": t.presentation().charges,
        "theta": t.theta().iter().map(format_rational).collect::<Vec<_>>(),
        "ring": ring.to_table(),
        "divisor_classes": t.divisor_classes().iter().map(|c| c.to_strings()).collect::<Vec<_>>(),
        "twist": t.twist().map(|w| w.weights.clone()),
        "insertion_lifts": lifts,
    })
}

pub fn target_hash(t: &TargetModel) -> String {
    let text = serde_json::to_string(&fingerprint(t)).expect("target serializes");
    hex::encode(Sha256::digest(text.as_bytes()))
}

/// Cache key: SHA-256 over the target content, truncation, command and
/// options.
pub fn cache_key(command: &str, t: &TargetModel, trunc: Truncation, options: &Value, fmt: Format) -> String {
    let doc = json!({
        "version": env!("CARGO_PKG_VERSION"),
        "command": command,
        "target": fingerprint(t),
        "truncation": {"D": trunc.d, "T": trunc.t},
        "options": options,
        "format": format!("{fmt:?}"),
    });
    let text = serde_json::to_string(&doc).expect("key serializes");
    hex::encode(Sha256::digest(text.as_bytes()))
}

fn cached<F>(
    cli: &Cli,
    command: &str,
    t: &TargetModel,
    trunc: Truncation,
    options: Value,
    compute: F,
) -> Result<Outcome>
where
    F: FnOnce() -> Result<String>,
{
    let Some(dir) = &cli.cache else {
        return compute().map(Outcome::ok);
    };
    let key = cache_key(command, t, trunc, &options, cli.format);
    let path = dir.join(format!("{key}.out"));
    if let Ok(text) = std::fs::read_to_string(&path) {
        return Ok(Outcome::ok(text));
    }
    let text = compute()?;
    let io = |e: std::io::Error| Error::Io(format!("cache {}: {e}", dir.display()));
    std::fs::create_dir_all(dir).map_err(io)?;
    let tmp = dir.join(format!("{key}.{}.tmp", std::process::id()));
    std::fs::write(&tmp, &text).map_err(io)?;
    std::fs::rename(&tmp, &path).map_err(io)?;
    Ok(Outcome::ok(text))
}

fn render(fmt: Format, doc: &Value, text: fn(&Value) -> String) -> String {
    match fmt {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(doc).expect("document serializes");
            s.push('\n');
            s
        }
        Format::Text => text(doc),
    }
}

pub fn cmd_validate(t: &TargetModel, d: u32) -> Result<Value> {
    let convexity = match t.twist() {
        Some(_) => Some(t.convexity_check(d)?),
        None => None,
    };
    let ring = t.ring();
    Ok(json!({
        "target": t.name(),
        "status": "ok",
        "chamber": t.chamber(),
        "dimension": ring.dimension(),
        "basis": ring.basis().iter().map(|b| b.label.clone()).collect::<Vec<_>>(),
        "convexity": convexity,
    }))
}

fn series_doc(i: &IFunction) -> Value {
    let ring = i.target.ring();
    json!({
        "target": i.target.name(),
        "kind": match i.kind { crate::ifunction::Kind::Small => "small", crate::ifunction::Kind::Big => "big" },
        "basis": ring.basis().iter().map(|b| b.label.clone()).collect::<Vec<_>>(),
        "euler_class": i.euler_class().map(|e| e.to_strings()),
        "series": i.series.to_json(),
        "target_sha256": target_hash(&i.target),
    })
}

/// Small I-function, or the big one with both constructions cross-checked.
pub fn cmd_ifun(t: &TargetModel, small: bool, d: u32, tdeg: u32) -> Result<Value> {
    if small {
        return Ok(series_doc(&small_i(t, d)?));
    }
    let a = big_i(t, d, tdeg)?;
    let b = big_i_operator(t, d, tdeg)?;
    if let Some(idx) = first_difference(&a.series, &b.series) {
        return Err(Error::InternalInconsistency(format!(
            "shift-rule and operator constructions differ at q^{:?} t^{:?}",
            idx.beta, idx.m
        )));
    }
    Ok(series_doc(&a))
}

pub fn cmd_mirror(t: &TargetModel, d: u32, tdeg: u32, coords: CoordArg) -> Result<MirrorOutput> {
    let out = birkhoff(&big_i(t, d, tdeg)?)?;
    out.check_contract()?;
    match coords {
        CoordArg::Mirror => Ok(out),
        CoordArg::Flat => {
            let flat = flatten(&out)?;
            debug_assert_eq!(flat.coordinates, Coordinates::Flat);
            flat.check_contract()?;
            Ok(flat)
        }
    }
}

fn parse_query(
    t: &TargetModel,
    beta: &[i64],
    insertions: &[String],
    last: &str,
    psi: u32,
) -> Result<InvariantQuery> {
    let ring = t.ring();
    let slot = |s: &str| -> Result<usize> {
        let s = s.trim();
        ring.index_of(s)
            .or_else(|| s.parse::<usize>().ok().filter(|&i| i < ring.rank()))
            .ok_or_else(|| Error::InvalidArgument(format!("{s:?} is not a basis label or index")))
    };
    Ok(InvariantQuery {
        beta: beta.to_vec(),
        insertions: insertions.iter().map(|s| slot(s)).collect::<Result<_>>()?,
        last_class: ring.parse_class(last)?,
        psi_power: psi,
    })
}

pub fn cmd_invariants(t: &TargetModel, q: &InvariantQuery, d: u32, tdeg: u32) -> Result<Value> {
    let ring = t.ring();
    let labels: Vec<&str> = q.insertions.iter().map(|&j| ring.label(j)).collect();
    let mut doc = json!({
        "target": t.name(),
        "beta": q.beta,
        "insertions": labels,
        "last_class": q.last_class.to_strings(),
        "psi": q.psi_power,
        "truncation": {"D": d, "T": tdeg},
    });
    if !virtual_dimension_ok(t, q) {
        doc["value"] = json!("0");
        doc["warning"] = json!("insertion degrees do not match the virtual dimension");
        return Ok(doc);
    }
    if q.beta.len() != t.torus_rank() {
        return Err(Error::InvalidArgument(format!(
            "class {:?} has the wrong length",
            q.beta
        )));
    }
    let flat = flatten(&birkhoff(&big_i(t, d, tdeg)?)?)?;
    doc["value"] = json!(format_rational(&extract_invariant(&flat, q)?));
    Ok(doc)
}

fn text_validate(doc: &Value) -> String {
    let c = &doc["chamber"];
    format!(
        "{}: ok\n  dimension {}\n  chamber rays {}\n  cones {}\n",
        doc["target"].as_str().unwrap_or(""),
        doc["dimension"],
        c["rays"],
        c["cones"]
    )
}

fn laurent_text(l: &Value, basis: &[String]) -> String {
    let Some(map) = l.as_object() else {
        return String::new();
    };
    let mut terms: Vec<(i32, String)> = Vec::new();
    for (e, coeffs) in map {
        let e: i32 = e.parse().unwrap_or(0);
        let parts: Vec<String> = coeffs
            .as_array()
            .into_iter()
            .flatten()
            .zip(basis)
            .filter_map(|(c, b)| {
                let c = c.as_str()?;
                (c != "0").then(|| match (c, b.as_str()) {
                    (_, "1") => c.to_string(),
                    ("1", _) => b.clone(),
                    ("-1", _) => format!("-{b}"),
                    _ => format!("{c}*{b}"),
                })
            })
            .collect();
        let class = if parts.len() == 1 {
            parts[0].clone()
        } else {
            format!("({})", parts.join(" + "))
        };
        let term = match (e, class.as_str()) {
            (0, _) => class,
            (_, "1") => format!("z^{e}"),
            (_, "-1") => format!("-z^{e}"),
            _ => format!("{class} z^{e}"),
        };
        terms.push((e, term));
    }
    terms.sort_by(|a, b| b.0.cmp(&a.0));
    let body: Vec<String> = terms.into_iter().map(|(_, s)| s).collect();
    body.join(" + ").replace("+ -", "- ")
}

fn labels(doc: &Value) -> Vec<String> {
    doc["basis"]
        .as_array()
        .into_iter()
        .flatten()
        .filter_map(|b| b.as_str().map(String::from))
        .collect()
}

fn series_text(series: &Value, basis: &[String], each: fn(&Value, &[String]) -> String) -> String {
    let mut out = String::new();
    if let Some(terms) = series["terms"].as_object() {
        for (beta, by_m) in terms {
            for (m, v) in by_m.as_object().into_iter().flatten() {
                out.push_str(&format!("q^{beta} t^{m}: {}\n", each(v, basis)));
            }
        }
    }
    out
}

fn text_series(doc: &Value) -> String {
    let basis = labels(doc);
    format!(
        "{} {} I-function, truncation {}\n{}",
        doc["target"].as_str().unwrap_or(""),
        doc["kind"].as_str().unwrap_or(""),
        doc["series"]["truncation"],
        series_text(&doc["series"], &basis, laurent_text)
    )
}

fn class_text(v: &Value, basis: &[String]) -> String {
    let mut one = serde_json::Map::new();
    one.insert("0".into(), v.clone());
    laurent_text(&Value::Object(one), basis)
}

fn text_mirror(doc: &Value) -> String {
    let basis = labels(doc);
    format!(
        "{} ({} coordinates)\ntau:\n{}J:\n{}",
        doc["target"].as_str().unwrap_or(""),
        doc["coordinates"].as_str().unwrap_or(""),
        series_text(&doc["tau"], &basis, class_text),
        series_text(&doc["J"], &basis, laurent_text)
    )
}

fn text_invariant(doc: &Value) -> String {
    let mut s = doc["value"].as_str().unwrap_or("").to_string();
    if let Some(w) = doc["warning"].as_str() {
        s.push_str(&format!(" (warning: {w})"));
    }
    s.push('\n');
    s
}

fn text_verify(doc: &Value) -> String {
    let mut out = String::new();
    for c in doc["checks"].as_array().into_iter().flatten() {
        out.push_str(&format!(
            "{} {} engine={} oracle={}\n",
            if c["pass"].as_bool() == Some(true) { "PASS" } else { "FAIL" },
            c["check"].as_str().unwrap_or(""),
            c["engine_value"].as_str().unwrap_or(""),
            c["oracle_value"].as_str().unwrap_or("")
        ));
    }
    out
}
