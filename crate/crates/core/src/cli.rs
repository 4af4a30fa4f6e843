//! Command-line front end.
//!
//! Every command reads an instance from `--file` or `--fixture` and writes
//! JSON with rationals as `"p/q"` strings. Exit codes: 0 ok, 1 failed
//! fixture assertion, 2 invalid input, 3 infeasible or failed market
//! assumption, 4 acceptability arbitrage.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Map, Value};

use crate::checks::run_checks;
use crate::diagnostics::{
    deal_check, epsilon_lsc_probe, existence_report, lsc_probe, uniqueness_at, uniqueness_report,
    usc_report, Classification, ProbeOptions, ProbeReport, UscVerdict, DEFAULT_UNIQUENESS_SAMPLES,
};
use crate::error::{Error, Result};
use crate::fixtures::FixtureId;
use crate::instance_io::{parse_position, InstanceFile, ProbeJson};
use crate::model::ProblemInstance;
use crate::rational::{fmt_decimal, fmt_rat, fmt_vec, parse_rat, unwrap_vec, Rat};
use crate::risk_engine::{epsilon_optimal_set, optimal_set, rho, ValueKind};

#[derive(Parser, Debug)]
#[command(
    name = "capreq",
    version,
    about = "Capital requirements and optimal eligible payoffs in exact arithmetic"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Source {
    /// JSON instance file.
    #[arg(long, conflicts_with = "fixture")]
    pub file: Option<PathBuf>,
    /// Built-in fixture id, e.g. p2_var_lsc.
    #[arg(long)]
    pub fixture: Option<String>,
    /// Adds decimal renderings with this many digits next to exact values.
    #[arg(long)]
    pub decimals: Option<usize>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Capital requirement at a position.
    Rho {
        #[command(flatten)]
        source: Source,
        /// `0`, a vector such as `(1,0,-1/2)`, a named position, or label terms like `-1F`.
        #[arg(
            long,
            visible_alias = "base",
            default_value = "0",
            allow_hyphen_values = true
        )]
        position: String,
    },
    /// Optimal portfolios at a position, as vertices, rays and lineality.
    OptimalSet {
        #[command(flatten)]
        source: Source,
        #[arg(
            long,
            visible_alias = "base",
            default_value = "0",
            allow_hyphen_values = true
        )]
        position: String,
    },
    /// Portfolios within `eps` of the requirement.
    EpsilonSet {
        #[command(flatten)]
        source: Source,
        #[arg(
            long,
            visible_alias = "base",
            default_value = "0",
            allow_hyphen_values = true
        )]
        position: String,
        #[arg(long, allow_hyphen_values = true)]
        eps: String,
    },
    /// Good deals, existence, uniqueness and upper semicontinuity reports.
    Diagnose {
        #[command(flatten)]
        source: Source,
        /// Random positions sampled when no uniqueness certificate applies.
        #[arg(long, default_value_t = DEFAULT_UNIQUENESS_SAMPLES)]
        samples: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
    /// Semicontinuity probe along `base + 2^-k dir`.
    Probe {
        #[command(flatten)]
        source: Source,
        #[arg(
            long,
            visible_alias = "base",
            default_value = "0",
            allow_hyphen_values = true
        )]
        position: String,
        /// Direction; when omitted, the probes stored in the instance file run.
        #[arg(long, allow_hyphen_values = true)]
        dir: Option<String>,
        /// Probe the ε-optimal sets instead of the optimal sets.
        #[arg(long, allow_hyphen_values = true)]
        eps: Option<String>,
        #[arg(long = "K", default_value_t = 16)]
        k_max: u32,
        #[arg(long = "box", default_value = "10")]
        half_width: String,
        #[arg(long)]
        parallel: bool,
        /// Prints one JSON document instead of CSV plus a summary line.
        #[arg(long)]
        json: bool,
    },
    /// Runs the reference assertions on the built-in fixtures.
    PaperExamples {
        #[arg(long)]
        only: Option<String>,
        #[arg(long)]
        json: bool,
    },
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::NoUnitPayoff
        | Error::DegenerateMarket
        | Error::NeverAcceptable
        | Error::EmptyPolyhedron
        | Error::NotOptimal
        | Error::NotFinite
        | Error::EmptyOptimalSet
        | Error::EmptyAfterBoxing(_)
        | Error::BoxBoundaryHit(_) => 3,
        Error::AcceptabilityArbitrage { .. } => 4,
        _ => 2,
    }
}

struct Loaded {
    inst: ProblemInstance,
    named: BTreeMap<String, Vec<Rat>>,
    probes: Vec<ProbeJson>,
    decimals: Option<usize>,
}

impl Loaded {
    fn position(&self, text: &str) -> Result<Vec<Rat>> {
        parse_position(text, &self.inst.space, &self.named)
    }

    fn rat(&self, r: &Rat) -> Value {
        Value::String(fmt_rat(r))
    }

    fn vec(&self, v: &[Rat]) -> Value {
        json!(fmt_vec(v))
    }

    fn mat(&self, m: &[Vec<Rat>]) -> Value {
        Value::Array(m.iter().map(|v| self.vec(v)).collect())
    }

    /// Inserts `key` and, with `--decimals`, `key_decimal`.
    fn put_rat(&self, obj: &mut Map<String, Value>, key: &str, r: &Rat) {
        obj.insert(key.into(), self.rat(r));
        if let Some(d) = self.decimals {
            obj.insert(format!("{key}_decimal"), Value::String(fmt_decimal(r, d)));
        }
    }

    fn put_mat(&self, obj: &mut Map<String, Value>, key: &str, m: &[Vec<Rat>]) {
        obj.insert(key.into(), self.mat(m));
        if let Some(d) = self.decimals {
            let dec: Vec<Vec<String>> = m
                .iter()
                .map(|v| v.iter().map(|r| fmt_decimal(r, d)).collect())
                .collect();
            obj.insert(format!("{key}_decimal"), json!(dec));
        }
    }
}

fn load(src: &Source) -> Result<Loaded> {
    let (inst, named, probes) = match (&src.file, &src.fixture) {
        (Some(path), None) => {
            let f = InstanceFile::read(path)?;
            (f.to_instance()?, f.named_positions(), f.probes.clone())
        }
        (None, Some(id)) => (
            id.parse::<FixtureId>()?.build(),
            BTreeMap::new(),
            Vec::new(),
        ),
        _ => {
            return Err(Error::InvalidInput(
                "exactly one of --file and --fixture is required".into(),
            ))
        }
    };
    Ok(Loaded {
        inst,
        named,
        probes,
        decimals: src.decimals,
    })
}

fn kind_json(kind: &ValueKind) -> Value {
    match kind {
        ValueKind::Exact => json!("exact"),
        ValueKind::Numeric { tol } => json!({ "numeric": { "tolerance": tol } }),
    }
}

fn cmd_rho(src: &Source, position: &str) -> Result<Value> {
    let l = load(src)?;
    let x = l.position(position)?;
    let r = rho(&l.inst, &x)?;
    let mut obj = Map::new();
    l.put_rat(&mut obj, "value", &r.value);
    obj.insert("attained".into(), json!(r.attained));
    obj.insert("kind".into(), kind_json(&r.kind));
    obj.insert("position".into(), l.vec(&x));
    Ok(Value::Object(obj))
}

fn cmd_optimal_set(src: &Source, position: &str) -> Result<Value> {
    let l = load(src)?;
    let x = l.position(position)?;
    let set = optimal_set(&l.inst, &x)?;
    let mut obj = Map::new();
    if set.is_empty() {
        obj.insert("status".into(), json!("Empty"));
        l.put_rat(&mut obj, "rho", &set.rho);
        if let Some(c) = &set.certificate {
            obj.insert("certificate".into(), json!(c));
        }
        return Ok(Value::Object(obj));
    }
    let market = &l.inst.market;
    let (vertices, rays, lineality) = (set.vertices(), set.rays(), set.lineality());
    obj.insert("status".into(), json!("Nonempty"));
    l.put_rat(&mut obj, "rho", &set.rho);
    obj.insert("kind".into(), kind_json(&set.kind));
    obj.insert("bounded".into(), json!(set.is_bounded()));
    obj.insert("dimension".into(), json!(set.dimension()?));
    obj.insert("pieces".into(), json!(set.pieces.len()));
    l.put_mat(&mut obj, "vertices", &vertices);
    obj.insert("rays".into(), l.mat(&rays));
    obj.insert("lineality".into(), l.mat(&lineality));
    let payoffs =
        |m: &[Vec<Rat>]| -> Vec<Vec<Rat>> { m.iter().map(|v| market.payoff(v)).collect() };
    obj.insert(
        "payoffs".into(),
        json!({
            "vertices": l.mat(&payoffs(&vertices)),
            "rays": l.mat(&payoffs(&rays)),
            "lineality": l.mat(&payoffs(&lineality)),
        }),
    );
    Ok(Value::Object(obj))
}

fn cmd_epsilon_set(src: &Source, position: &str, eps: &str) -> Result<Value> {
    let l = load(src)?;
    let x = l.position(position)?;
    let eps = parse_rat(eps)?;
    let set = epsilon_optimal_set(&l.inst, &x, &eps)?;
    let mut obj = Map::new();
    obj.insert(
        "status".into(),
        json!(if set.pieces.is_empty() {
            "Empty"
        } else {
            "Nonempty"
        }),
    );
    l.put_rat(&mut obj, "epsilon", &set.epsilon);
    l.put_rat(&mut obj, "rho", &set.rho);
    obj.insert("note".into(), json!(set.strictness_note));
    let pieces: Vec<Value> = set
        .pieces
        .iter()
        .map(|(branch, p)| json!({ "branch": branch, "hrep": p.to_json() }))
        .collect();
    obj.insert("pieces".into(), Value::Array(pieces));
    Ok(Value::Object(obj))
}

fn cmd_diagnose(src: &Source, samples: usize, seed: u64) -> Result<Value> {
    let l = load(src)?;
    let inst = &l.inst;
    let n = inst.n_atoms();
    let zero = vec![Rat::from_integer(0.into()); n];
    let deals = deal_check(inst)?;
    let existence = existence_report(inst)?;
    let usc = usc_report(inst)?;
    let opt_vec = |v: &Option<Vec<Rat>>| v.as_ref().map_or(Value::Null, |w| l.vec(w));
    let uniqueness = if inst.compiled.polyhedral().is_some() {
        let u = uniqueness_report(inst, samples, seed)?;
        let at_zero = uniqueness_at(inst, &zero).ok();
        json!({
            "global_certificate": u.global_certificate.map(|g| format!("{g:?}")),
            "falsification_witness": u.falsification_witness.map(|(x, d)| json!({ "position": l.vec(&x), "face_dim": d })),
            "samples_checked": u.samples_checked,
            "face_dim_at_zero": at_zero.map(|a| a.face_dim),
        })
    } else {
        let u = uniqueness_report(inst, 0, seed)?;
        json!({ "global_certificate": u.global_certificate.map(|g| format!("{g:?}")) })
    };
    let usc_json = match &usc.verdict {
        UscVerdict::Usc => json!({ "verdict": "USC", "unbounded_at_zero": usc.unbounded_at_zero }),
        UscVerdict::NotUsc { scalable_witness } => json!({
            "verdict": "NotUSC",
            "witness": l.vec(scalable_witness),
            "unbounded_at_zero": usc.unbounded_at_zero,
        }),
        UscVerdict::Inconclusive { reason } => json!({
            "verdict": "Inconclusive",
            "reason": reason,
            "unbounded_at_zero": usc.unbounded_at_zero,
        }),
    };
    let optimal_at_zero = match optimal_set(inst, &zero) {
        Ok(s) if !s.is_empty() => json!({
            "vertices": l.mat(&s.vertices()),
            "rays": l.mat(&s.rays()),
            "lineality": l.mat(&s.lineality()),
        }),
        Ok(_) => json!("Empty"),
        Err(e) => json!({ "error": e.to_string() }),
    };
    Ok(json!({
        "instance": inst.name,
        "deals": {
            "good_deal": opt_vec(&deals.good_deal),
            "scalable_good_deal": opt_vec(&deals.scalable_good_deal),
            "note": deals.note,
        },
        "existence": { "verdict": format!("{:?}", existence.verdict), "reasons": existence.reasons },
        "uniqueness": uniqueness,
        "usc": usc_json,
        "optimal_set_at_zero": optimal_at_zero,
    }))
}

fn probe_json(l: &Loaded, r: &ProbeReport, with_series: bool) -> Value {
    let mut obj = Map::new();
    obj.insert("classification".into(), json!(r.classification.name()));
    if let Classification::ViolationWitness { delta } = &r.classification {
        l.put_rat(&mut obj, "delta", delta);
    }
    obj.insert("base".into(), l.vec(&r.base));
    obj.insert("direction".into(), l.vec(&r.direction));
    if let Some(e) = &r.epsilon {
        obj.insert("epsilon".into(), l.rat(e));
    }
    obj.insert("box".into(), l.rat(&r.half_width));
    if let Some(h) = &r.hypotheses {
        obj.insert(
            "hypotheses".into(),
            json!({
                "full_dimensional_branches": h.full_dimensional_branches,
                "strictly_feasible": h.strictly_feasible,
                "interior_positive_payoff": h.interior_positive_payoff,
                "interior_recession_payoff": h.interior_recession_payoff,
                "strictly_positive_payoff": h.strictly_positive_payoff,
            }),
        );
    }
    if with_series {
        obj.insert("scales".into(), l.vec(&r.scales));
        obj.insert("deficits_lsc".into(), l.vec(&r.deficits_lsc));
        obj.insert("deficits_outer".into(), l.vec(&r.deficits_outer));
    }
    Value::Object(obj)
}

struct ProbeArgs<'a> {
    position: &'a str,
    dir: Option<&'a str>,
    eps: Option<&'a str>,
    opts: ProbeOptions,
    json: bool,
}

fn cmd_probe(src: &Source, a: &ProbeArgs, out: &mut dyn Write) -> Result<()> {
    let l = load(src)?;
    let mut runs: Vec<(Vec<Rat>, Vec<Rat>, Option<Rat>)> = Vec::new();
    match a.dir {
        Some(d) => runs.push((
            l.position(a.position)?,
            l.position(d)?,
            a.eps.map(parse_rat).transpose()?,
        )),
        None if !l.probes.is_empty() => {
            for p in &l.probes {
                let eps = match a.eps {
                    Some(e) => Some(parse_rat(e)?),
                    None => p.epsilon.as_ref().map(|e| e.0.clone()),
                };
                runs.push((unwrap_vec(&p.base), unwrap_vec(&p.direction), eps));
            }
        }
        None => return Err(Error::InvalidInput("--dir is required".into())),
    }
    let mut reports = Vec::new();
    for (x, d, eps) in runs {
        let r = match eps {
            Some(e) => epsilon_lsc_probe(&l.inst, &x, &d, &e, &a.opts)?,
            None => lsc_probe(&l.inst, &x, &d, &a.opts)?,
        };
        reports.push(r);
    }
    let io = |e: std::io::Error| Error::InvalidInput(e.to_string());
    if a.json {
        let docs: Vec<Value> = reports.iter().map(|r| probe_json(&l, r, true)).collect();
        let doc = if docs.len() == 1 {
            docs[0].clone()
        } else {
            Value::Array(docs)
        };
        writeln!(
            out,
            "{}",
            serde_json::to_string_pretty(&doc).expect("serializable")
        )
        .map_err(io)?;
    } else {
        for r in &reports {
            write!(out, "{}", r.csv()).map_err(io)?;
            writeln!(out, "{}", probe_json(&l, r, false)).map_err(io)?;
        }
    }
    Ok(())
}

fn cmd_paper_examples(only: Option<&str>, as_json: bool, out: &mut dyn Write) -> Result<i32> {
    let only = only.map(str::parse::<FixtureId>).transpose()?;
    let summary = run_checks(only);
    let text = if as_json {
        serde_json::to_string_pretty(&summary).expect("serializable") + "\n"
    } else {
        summary.table()
    };
    write!(out, "{text}").map_err(|e| Error::InvalidInput(e.to_string()))?;
    Ok(if summary.all_passed() { 0 } else { 1 })
}

fn emit(out: &mut dyn Write, v: &Value) -> Result<()> {
    writeln!(
        out,
        "{}",
        serde_json::to_string_pretty(v).expect("serializable")
    )
    .map_err(|e| Error::InvalidInput(e.to_string()))
}

fn dispatch(cli: &Cli, out: &mut dyn Write) -> Result<i32> {
    match &cli.command {
        Command::Rho { source, position } => emit(out, &cmd_rho(source, position)?)?,
        Command::OptimalSet { source, position } => emit(out, &cmd_optimal_set(source, position)?)?,
        Command::EpsilonSet {
            source,
            position,
            eps,
        } => emit(out, &cmd_epsilon_set(source, position, eps)?)?,
        Command::Diagnose {
            source,
            samples,
            seed,
        } => emit(out, &cmd_diagnose(source, *samples, *seed)?)?,
        Command::Probe {
            source,
            position,
            dir,
            eps,
            k_max,
            half_width,
            parallel,
            json,
        } => {
            let args = ProbeArgs {
                position,
                dir: dir.as_deref(),
                eps: eps.as_deref(),
                opts: ProbeOptions {
                    k_max: *k_max,
                    half_width: parse_rat(half_width)?,
                    parallel: *parallel,
                },
                json: *json,
            };
            cmd_probe(source, &args, out)?;
        }
        Command::PaperExamples { only, json } => {
            return cmd_paper_examples(only.as_deref(), *json, out)
        }
    }
    Ok(0)
}

/// Parses `args` (including the program name) and runs the command,
/// returning the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            if e.use_stderr() {
                let _ = write!(err, "{e}");
                return 2;
            }
            let _ = write!(out, "{e}");
            return 0;
        }
    };
    match dispatch(&cli, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            if let Error::AcceptabilityArbitrage { ray } = &e {
                let _ = writeln!(err, "arbitrage direction: ({})", ray.join(","));
            }
            exit_code(&e)
        }
    }
}
