//! Command-line front end. `main` only parses arguments and maps the outcome
//! to an exit status; everything else lives here so tests can drive it.

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::census::{census, CensusOptions, CensusReport};
use crate::classify::{decompose, elementary_by_patterns, forbidden_triples, special_offender, Decomposition};
use crate::digraph::{Digraph, PairState};
use crate::error::{Error, Result};
use crate::grouplab::{
    heisenberg::heisenberg_witness, hnn::hnn_witness, rewrite::line_witness, square_report,
    torsion::torsion_witness, triangle::triangle_witness, triangle::TriangleKind,
};
use crate::io::{digraph_to_value, read_digraph, to_dot};
use crate::massey::{lift, massey_scan, DEFAULT_BUDGET};
use crate::padic::{check_claims, minimum_precision, solve_exponent, PAdicRing, PUnit, DEFAULT_PRECISION};
use crate::par::{with_workers, Exec};
use crate::presentation::{orientation, present, PrimePower};

#[derive(Debug, Parser)]
#[command(name = "raag-atlas", version, about = "Decorated digraphs and their oriented pro-p RAAGs")]
pub struct Cli {
    /// Worker threads for census and Massey scans (1 runs sequentially).
    #[arg(long, global = true, env = "RAAG_ATLAS_WORKERS")]
    pub workers: Option<usize>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
    Dot,
    Cas,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Specialness and elementary type, with certificates.
    Classify { input: PathBuf },
    /// Cone / disjoint-union decomposition tree.
    Decompose { input: PathBuf },
    /// Counts over every labeled digraph on n vertices.
    Census {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        dedup_iso: bool,
    },
    /// Oriented pro-p presentation for q = p^f.
    Present {
        input: PathBuf,
        #[command(flatten)]
        q: QArgs,
    },
    /// Truncated p-adic valuation claims.
    Padic {
        #[command(subcommand)]
        action: PadicCommand,
    },
    /// Counterexample witness reports.
    Witness(WitnessArgs),
    /// Unitriangular lifts and triple Massey products.
    Massey {
        #[command(subcommand)]
        action: MasseyCommand,
    },
    /// Graphviz rendering of a digraph.
    ExportDot { input: PathBuf },
}

#[derive(Debug, Args)]
pub struct QArgs {
    #[arg(long)]
    pub p: u64,
    #[arg(long)]
    pub f: u32,
}

#[derive(Debug, Subcommand)]
pub enum PadicCommand {
    Check {
        #[command(flatten)]
        q: QArgs,
        #[arg(long)]
        precision: Option<u32>,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum WitnessName {
    Heisenberg,
    Triangle,
    Line,
    Hnn,
    Square,
    Torsion,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum KindArg {
    First,
    Second,
}

#[derive(Debug, Args)]
pub struct WitnessArgs {
    pub name: WitnessName,
    #[arg(long)]
    pub p: Option<u64>,
    #[arg(long)]
    pub f: Option<u32>,
    #[arg(long, value_enum, default_value = "first")]
    pub kind: KindArg,
    #[arg(long)]
    pub precision: Option<u32>,
    /// Shift window for the HNN linear system.
    #[arg(long, default_value_t = 3)]
    pub window: i32,
    /// Digraph for the square report (defaults to the ordinary 4-cycle).
    #[arg(long)]
    pub input: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum MasseyCommand {
    /// Every character triple: defined, vanishing, and violations.
    Scan {
        input: PathBuf,
        #[command(flatten)]
        q: QArgs,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u64,
    },
    /// One character triple.
    Lift {
        input: PathBuf,
        #[command(flatten)]
        q: QArgs,
        /// A character as comma-separated vertex values; give it three times.
        #[arg(long, num_args = 1, value_delimiter = ',', action = clap::ArgAction::Append)]
        alpha: Vec<u64>,
    },
}

/// A rendered report and whether its internal cross-checks passed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub body: String,
    pub consistent: bool,
}

impl Outcome {
    fn json(v: &Value, consistent: bool) -> Self {
        Outcome {
            body: serde_json::to_string_pretty(v).expect("json values serialize") + "\n",
            consistent,
        }
    }

    fn text(s: String) -> Self {
        Outcome {
            body: if s.ends_with('\n') { s } else { s + "\n" },
            consistent: true,
        }
    }

    /// 0 on success, 2 when a cross-check disagreed.
    pub fn exit_code(&self) -> i32 {
        if self.consistent {
            0
        } else {
            2
        }
    }
}

fn format_or(cli_format: Option<Format>, default: Format, allowed: &[Format]) -> Result<Format> {
    let f = cli_format.unwrap_or(default);
    if allowed.contains(&f) {
        Ok(f)
    } else {
        Err(Error::InvalidInput(format!("format {f:?} is not available for this command").to_lowercase()))
    }
}

fn load(path: &Path) -> Result<Digraph> {
    read_digraph(path)
}

fn default_precision(f: u32, given: Option<u32>) -> u32 {
    given.unwrap_or(DEFAULT_PRECISION.max(minimum_precision(f)))
}

pub fn execute(cli: &Cli) -> Result<Outcome> {
    let exec = if cli.workers == Some(1) { Exec::Sequential } else { Exec::Parallel };
    with_workers(cli.workers, || dispatch(cli, exec))
}

fn dispatch(cli: &Cli, exec: Exec) -> Result<Outcome> {
    let fmt = cli.format;
    match &cli.command {
        Command::Classify { input } => {
            let g = load(input)?;
            let v = classify_value(&g);
            let consistent = v["classifiers_agree"] == true;
            match format_or(fmt, Format::Json, &[Format::Json, Format::Text])? {
                Format::Text => Ok(Outcome {
                    body: classify_text(&v),
                    consistent,
                }),
                _ => Ok(Outcome::json(&v, consistent)),
            }
        }
        Command::Decompose { input } => {
            let g = load(input)?;
            let d = decompose(&g);
            match format_or(fmt, Format::Json, &[Format::Json, Format::Text])? {
                Format::Text => Ok(Outcome::text(decomposition_text(&g, &d))),
                _ => Ok(Outcome::json(&decomposition_value(&g, &d), true)),
            }
        }
        Command::Census { n, dedup_iso } => {
            format_or(fmt, Format::Json, &[Format::Json])?;
            let report = census(CensusOptions {
                n: *n,
                dedup_iso: *dedup_iso,
                exec,
            })?;
            Ok(Outcome::json(&census_value(&report), report.disagreements.is_empty()))
        }
        Command::Present { input, q } => {
            let g = load(input)?;
            let params = PrimePower::new(q.p, q.f)?;
            let pres = present(&g, params);
            let theta = orientation(&g, params.q);
            Ok(match format_or(fmt, Format::Json, &[Format::Json, Format::Text, Format::Cas])? {
                Format::Text => Outcome::text(pres.render_text(&theta)),
                Format::Cas => Outcome::text(pres.render_cas()),
                _ => Outcome::json(&pres.to_json(&theta), true),
            })
        }
        Command::Padic {
            action: PadicCommand::Check { q, precision },
        } => {
            format_or(fmt, Format::Json, &[Format::Json])?;
            let k = default_precision(q.f, *precision);
            let claims = check_claims(q.p, q.f, k)?;
            let mut v = serde_json::to_value(&claims).expect("claims serialize");
            v["exponent_solve"] = exponent_solve_value(q.p, k)?;
            Ok(Outcome::json(&v, claims.all_hold))
        }
        Command::Witness(args) => {
            format_or(fmt, Format::Json, &[Format::Json])?;
            let report = witness(args)?;
            let v = serde_json::to_value(&report).expect("reports serialize");
            Ok(Outcome::json(&v, report.all_verified()))
        }
        Command::Massey { action } => {
            format_or(fmt, Format::Json, &[Format::Json])?;
            match action {
                MasseyCommand::Scan { input, q, budget } => {
                    let g = load(input)?;
                    let r = massey_scan(&g, PrimePower::new(q.p, q.f)?, *budget, exec)?;
                    let ok = r.reverified && r.pair_mismatches.is_empty() && r.monotonicity_failures == 0;
                    let mut v = serde_json::to_value(&r).expect("scan serializes");
                    v["vertices"] = json!(g.names());
                    Ok(Outcome::json(&v, ok))
                }
                MasseyCommand::Lift { input, q, alpha } => {
                    let g = load(input)?;
                    let n = g.len();
                    if alpha.len() != 3 * n {
                        return Err(Error::InvalidInput(format!(
                            "--alpha must be given three times with {n} comma-separated values each"
                        )));
                    }
                    let c = |i: usize| alpha[i * n..(i + 1) * n].to_vec();
                    let r = lift(&g, PrimePower::new(q.p, q.f)?, [c(0), c(1), c(2)])?;
                    let ok = r.reverified && r.defined == r.pair_criterion && (!r.vanishes || r.defined);
                    let mut v = serde_json::to_value(&r).expect("lift serializes");
                    v["vertices"] = json!(g.names());
                    Ok(Outcome::json(&v, ok))
                }
            }
        }
        Command::ExportDot { input } => {
            format_or(fmt, Format::Dot, &[Format::Dot])?;
            Ok(Outcome::text(to_dot(&load(input)?)))
        }
    }
}

fn witness(args: &WitnessArgs) -> Result<crate::report::WitnessReport> {
    let need_p = || args.p.ok_or_else(|| Error::InvalidInput("--p is required".into()));
    let need_q = || {
        let f = args.f.ok_or_else(|| Error::InvalidInput("--f is required".into()))?;
        PrimePower::new(need_p()?, f)
    };
    let k = default_precision(args.f.unwrap_or(1), args.precision);
    match args.name {
        WitnessName::Heisenberg => heisenberg_witness(need_p()?, k),
        WitnessName::Hnn => hnn_witness(need_p()?, k, args.window),
        WitnessName::Triangle => {
            let kind = match args.kind {
                KindArg::First => TriangleKind::First,
                KindArg::Second => TriangleKind::Second,
            };
            triangle_witness(kind, need_q()?, k)
        }
        WitnessName::Line => {
            let q = need_q()?;
            line_witness(q.p, q.f, k)
        }
        WitnessName::Torsion => torsion_witness(need_q()?, k),
        WitnessName::Square => {
            let g = match &args.input {
                Some(path) => load(path)?,
                None => Digraph::new(["x", "y", "z", "w"])?
                    .with_ordinary(0, 1)
                    .with_ordinary(1, 2)
                    .with_ordinary(2, 3)
                    .with_ordinary(3, 0),
            };
            square_report(&g)
        }
    }
}

/// `(1+p)^λ = 1+p^2`, or the reason no solution exists.
fn exponent_solve_value(p: u64, k: u32) -> Result<Value> {
    let ring = PAdicRing::new(p, k)?;
    let base = PUnit::one_plus(&ring, p as i128)?;
    let target = PUnit::one_plus(&ring, (p * p) as i128)?;
    Ok(match solve_exponent(&base, &target) {
        Ok(sol) => json!({
            "equation": format!("(1+{p})^lambda = 1+{p}^2"),
            "lambda": sol.lambda,
            "significant_digits": sol.significant_digits,
            "round_trip": base.pow(&sol.lambda).is_ok_and(|u| u == target),
        }),
        Err(e) => json!({
            "equation": format!("(1+{p})^lambda = 1+{p}^2"),
            "refused": e.to_string(),
        }),
    })
}

pub fn classify_value(g: &Digraph) -> Value {
    let offender = special_offender(g);
    let triples = forbidden_triples(g);
    let d = decompose(g);
    let patterns = elementary_by_patterns(g);
    let special = offender.is_none();
    let agree = special == triples.is_empty() && d.is_elementary() == patterns.elementary;
    let mut v = json!({
        "vertices": g.names(),
        "special": special,
        "elementary_type": d.is_elementary(),
        "forbidden_triples": triples.iter().map(|w| w.to_json(g)).collect::<Vec<_>>(),
        "witness": patterns.witness.as_ref().map(|w| w.to_json(g)),
        "classifiers_agree": agree,
    });
    if let Some(o) = offender {
        v["offender"] = json!({
            "vertex": g.name(o.vertex),
            "other": g.name(o.other),
            "state": match o.state {
                PairState::SpecialToward(h) => format!("special toward {}", g.name(h)),
                _ => "ordinary".to_string(),
            },
        });
    }
    let obj = v.as_object_mut().expect("object");
    for (key, val) in decomposition_value(g, &d).as_object().expect("object") {
        if key != "elementary_type" {
            obj.insert(key.clone(), val.clone());
        }
    }
    v
}

fn classify_text(v: &Value) -> String {
    let mut out = format!("special: {}\nelementary type: {}\n", v["special"], v["elementary_type"]);
    if let Some(o) = v.get("offender") {
        out += &format!("offender: {} (pair with {})\n", o["vertex"].as_str().unwrap_or(""), o["other"].as_str().unwrap_or(""));
    }
    if let Some(t) = v.get("tree_text").and_then(Value::as_str) {
        out += &format!("tree: {t}\n");
    }
    if let Some(s) = v.get("stuck").and_then(Value::as_array) {
        let names: Vec<&str> = s.iter().filter_map(Value::as_str).collect();
        out += &format!("stuck on: {{{}}}\n", names.join(", "));
    }
    if let Some(w) = v.get("witness").filter(|w| !w.is_null()) {
        out += &format!("witness: {} {}\n", w["kind"].as_str().unwrap_or(""), w["vertices"]);
    }
    out
}

fn decomposition_value(g: &Digraph, d: &Decomposition) -> Value {
    match d {
        Decomposition::Elementary(tree) => json!({
            "elementary_type": true,
            "tree": tree.as_ref().map(|t| t.to_json(g)),
            "tree_text": tree.as_ref().map(|t| t.render(g)),
            "base_vertices": tree.as_ref().map(|t| t.leaves().into_iter().map(|v| g.name(v)).collect::<Vec<_>>()).unwrap_or_default(),
        }),
        Decomposition::NotSpecial(o) => json!({
            "elementary_type": false,
            "not_special_at": g.name(o.vertex),
        }),
        Decomposition::Stuck(mask) => json!({
            "elementary_type": false,
            "stuck": g.induced_mask(*mask).names(),
            "stuck_subdigraph": digraph_to_value(&g.induced_mask(*mask)),
        }),
    }
}

fn decomposition_text(g: &Digraph, d: &Decomposition) -> String {
    match d {
        Decomposition::Elementary(Some(t)) => t.render(g),
        Decomposition::Elementary(None) => "empty".into(),
        Decomposition::NotSpecial(o) => format!("not special: {} is not a sinkhole", g.name(o.vertex)),
        Decomposition::Stuck(mask) => format!("stuck on {{{}}}", g.induced_mask(*mask).names().join(", ")),
    }
}

pub fn census_value(r: &CensusReport) -> Value {
    json!({
        "n": r.n,
        "total": r.total,
        "special": r.special,
        "elementary_type": r.elementary_type,
        "cross_checked": r.cross_checked,
        "disagreements": r.disagreements.iter().map(|f| json!({
            "index": f.index,
            "which": f.which,
            "digraph": digraph_to_value(&f.digraph),
        })).collect::<Vec<_>>(),
        "isomorphism_classes": r.isomorphism,
    })
}

/// Parses `args`, runs the command, writes the report, and returns the exit status.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match execute(&cli) {
        Ok(out) => {
            let written = match &cli.output {
                Some(path) => std::fs::write(path, &out.body),
                None => {
                    use std::io::Write;
                    std::io::stdout().write_all(out.body.as_bytes())
                }
            };
            if let Err(e) = written {
                eprintln!("error: cannot write report: {e}");
                return 1;
            }
            if !out.consistent {
                eprintln!("error: internal cross-check failed; see report");
            }
            out.exit_code()
        }
        Err(e) => {
            eprintln!("error: {e}");
            if e.is_input_error() {
                1
            } else {
                2
            }
        }
    }
}
