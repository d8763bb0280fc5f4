//! Command-line front end for the superelliptic curve toolkit.
//!
//! Every subcommand accepts `--json` to emit exactly one JSON document on
//! stdout instead of the human-readable text.  Integer values appear as
//! JSON numbers when they fit in `u64`/`i64` and as decimal strings
//! otherwise; rationals are always strings.
//!
//! Exit codes: 0 on success, 1 on a domain error (invalid input, failed
//! validation, unknown case), 2 on a command-line usage error.

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde_json::{json, Map, Value};

use supercurve::loci::{self, LociTable};
use supercurve::{
    classify, enumerate, poly_height, projective_height, reduce_model, ClassifyOutcome,
    DatabaseMeta, EnumerationParams, Error, SuperellipticCurve,
};

/// Exact arithmetic for superelliptic curves y^n = f(x) over Q.
#[derive(Parser)]
#[command(name = "supercurve", version, about, max_term_width = 100)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args)]
struct JsonFlag {
    /// Emit a single JSON document instead of text.
    #[arg(long)]
    json: bool,
}

#[derive(Subcommand)]
enum Cmd {
    /// Compute the genus of a curve, e.g. "y^3 = x^4 - 1".
    Genus {
        /// Curve equation `y^n = f(x)`.
        curve: String,
        #[command(flatten)]
        json: JsonFlag,
    },
    /// Validate the genus-4 locus catalogue and print summary counts.
    CheckLoci {
        #[command(flatten)]
        json: JsonFlag,
    },
    /// Print the containment diagram of the genus-4 loci.
    LociDag {
        /// Emit Graphviz DOT instead of edge lines.
        #[arg(long, conflicts_with = "json")]
        dot: bool,
        #[command(flatten)]
        json: JsonFlag,
    },
    /// Locate a genus-4 curve in the catalogue of automorphism loci.
    Classify {
        /// Curve equation `y^n = f(x)`.
        curve: String,
        #[command(flatten)]
        json: JsonFlag,
    },
    /// Search for an equivalent model of smaller height.
    Reduce {
        /// Curve equation `y^n = f(x)`.
        curve: String,
        /// Largest translation step tried per move.
        #[arg(long, default_value_t = 3)]
        radius: i64,
        /// Search depth between accepted improvements.
        #[arg(long, default_value_t = 3)]
        depth: u32,
        #[command(flatten)]
        json: JsonFlag,
    },
    /// Height of a curve model or of a projective point.
    Height {
        /// Either a curve `y^n = f(x)` or a point `[a : b : c]`.
        input: String,
        #[command(flatten)]
        json: JsonFlag,
    },
    /// Enumerate curve models with bounded integer coefficients.
    Enumerate {
        /// Cover exponent n of `y^n = f(x)`.
        #[arg(long)]
        n: u64,
        /// Degree of f: a single value `6` or an inclusive range `5..8`.
        #[arg(long)]
        deg: String,
        /// Coefficients range over -bound ..= bound.
        #[arg(long)]
        bound: u64,
        /// Keep only curves of this genus.
        #[arg(long)]
        genus: Option<u64>,
        /// Keep only models with squarefree f.
        #[arg(long)]
        squarefree: bool,
        /// Write a JSON-Lines database (plus `.meta.json` sidecar) here.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Worker threads; defaults to one per core.
        #[arg(long)]
        workers: Option<usize>,
        #[command(flatten)]
        json: JsonFlag,
    },
    /// Instantiate the curve family of a catalogue case.
    Family {
        /// Case number in the genus-4 catalogue.
        case: u32,
        /// Parameter override `name=value`; repeatable. Unset parameters
        /// keep their stored sample values.
        #[arg(long = "param", value_name = "NAME=VALUE")]
        params: Vec<String>,
        #[command(flatten)]
        json: JsonFlag,
    },
}

fn main() -> ExitCode {
    reset_sigpipe();
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}

/// Restore the default `SIGPIPE` disposition, which the runtime sets to
/// ignore.  Long outputs are routinely piped into `head` and friends;
/// when the reader closes early the process should end quietly like any
/// other filter instead of reporting a broken-pipe write error.
#[cfg(unix)]
fn reset_sigpipe() {
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
}

#[cfg(not(unix))]
fn reset_sigpipe() {}

fn run(cli: Cli) -> Result<ExitCode, Error> {
    match cli.cmd {
        Cmd::Genus { curve, json } => cmd_genus(&curve, json.json),
        Cmd::CheckLoci { json } => cmd_check_loci(json.json),
        Cmd::LociDag { dot, json } => cmd_loci_dag(dot, json.json),
        Cmd::Classify { curve, json } => cmd_classify(&curve, json.json),
        Cmd::Reduce {
            curve,
            radius,
            depth,
            json,
        } => cmd_reduce(&curve, radius, depth, json.json),
        Cmd::Height { input, json } => cmd_height(&input, json.json),
        Cmd::Enumerate {
            n,
            deg,
            bound,
            genus,
            squarefree,
            out,
            workers,
            json,
        } => cmd_enumerate(n, &deg, bound, genus, squarefree, out, workers, json.json),
        Cmd::Family { case, params, json } => cmd_family(case, &params, json.json),
    }
}

/// The catalogue to run against: `SUPERCURVE_DATA` overrides the embedded
/// dataset with a JSON file of the same structure.
fn load_table() -> Result<TableRef, Error> {
    match std::env::var_os("SUPERCURVE_DATA") {
        Some(path) => Ok(TableRef::Owned(LociTable::from_path(path.as_ref())?)),
        None => Ok(TableRef::Builtin(loci::builtin())),
    }
}

enum TableRef {
    Builtin(&'static LociTable),
    Owned(LociTable),
}

impl std::ops::Deref for TableRef {
    type Target = LociTable;
    fn deref(&self) -> &LociTable {
        match self {
            TableRef::Builtin(t) => t,
            TableRef::Owned(t) => t,
        }
    }
}

/// Render a BigInt as a JSON number when it fits, else a decimal string.
fn big_json(v: &BigInt) -> Value {
    if let Some(u) = v.to_u64() {
        json!(u)
    } else if let Some(i) = v.to_i64() {
        json!(i)
    } else {
        json!(v.to_string())
    }
}

fn rational_json(v: &BigRational) -> Value {
    json!(v.to_string())
}

fn params_json(params: &BTreeMap<String, BigRational>) -> Value {
    let mut map = Map::new();
    for (k, v) in params {
        map.insert(k.clone(), rational_json(v));
    }
    Value::Object(map)
}

fn print_doc(doc: &Value) {
    println!(
        "{}",
        serde_json::to_string_pretty(doc).expect("JSON document")
    );
}

fn cmd_genus(text: &str, json: bool) -> Result<ExitCode, Error> {
    let curve = SuperellipticCurve::parse(text)?;
    if json {
        print_doc(&json!({
            "curve": curve.to_string(),
            "n": curve.n(),
            "degree": curve.degree(),
            "genus": curve.genus(),
        }));
    } else {
        println!("{}", curve.genus());
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_check_loci(json: bool) -> Result<ExitCode, Error> {
    let table = load_table()?;
    let reports = table.validate();
    let stats = table.stats();
    let bad: Vec<_> = reports.iter().filter(|r| !r.problems.is_empty()).collect();
    let valid = reports.len() - bad.len();
    if json {
        let mut problems = Map::new();
        for r in &bad {
            problems.insert(r.case_no.to_string(), json!(r.problems));
        }
        print_doc(&json!({
            "total": stats.total,
            "valid": valid,
            "superelliptic": stats.superelliptic,
            "hyperelliptic": stats.hyperelliptic,
            "superelliptic_fraction": stats.superelliptic_fraction.to_string(),
            "max_group_order": stats.max_group_order,
            "colors": { "red": stats.red, "yellow": stats.yellow, "blue": stats.blue },
            "discrepancies": stats.discrepancies,
            "problems": problems,
        }));
    } else {
        let disc = match stats.discrepancies.len() {
            0 => "no diagram discrepancies".to_string(),
            1 => format!("1 diagram discrepancy (case {})", stats.discrepancies[0]),
            k => format!(
                "{k} diagram discrepancies (cases {})",
                stats
                    .discrepancies
                    .iter()
                    .map(|c| c.to_string())
                    .collect::<Vec<_>>()
                    .join(", ")
            ),
        };
        println!("{valid}/{} loci valid; {disc}", reports.len());
        for r in &bad {
            for p in &r.problems {
                eprintln!("case {}: {p}", r.case_no);
            }
        }
    }
    Ok(if bad.is_empty() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

fn cmd_loci_dag(dot: bool, json: bool) -> Result<ExitCode, Error> {
    let table = load_table()?;
    let edges = table.edges();
    if json {
        let nodes: Vec<Value> = table
            .iter()
            .map(|l| {
                json!({
                    "case": l.case_no,
                    "dim": l.dim,
                    "group": l.group_label(),
                    "order": l.group_order(),
                    "color": l.diagram_color.to_string(),
                    "superelliptic": l.is_superelliptic(),
                })
            })
            .collect();
        let edge_list: Vec<Value> = edges.iter().map(|(a, b)| json!([a, b])).collect();
        print_doc(&json!({ "nodes": nodes, "edges": edge_list }));
    } else if dot {
        println!("digraph loci {{");
        println!("  rankdir=TB;");
        for l in table.iter() {
            let fill = match l.diagram_color {
                loci::DiagramColor::Red => "#f4cccc",
                loci::DiagramColor::Yellow => "#fff2cc",
                loci::DiagramColor::Blue => "#cfe2f3",
            };
            println!(
                "  c{} [label=\"{}: {} (dim {})\", style=filled, fillcolor=\"{}\"];",
                l.case_no,
                l.case_no,
                l.group_label(),
                l.dim,
                fill
            );
        }
        for (a, b) in &edges {
            println!("  c{a} -> c{b};");
        }
        println!("}}");
    } else {
        for (a, b) in &edges {
            println!("{a} -> {b}");
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_classify(text: &str, json: bool) -> Result<ExitCode, Error> {
    let curve = SuperellipticCurve::parse(text)?;
    let table = load_table()?;
    let outcome = classify(&curve, &table)?;
    match &outcome {
        ClassifyOutcome::Member(m) => {
            let locus = table.get(m.case_no)?;
            if json {
                print_doc(&json!({
                    "outcome": "member",
                    "case": m.case_no,
                    "group": {
                        "name": locus.group_label(),
                        "id": [locus.gap_id.0, locus.gap_id.1],
                    },
                    "quality": m.quality.to_string(),
                    "params": params_json(&m.params),
                    "transform": {
                        "a": m.transform.a.to_string(),
                        "b": m.transform.b.to_string(),
                        "c": m.transform.c.to_string(),
                        "d": m.transform.d.to_string(),
                    },
                }));
            } else {
                let mut line = format!(
                    "case {}, group ({},{}), {}",
                    m.case_no, locus.gap_id.0, locus.gap_id.1, m.quality
                );
                for (k, v) in &m.params {
                    line.push_str(&format!("; {k} = {v}"));
                }
                println!("{line}");
            }
        }
        ClassifyOutcome::Unknown { n, signature } => {
            if json {
                print_doc(&json!({
                    "outcome": "unknown",
                    "n": n,
                    "signature": signature.to_string(),
                }));
            } else {
                println!("{outcome}");
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_reduce(text: &str, radius: i64, depth: u32, json: bool) -> Result<ExitCode, Error> {
    let curve = SuperellipticCurve::parse(text)?;
    let report = reduce_model(&curve, radius, depth);
    if json {
        print_doc(&json!({
            "original": report.original.to_string(),
            "reduced": report.reduced.to_string(),
            "initial_height": big_json(&report.initial_height),
            "final_height": big_json(&report.final_height),
            "moves": report.moves,
            "jump_heights": report.jump_heights.iter().map(big_json).collect::<Vec<_>>(),
        }));
    } else {
        println!(
            "original: {} (height {})",
            report.original, report.initial_height
        );
        println!(
            "reduced:  {} (height {})",
            report.reduced, report.final_height
        );
        if report.moves.is_empty() {
            println!("moves: none (already minimal)");
        } else {
            let steps: Vec<String> = report.moves.iter().map(|m| m.to_string()).collect();
            println!("moves: {}", steps.join(", "));
        }
    }
    Ok(ExitCode::SUCCESS)
}

/// Parse "[2 : -1/3 : 4]", "(2, -1/3, 4)", or "2, -1/3, 4" into coordinates.
fn parse_point(text: &str) -> Result<Vec<BigRational>, Error> {
    let trimmed = text
        .trim()
        .trim_start_matches(['[', '('])
        .trim_end_matches([']', ')']);
    let sep = if trimmed.contains(':') { ':' } else { ',' };
    let mut coords = Vec::new();
    for part in trimmed.split(sep) {
        let part = part.trim();
        if part.is_empty() {
            return Err(Error::Parse(format!("empty coordinate in point `{text}`")));
        }
        let c = BigRational::from_str(part)
            .map_err(|e| Error::Parse(format!("coordinate `{part}`: {e}")))?;
        coords.push(c);
    }
    Ok(coords)
}

fn cmd_height(input: &str, json: bool) -> Result<ExitCode, Error> {
    if let Ok(curve) = SuperellipticCurve::parse(input) {
        let h = poly_height(curve.f());
        if json {
            print_doc(&json!({
                "kind": "curve",
                "curve": curve.to_string(),
                "height": big_json(&h),
            }));
        } else {
            println!("height {h}");
        }
        return Ok(ExitCode::SUCCESS);
    }
    let coords = parse_point(input)?;
    let h = projective_height(&coords)?;
    if json {
        print_doc(&json!({
            "kind": "point",
            "coordinates": coords.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
            "height": big_json(&h),
        }));
    } else {
        println!("height {h}");
    }
    Ok(ExitCode::SUCCESS)
}

/// Parse `--deg` values: "6", "5..8", or "5..=8" (both ranges inclusive).
fn parse_degrees(text: &str) -> Result<(usize, usize), Error> {
    let bad = |t: &str| Error::Parse(format!("degree `{t}` is not a value or inclusive range"));
    if let Some((lo, hi)) = text.split_once("..") {
        let hi = hi.strip_prefix('=').unwrap_or(hi);
        let lo: usize = lo.trim().parse().map_err(|_| bad(text))?;
        let hi: usize = hi.trim().parse().map_err(|_| bad(text))?;
        if lo == 0 || hi < lo {
            return Err(bad(text));
        }
        Ok((lo, hi))
    } else {
        let d: usize = text.trim().parse().map_err(|_| bad(text))?;
        if d == 0 {
            return Err(bad(text));
        }
        Ok((d, d))
    }
}

#[allow(clippy::too_many_arguments)]
fn cmd_enumerate(
    n: u64,
    deg: &str,
    bound: u64,
    genus: Option<u64>,
    squarefree: bool,
    out: Option<PathBuf>,
    workers: Option<usize>,
    json: bool,
) -> Result<ExitCode, Error> {
    let (min_degree, max_degree) = parse_degrees(deg)?;
    let params = EnumerationParams {
        n,
        min_degree,
        max_degree,
        height_bound: bound,
        genus,
        squarefree_only: squarefree,
    };
    let (records, stats) = enumerate(&params, workers)?;
    let params_doc = json!({
        "n": params.n,
        "min_degree": params.min_degree,
        "max_degree": params.max_degree,
        "height_bound": params.height_bound,
        "genus": params.genus,
        "squarefree_only": params.squarefree_only,
    });
    let stats_doc = json!({
        "scanned": stats.scanned,
        "rejected_invalid": stats.rejected_invalid,
        "filtered": stats.filtered,
        "admitted": stats.admitted,
        "unique": stats.unique,
    });
    let summary = format!(
        "scanned {}, rejected {} invalid, filtered {}, admitted {}",
        stats.scanned, stats.rejected_invalid, stats.filtered, stats.admitted
    );
    match out {
        Some(path) => {
            let meta = DatabaseMeta::new(params, stats);
            supercurve::write_database(&path, &meta, &records)?;
            if json {
                print_doc(&json!({
                    "params": params_doc,
                    "stats": stats_doc,
                    "path": path.display().to_string(),
                }));
            } else {
                println!(
                    "wrote {} records to {} ({summary})",
                    stats.unique,
                    path.display(),
                );
            }
        }
        None => {
            if json {
                print_doc(&json!({
                    "params": params_doc,
                    "stats": stats_doc,
                    "records": records,
                }));
            } else {
                for rec in &records {
                    println!(
                        "{}",
                        serde_json::to_string(rec)
                            .map_err(|e| Error::Dataset(format!("serialize record: {e}")))?
                    );
                }
                eprintln!("{} records ({summary})", stats.unique);
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_family(case: u32, overrides: &[String], json: bool) -> Result<ExitCode, Error> {
    let table = load_table()?;
    let locus = table.get(case)?;
    let family = locus
        .family
        .as_ref()
        .ok_or_else(|| Error::Dataset(format!("case {case} has no associated curve family")))?;
    let mut params = family.sample.clone();
    for item in overrides {
        let (name, value) = item
            .split_once('=')
            .ok_or_else(|| Error::Parse(format!("parameter `{item}` is not name=value")))?;
        let value = BigRational::from_str(value.trim())
            .map_err(|e| Error::Parse(format!("parameter `{name}`: {e}")))?;
        params.insert(name.trim().to_string(), value);
    }
    let curve = table.instantiate(case, &params)?;
    if json {
        print_doc(&json!({
            "case": case,
            "n": family.n,
            "template": family.template,
            "params": params_json(&params),
            "curve": curve.to_string(),
            "genus": curve.genus(),
        }));
    } else {
        println!("case {case}: y^{} = {}", family.n, family.template);
        let rendered: Vec<String> = params.iter().map(|(k, v)| format!("{k} = {v}")).collect();
        if !rendered.is_empty() {
            println!("params: {}", rendered.join(", "));
        }
        println!("curve: {curve}");
        println!("genus: {}", curve.genus());
    }
    Ok(ExitCode::SUCCESS)
}
