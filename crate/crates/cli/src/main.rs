use std::io::Write;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value as Json};

use mwt_core::gw::{GwElement, GwField, WittElement};
use mwt_core::suites::{registry, run_suite, Report, SuiteParams};
use mwt_core::transfers::TransferMode;
use mwt_core::{eval_expr, field_of_order, Error, Fe, FiniteField, Value};

/// Milnor-Witt K-theory, Grothendieck-Witt rings and transfers over finite fields.
#[derive(Parser)]
#[command(name = "mwt", version)]
struct Cli {
    /// Print human-readable text instead of JSON.
    #[arg(long, global = true)]
    pretty: bool,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Evaluate an expression such as `transfer(geo, GF(9)/GF(3), gw<1>)`.
    Eval { expr: String },
    /// Run a named verification suite.
    Suite {
        name: String,
        #[arg(long)]
        q: Option<u64>,
        #[arg(long)]
        max_degree: Option<u32>,
        #[arg(long)]
        samples: Option<u32>,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long)]
        mode: Option<TransferMode>,
        /// Report `elapsed_ms` as 0 so that reports are byte-identical across runs.
        #[arg(long)]
        no_timing: bool,
    },
    /// Print the structure of GW(F_q) or W(F_q).
    Table {
        kind: TableKind,
        #[arg(long)]
        q: u64,
    },
    /// List the registered suites.
    ListSuites,
}

#[derive(Clone, Copy, ValueEnum)]
enum TableKind {
    Gw,
    Witt,
}

const FAILED: u8 = 1;
const USAGE: u8 = 2;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            if !cli.pretty {
                out(error_json(&e));
            }
            ExitCode::from(USAGE)
        }
    }
}

fn error_json(e: &Error) -> Json {
    match e {
        Error::Parse { pos, msg } => json!({"error": {"kind": "parse", "pos": pos, "message": msg}}),
        Error::UnknownSuite(_) | Error::InvalidParam(_) => json!({"error": {"kind": "usage", "message": e.to_string()}}),
        _ => json!({"error": {"kind": "semantic", "message": e.to_string()}}),
    }
}

/// Writes to stdout, ignoring a closed pipe.
fn out(s: impl std::fmt::Display) {
    let _ = writeln!(std::io::stdout(), "{s}");
}

fn emit(pretty: bool, text: impl FnOnce() -> String, value: impl FnOnce() -> Json) {
    if pretty {
        out(text());
    } else {
        out(value());
    }
}

fn run(cli: &Cli) -> Result<u8, Error> {
    match &cli.cmd {
        Cmd::Eval { expr } => {
            let v = eval_expr(expr)?;
            emit(cli.pretty, || v.pretty(), || v.to_json());
            Ok(if matches!(v, Value::Bool(false)) { FAILED } else { 0 })
        }
        Cmd::Suite { name, q, max_degree, samples, seed, mode, no_timing } => {
            let params = SuiteParams { q: *q, max_degree: *max_degree, samples: *samples, seed: *seed, mode: *mode };
            let mut report = run_suite(name, &params)?;
            if *no_timing {
                report.elapsed_ms = 0;
            }
            emit(cli.pretty, || report_text(&report), || serde_json::to_value(&report).expect("report serializes"));
            Ok(if report.pass { 0 } else { FAILED })
        }
        Cmd::Table { kind, q } => {
            let f = field_of_order(*q)?;
            match kind {
                TableKind::Gw => emit(cli.pretty, || gw_text(&f), || gw_table(&f)),
                TableKind::Witt => emit(cli.pretty, || witt_text(&f), || witt_table(&f)),
            }
            Ok(0)
        }
        Cmd::ListSuites => {
            emit(
                cli.pretty,
                || registry().iter().map(|s| format!("{:<27} {}", s.name, s.statement)).collect::<Vec<_>>().join("\n"),
                || Json::Array(registry().iter().map(|s| json!({"name": s.name, "statement": s.statement})).collect()),
            );
            Ok(0)
        }
    }
}

fn report_text(r: &Report) -> String {
    let mut out = format!(
        "{}: {} ({} cases, {} failures, {} ms)\nparams: {} seed {}",
        r.suite,
        if r.pass { "PASS" } else { "FAIL" },
        r.cases_run,
        r.failures.len(),
        r.elapsed_ms,
        r.params,
        r.seed
    );
    for f in &r.failures {
        out.push_str(&format!("\n  case:     {}\n  expected: {}\n  got:      {}", f.case, f.expected, f.got));
    }
    out
}

/// Named degree-0 classes worth tabulating, with the nonsquare `u`.
fn gw_rows(f: &FiniteField) -> Vec<(String, GwElement)> {
    let gf = GwField::Finite(f.clone());
    let u = f.nonsquare();
    let angle = |a: Fe| GwElement::angle(f, a).expect("unit");
    let mut rows = vec![
        ("<1>".to_string(), GwElement::one(&gf)),
        (format!("<{}>", f.format(u)), angle(u)),
        ("<-1>".to_string(), angle(f.neg(Fe::ONE))),
        ("h".to_string(), GwElement::hyperbolic(&gf)),
    ];
    for n in 2..=4 {
        rows.push((format!("n_eps({n})"), GwElement::n_epsilon(&gf, n)));
    }
    rows
}

fn gw_table(f: &FiniteField) -> Json {
    let u = f.nonsquare();
    let rows: Vec<Json> = gw_rows(f)
        .into_iter()
        .map(|(name, g)| json!({"name": name, "form": g.serialize(), "invariants": g.invariants()}))
        .collect();
    json!({
        "table": "gw",
        "field": f.to_string(),
        "square_classes": ["1", f.format(u)],
        "minus_one_is_square": f.is_square(f.neg(Fe::ONE)),
        "presentation": "GW(F_q) = Z[<u>]/(<u>^2 - 1, 2<u> - 2), classified by rank and discriminant",
        "rows": rows,
    })
}

fn gw_text(f: &FiniteField) -> String {
    let mut out = format!("GW({f}): square classes 1, {}; -1 is {}a square", f.format(f.nonsquare()), if f.is_square(f.neg(Fe::ONE)) { "" } else { "not " });
    for (name, g) in gw_rows(f) {
        let inv = g.invariants();
        out.push_str(&format!("\n  {name:<10} {:<12} rank {:>2}  disc {}", g.serialize(), inv.rank, inv.disc));
    }
    out
}

/// The four classes of `W(F_q)`: `0`, `<1>`, `<u>` and the anisotropic plane `<1,-u>`.
fn witt_elements(f: &FiniteField) -> Vec<(String, WittElement)> {
    let u = f.nonsquare();
    let v = f.class_rep(f.neg(u));
    let project = |units: &[Fe]| GwElement::from_diagonal(f, units).and_then(|g| g.witt_project()).expect("Witt class");
    vec![
        ("0".to_string(), WittElement::zero(f)),
        ("<1>".to_string(), project(&[Fe::ONE])),
        (format!("<{}>", f.format(u)), project(&[u])),
        (format!("<1,{}>", f.format(v)), project(&[Fe::ONE, v])),
    ]
}

fn witt_index(elems: &[(String, WittElement)], w: &WittElement) -> String {
    elems.iter().find(|(_, e)| e == w).map_or_else(|| "?".into(), |(n, _)| n.clone())
}

fn witt_table(f: &FiniteField) -> Json {
    let elems = witt_elements(f);
    let rows: Vec<Json> = elems
        .iter()
        .map(|(name, w)| json!({"name": name, "dim_parity": w.dim_parity, "disc": w.disc, "additive_order": w.additive_order()}))
        .collect();
    let sums: Vec<Vec<String>> = elems
        .iter()
        .map(|(_, a)| elems.iter().map(|(_, b)| witt_index(&elems, &a.add(b).expect("same field"))).collect())
        .collect();
    let minus_one_square = f.is_square(f.neg(Fe::ONE));
    json!({
        "table": "witt",
        "field": f.to_string(),
        "group": if minus_one_square { "Z/2 x Z/2" } else { "Z/4" },
        "elements": rows,
        "addition": sums,
    })
}

fn witt_text(f: &FiniteField) -> String {
    let elems = witt_elements(f);
    let group = if f.is_square(f.neg(Fe::ONE)) { "Z/2 x Z/2" } else { "Z/4" };
    let width = elems.iter().map(|(n, _)| n.len()).max().unwrap_or(1);
    let mut out = format!("W({f}) = {group}\n  {:<width$} |", "+");
    for (n, _) in &elems {
        out.push_str(&format!(" {n:<width$}"));
    }
    for (n, a) in &elems {
        out.push_str(&format!("\n  {n:<width$} |"));
        for (_, b) in &elems {
            out.push_str(&format!(" {:<width$}", witt_index(&elems, &a.add(b).expect("same field"))));
        }
    }
    out
}
