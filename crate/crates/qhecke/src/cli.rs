//! Command-line front end.
//!
//! Four subcommands: `list` prints the registry, `verify` expands and
//! compares identities, `inequality` scans the partition-count inequalities
//! (and their series bridges), and `expand` prints one side of a series
//! identity as exact coefficients.
//!
//! Exit codes: `0` when every executed check verified (or was nonnegative),
//! `1` when any comparison mismatched or an inequality was violated, and
//! `2` for usage errors, unknown ids, and builder failures. JSON reports
//! use the stable keys `{id, mode, order, status, mismatch, elapsed_ms}`
//! with `mismatch` either `null` or `{exponent, dega, degb, lhs, rhs}`;
//! coefficients are exact `num/den` strings.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::PathBuf;
use std::time::Instant;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::error::Error;
use crate::identities::{self, IdentityKind, Status, VerificationReport, MIN_ORDER};
use crate::partitions;
use crate::ring::format_rat;
use crate::Result;

#[derive(Parser)]
#[command(
    name = "qhecke",
    version,
    about = "Exact q-series identity verification",
    max_term_width = 100
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Cmd {
    /// List registered identities.
    List {
        /// Restrict to ids matching this glob (`*` and `?`).
        #[arg(long)]
        id: Option<String>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        /// Write the report here instead of stdout.
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Expand and compare identities coefficientwise.
    Verify {
        /// Identity id or glob; all identities when absent.
        #[arg(long)]
        id: Option<String>,
        /// Truncation order (weighted order for parameterized records,
        /// largest index for finite families); per-record default when absent.
        #[arg(long)]
        order: Option<i64>,
        /// Worker threads for batch runs.
        #[arg(long, default_value_t = 1)]
        parallelism: usize,
        /// Plain-text file listing ids to run, one per line (# comments).
        #[arg(long, conflicts_with = "id")]
        manifest: Option<PathBuf>,
        /// Also run records marked as negative controls.
        #[arg(long)]
        include_negative_controls: bool,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        /// Write the report here instead of stdout.
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Scan partition-count inequalities and their series bridges.
    Inequality {
        /// Inequality or bridge id, or glob; everything when absent.
        #[arg(long)]
        id: Option<String>,
        /// Largest n scanned.
        #[arg(long, default_value_t = 500)]
        max_n: i64,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        /// Write the report here instead of stdout.
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Print the left-hand side of a series identity as exact coefficients.
    Expand {
        #[arg(long)]
        id: String,
        #[arg(long, default_value_t = 20)]
        order: i64,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        /// Write the report here instead of stdout.
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

/// Parses `args` and runs the selected command, returning the process exit
/// code. All human-facing failures are printed to stderr.
pub fn run_from_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            print!("{e}");
            return 0;
        }
        Err(e) => {
            eprint!("{e}");
            return 2;
        }
    };
    match dispatch(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    }
}

fn dispatch(cli: Cli) -> Result<i32> {
    match cli.cmd {
        Cmd::List { id, format, output } => run_list(id.as_deref(), format, output.as_deref()),
        Cmd::Verify {
            id,
            order,
            parallelism,
            manifest,
            include_negative_controls,
            format,
            output,
        } => run_verify(
            id.as_deref(),
            order,
            parallelism,
            manifest.as_deref(),
            include_negative_controls,
            format,
            output.as_deref(),
        ),
        Cmd::Inequality { id, max_n, format, output } => {
            run_inequality(id.as_deref(), max_n, format, output.as_deref())
        }
        Cmd::Expand { id, order, format, output } => {
            run_expand(&id, order, format, output.as_deref())
        }
    }
}

/// Writes `text` to `output` or stdout.
fn emit(output: Option<&std::path::Path>, text: &str) -> Result<()> {
    match output {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| Error::InvalidSpec(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

// ---------------------------------------------------------------------------
// list
// ---------------------------------------------------------------------------

fn run_list(filter: Option<&str>, format: Format, output: Option<&std::path::Path>) -> Result<i32> {
    let records: Vec<_> = identities::registry()
        .iter()
        .filter(|r| filter.is_none_or(|f| identities::glob_match(f, r.id)))
        .collect();
    if records.is_empty() {
        // Reuse the not-found diagnostics (nearest ids) for literal ids.
        if let Some(f) = filter {
            if !f.contains(['*', '?']) {
                identities::find(f)?;
            }
            return Err(Error::InvalidSpec(format!("no identities match '{f}'")));
        }
    }
    let text = match format {
        Format::Json => {
            let rows: Vec<Value> = records
                .iter()
                .map(|r| {
                    json!({
                        "id": r.id,
                        "mode": r.kind.mode(),
                        "default_order": r.default_order,
                        "negative_control": r.negative_control,
                        "links": r.links.iter().map(|l| l.param_id).collect::<Vec<_>>(),
                        "description": r.description,
                    })
                })
                .collect();
            format!("{}\n", serde_json::to_string_pretty(&rows).expect("registry listing"))
        }
        Format::Text => {
            let mut out = String::new();
            for r in &records {
                let control = if r.negative_control { "  [negative control]" } else { "" };
                writeln!(
                    out,
                    "{:<22} {:<18} order={:<5}{} {}",
                    r.id,
                    r.kind.mode(),
                    r.default_order,
                    control,
                    r.description
                )
                .expect("string write");
            }
            writeln!(out, "{} identities", records.len()).expect("string write");
            out
        }
    };
    emit(output, &text)?;
    Ok(0)
}

// ---------------------------------------------------------------------------
// verify
// ---------------------------------------------------------------------------

fn report_json(r: &VerificationReport) -> Value {
    json!({
        "id": r.id,
        "mode": r.mode,
        "order": r.order_used,
        "status": r.status.as_str(),
        "mismatch": r.mismatch.as_ref().map(|m| {
            json!({
                "exponent": m.exponent,
                "dega": m.dega,
                "degb": m.degb,
                "lhs": m.lhs,
                "rhs": m.rhs,
            })
        }),
        "elapsed_ms": r.elapsed_ms as u64,
    })
}

fn report_text(r: &VerificationReport) -> String {
    let mut line = format!("{:<13} {:<22} {:<18} order={}", r.status.as_str(), r.id, r.mode, r.order_used);
    if let Some(m) = &r.mismatch {
        let mut at = format!("q^{}", m.exponent);
        if m.dega != 0 {
            write!(at, " a^{}", m.dega).expect("string write");
        }
        if m.degb != 0 {
            write!(at, " b^{}", m.degb).expect("string write");
        }
        write!(line, "  first divergence at {at}: lhs={} rhs={}", m.lhs, m.rhs)
            .expect("string write");
    }
    if let Some(e) = &r.error {
        write!(line, "  error: {e}").expect("string write");
    }
    write!(line, "  {}ms", r.elapsed_ms).expect("string write");
    line
}

/// Reads a manifest: one id per line, blank lines and `#` comments skipped.
fn manifest_ids(path: &std::path::Path) -> Result<Vec<String>> {
    let content = std::fs::read_to_string(path)
        .map_err(|e| Error::InvalidSpec(format!("cannot read {}: {e}", path.display())))?;
    Ok(content
        .lines()
        .map(|line| line.split('#').next().unwrap_or("").trim())
        .filter(|line| !line.is_empty())
        .map(str::to_string)
        .collect())
}

fn run_verify(
    filter: Option<&str>,
    order: Option<i64>,
    parallelism: usize,
    manifest: Option<&std::path::Path>,
    include_negative: bool,
    format: Format,
    output: Option<&std::path::Path>,
) -> Result<i32> {
    if parallelism < 1 {
        return Err(Error::InvalidSpec("parallelism must be at least 1".into()));
    }
    let reports: Vec<VerificationReport> = match manifest {
        Some(path) => {
            let ids = manifest_ids(path)?;
            if ids.is_empty() {
                return Err(Error::InvalidSpec(format!(
                    "manifest {} lists no ids",
                    path.display()
                )));
            }
            let mut reports = Vec::with_capacity(ids.len());
            for id in &ids {
                reports.push(identities::verify(id, order)?);
            }
            reports
        }
        None => identities::verify_all(order, parallelism, filter, include_negative)?,
    };

    let text = match format {
        Format::Json => {
            let rows: Vec<Value> = reports.iter().map(report_json).collect();
            format!("{}\n", serde_json::to_string_pretty(&rows).expect("verify report"))
        }
        Format::Text => {
            let mut out = String::new();
            for r in &reports {
                writeln!(out, "{}", report_text(r)).expect("string write");
            }
            let verified = reports.iter().filter(|r| r.status == Status::Verified).count();
            let mismatched = reports.iter().filter(|r| r.status == Status::Mismatch).count();
            let failed = reports.iter().filter(|r| r.status == Status::BuilderError).count();
            writeln!(out, "{verified} verified, {mismatched} mismatched, {failed} builder errors")
                .expect("string write");
            out
        }
    };
    emit(output, &text)?;

    if reports.iter().any(|r| r.status == Status::BuilderError) {
        Ok(2)
    } else if reports.iter().any(|r| r.status == Status::Mismatch) {
        Ok(1)
    } else {
        Ok(0)
    }
}

// ---------------------------------------------------------------------------
// inequality
// ---------------------------------------------------------------------------

struct InequalityRow {
    id: String,
    mode: &'static str,
    order: i64,
    ok: bool,
    /// First violated index with the offending value, when not ok.
    violation: Option<(i64, String)>,
    zeros: Vec<i64>,
    elapsed_ms: u128,
}

fn inequality_row_json(row: &InequalityRow) -> Value {
    json!({
        "id": row.id,
        "mode": row.mode,
        "order": row.order,
        "status": if row.ok { "VERIFIED" } else { "MISMATCH" },
        "mismatch": row.violation.as_ref().map(|(n, value)| {
            json!({
                "exponent": n,
                "dega": 0,
                "degb": 0,
                "lhs": value,
                "rhs": "0/1",
            })
        }),
        "elapsed_ms": row.elapsed_ms as u64,
    })
}

fn inequality_row_text(row: &InequalityRow) -> String {
    let status = if row.ok { "VERIFIED" } else { "MISMATCH" };
    let mut line =
        format!("{:<13} {:<22} {:<18} N<={}", status, row.id, row.mode, row.order);
    if let Some((n, value)) = &row.violation {
        write!(line, "  violated at n={n}: value={value}").expect("string write");
    }
    if !row.zeros.is_empty() {
        let shown: Vec<String> = row.zeros.iter().take(12).map(|n| n.to_string()).collect();
        let ellipsis = if row.zeros.len() > 12 { ",..." } else { "" };
        write!(line, "  zeros=[{}{}]", shown.join(","), ellipsis).expect("string write");
    }
    write!(line, "  {}ms", row.elapsed_ms).expect("string write");
    line
}

/// The inequality sum a failed bridge disagreed on, re-derived from the
/// partition tables at the reported index.
fn bridge_value_at(report: &partitions::BridgeReport, n: i64) -> String {
    partitions::inequality_registry()
        .into_iter()
        .find(|s| s.id == report.inequality_id)
        .and_then(|spec| {
            let table = partitions::partition_table(report.checked_to + 1).ok()?;
            let values = partitions::inequality_check(&spec, &table, report.checked_to).ok()?;
            values.get(n as usize).map(|v| format!("{v}/1"))
        })
        .unwrap_or_else(|| "0/1".to_string())
}

fn run_inequality(
    filter: Option<&str>,
    max_n: i64,
    format: Format,
    output: Option<&std::path::Path>,
) -> Result<i32> {
    if max_n < 1 {
        return Err(Error::InvalidSpec("max-n must be at least 1".into()));
    }
    let specs: Vec<_> = partitions::inequality_registry()
        .into_iter()
        .filter(|s| filter.is_none_or(|f| identities::glob_match(f, s.id)))
        .collect();
    let bridge_ids: Vec<&'static str> = partitions::bridge_ids()
        .into_iter()
        .filter(|id| filter.is_none_or(|f| identities::glob_match(f, id)))
        .collect();
    if specs.is_empty() && bridge_ids.is_empty() {
        let f = filter.unwrap_or("*");
        let mut nearest: Vec<String> =
            partitions::inequality_registry().iter().map(|s| s.id.to_string()).collect();
        nearest.extend(partitions::bridge_ids().iter().map(|s| s.to_string()));
        return Err(Error::UnknownId { id: f.to_string(), nearest });
    }

    let mut rows = Vec::new();
    if !specs.is_empty() {
        let table = partitions::partition_table(max_n)?;
        for spec in &specs {
            let start = Instant::now();
            let values = partitions::inequality_check(spec, &table, max_n)?;
            let violation = partitions::first_violation(&values)
                .map(|n| (n, format!("{}/1", values[n as usize])));
            rows.push(InequalityRow {
                id: spec.id.to_string(),
                mode: "INEQUALITY",
                order: max_n,
                ok: violation.is_none(),
                violation,
                zeros: partitions::zero_set(&values),
                elapsed_ms: start.elapsed().as_millis(),
            });
        }
    }
    // Bridges re-derive the inequality sums from the verified series side;
    // capped so interactive scans with large N stay responsive.
    let bridge_order = max_n.min(300).max(8);
    for id in bridge_ids {
        let start = Instant::now();
        let report = partitions::coefficient_nonnegativity_bridge(id, bridge_order)?;
        let bad = report.first_mismatch.iter().chain(report.first_negative.iter()).min().copied();
        rows.push(InequalityRow {
            id: format!("{} -> {}", report.identity_id, report.inequality_id),
            mode: "BRIDGE",
            order: report.checked_to,
            ok: report.ok(),
            violation: bad.map(|n| (n, bridge_value_at(&report, n))),
            zeros: report.zero_set.clone(),
            elapsed_ms: start.elapsed().as_millis(),
        });
    }

    let text = match format {
        Format::Json => {
            let out: Vec<Value> = rows.iter().map(inequality_row_json).collect();
            format!("{}\n", serde_json::to_string_pretty(&out).expect("inequality report"))
        }
        Format::Text => {
            let mut out = String::new();
            for row in &rows {
                writeln!(out, "{}", inequality_row_text(row)).expect("string write");
            }
            let ok = rows.iter().filter(|r| r.ok).count();
            writeln!(out, "{ok} of {} checks passed", rows.len()).expect("string write");
            out
        }
    };
    emit(output, &text)?;
    Ok(if rows.iter().all(|r| r.ok) { 0 } else { 1 })
}

// ---------------------------------------------------------------------------
// expand
// ---------------------------------------------------------------------------

fn run_expand(
    id: &str,
    order: i64,
    format: Format,
    output: Option<&std::path::Path>,
) -> Result<i32> {
    if order < MIN_ORDER {
        return Err(Error::InvalidSpec(format!(
            "order {order} is below the minimum of {MIN_ORDER}"
        )));
    }
    let record = identities::find(id)?;
    // (exponent, dega, degb, coefficient) rows of the left-hand side.
    let mut terms: Vec<(i64, i32, i32, String)> = Vec::new();
    match &record.kind {
        IdentityKind::Univariate { lhs, .. } => {
            let series = identities::expr::build_q(lhs, order)?;
            for (e, c) in series.iter() {
                terms.push((*e, 0, 0, format_rat(c)));
            }
        }
        IdentityKind::Parameterized { lhs, .. } => {
            let series = identities::expr::build_param(lhs, order)?;
            for (e, poly) in series.iter() {
                for ((da, db), c) in poly.terms() {
                    terms.push((*e, *da, *db, format_rat(c)));
                }
            }
        }
        _ => {
            return Err(Error::InvalidSpec(format!(
                "'{id}' is a {} record; expand supports series identities only",
                record.kind.mode()
            )));
        }
    }
    terms.sort();

    let text = match format {
        Format::Json => {
            let rows: Vec<Value> = terms
                .iter()
                .map(|(e, da, db, c)| {
                    json!({"exponent": e, "dega": da, "degb": db, "coeff": c})
                })
                .collect();
            let doc = json!({
                "id": record.id,
                "mode": record.kind.mode(),
                "order": order,
                "side": "lhs",
                "terms": rows,
            });
            format!("{}\n", serde_json::to_string_pretty(&doc).expect("expand report"))
        }
        Format::Text => {
            let mut out = format!("{} (lhs, order {order}):\n", record.id);
            for (e, da, db, c) in &terms {
                let mut monomial = format!("q^{e}");
                if *da != 0 {
                    write!(monomial, " a^{da}").expect("string write");
                }
                if *db != 0 {
                    write!(monomial, " b^{db}").expect("string write");
                }
                writeln!(out, "  {monomial}: {c}").expect("string write");
            }
            out
        }
    };
    emit(output, &text)?;
    Ok(0)
}
