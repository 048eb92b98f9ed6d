//! The `dca` command line.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage or input error,
//! 3 search budget exhausted or no applicable construction. Every array is
//! re-verified before it is written.

use std::ffi::OsString;
use std::fs;
use std::io::{Read, Write};
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::array::{ArrayKind, ResidueArray};
use crate::construct::{
    self, applicable_methods, construct_auto, method_for, spectrum, ConstructError, Method,
};
use crate::format::{read_any, write_array, write_array_json};
use crate::latin::{
    check_row_complete, classify_pair, latin_squares_from_dca, williams_order, write_latin,
    LatinSquare,
};
use crate::search::{
    search_hdm_with_progress, search_third_column_with_progress, HdmSearchConfig, SearchConfig,
    SearchError, DEFAULT_NODE_BUDGET,
};
use crate::verify::{verify_any, verify_dca, VerifyError};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_NO_RESULT: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "dca", version, about = "Cyclic difference covering arrays and nearly orthogonal Latin squares")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
    Csv,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum MethodArg {
    Auto,
    OddF,
    FourM,
    SixMu,
    Table,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum FormArg {
    Reduced,
    Full,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Build a DCA(4, n+1; n) by a direct construction.
    Construct {
        #[arg(long)]
        order: u32,
        #[arg(long, value_enum, default_value = "auto")]
        method: MethodArg,
        /// Output path, `-` for stdout.
        #[arg(long, default_value = "-")]
        out: String,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
        #[arg(long, value_enum, default_value = "reduced")]
        form: FormArg,
    },
    /// Check a DM, HDM or DCA file (`-` reads stdin).
    Verify {
        file: String,
        /// Also check P1, P2 and the repeated difference n/2.
        #[arg(long)]
        strict: bool,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Search for third columns, or for an HDM with `--hdm n,h`.
    Search {
        #[arg(long, required_unless_present = "hdm")]
        order: Option<u32>,
        #[arg(long, default_value_t = 1)]
        limit: usize,
        #[arg(long, default_value_t = DEFAULT_NODE_BUDGET)]
        budget: u64,
        #[arg(long, value_parser = parse_pair, conflicts_with = "order")]
        hdm: Option<(u32, u32)>,
        /// Comma-separated forced leading values of the third column.
        #[arg(long, value_delimiter = ',')]
        prefix: Vec<u32>,
        #[arg(long)]
        parallel: bool,
        /// Emit a JSON status line on stderr every this many nodes.
        #[arg(long)]
        progress: Option<u64>,
        /// Directory to write one file per solution; stdout otherwise.
        #[arg(long)]
        out_dir: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Derive Latin squares from a strictly valid DCA.
    Latin {
        file: String,
        /// Square index, or `all`.
        #[arg(long, default_value = "all")]
        square: String,
        /// Reorder columns by the Williams sequence and check row completeness.
        #[arg(long)]
        williams: bool,
        /// Print the pairwise orthogonality classification.
        #[arg(long)]
        classify: bool,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Report which even orders are covered and how.
    Spectrum {
        #[arg(long, default_value_t = 6)]
        min: u32,
        #[arg(long, default_value_t = 360)]
        max: u32,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
    },
}

fn parse_pair(s: &str) -> Result<(u32, u32), String> {
    let (a, b) = s.split_once(',').ok_or("expected n,h")?;
    let p = |x: &str| x.trim().parse::<u32>().map_err(|e| format!("`{x}`: {e}"));
    Ok((p(a)?, p(b)?))
}

/// Output sinks and stdin, injectable for tests.
pub struct Io<'a> {
    pub stdin: &'a mut dyn Read,
    pub stdout: &'a mut dyn Write,
    pub stderr: &'a mut dyn Write,
}

struct Fail(i32, String);

type CmdResult = Result<i32, Fail>;

fn usage(msg: impl Into<String>) -> Fail {
    Fail(EXIT_USAGE, msg.into())
}

fn io_err(e: std::io::Error) -> Fail {
    Fail(EXIT_USAGE, format!("i/o error: {e}"))
}

/// Runs the CLI and returns the exit code.
pub fn run<I, T>(args: I, io: &mut Io<'_>) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let sink: &mut dyn Write = if e.use_stderr() { io.stderr } else { io.stdout };
            let _ = sink.write_all(text.as_bytes());
            return code;
        }
    };
    let result = match cli.command {
        Command::Construct { order, method, out, format, form } => {
            cmd_construct(io, order, method, &out, format, form)
        }
        Command::Verify { file, strict, format } => cmd_verify(io, &file, strict, format),
        Command::Search { order, limit, budget, hdm, prefix, parallel, progress, out_dir, format } => {
            let opts = SearchOpts { limit, budget, prefix, parallel, progress, out_dir, format };
            match hdm {
                Some((n, h)) => cmd_search_hdm(io, n, h, &opts),
                None => cmd_search(io, order.expect("clap requires --order"), &opts),
            }
        }
        Command::Latin { file, square, williams, classify, format } => {
            cmd_latin(io, &file, &square, williams, classify, format)
        }
        Command::Spectrum { min, max, format } => cmd_spectrum(io, min, max, format),
    };
    match result {
        Ok(code) => code,
        Err(Fail(code, msg)) => {
            let _ = writeln!(io.stderr, "error: {msg}");
            code
        }
    }
}

fn read_input(io: &mut Io<'_>, path: &str) -> Result<String, Fail> {
    if path == "-" {
        let mut s = String::new();
        io.stdin.read_to_string(&mut s).map_err(io_err)?;
        Ok(s)
    } else {
        fs::read_to_string(path).map_err(|e| usage(format!("cannot read {path}: {e}")))
    }
}

fn write_output(io: &mut Io<'_>, path: &str, payload: &str) -> Result<(), Fail> {
    if path == "-" {
        io.stdout.write_all(payload.as_bytes()).map_err(io_err)
    } else {
        fs::write(path, payload).map_err(|e| usage(format!("cannot write {path}: {e}")))
    }
}

fn serialize_array(a: &ResidueArray, method: Option<String>, format: Format) -> Result<String, Fail> {
    match format {
        Format::Text => Ok(write_array(a)),
        Format::Json => Ok(write_array_json(a, method) + "\n"),
        Format::Csv => Err(usage("arrays are written as text or json")),
    }
}

/// Re-verifies `a`; a failing array is never emitted.
fn reverify(a: &ResidueArray) -> Result<(), Fail> {
    let strict = a.kind() == ArrayKind::Dca;
    let r = verify_any(a, strict).map_err(|e| Fail(EXIT_VERIFY_FAILED, e.to_string()))?;
    if !r.passed() {
        return Err(Fail(
            EXIT_VERIFY_FAILED,
            format!("refusing to emit an array that fails verification: {}", r.to_text()),
        ));
    }
    Ok(())
}

fn cmd_construct(
    io: &mut Io<'_>,
    order: u32,
    method: MethodArg,
    out: &str,
    format: Format,
    form: FormArg,
) -> CmdResult {
    if order < 6 || order % 2 != 0 {
        return Err(usage(format!("order must be even and at least 6, got {order}")));
    }
    if format == Format::Csv {
        return Err(usage("arrays are written as text or json"));
    }
    let name = match method {
        MethodArg::Auto => None,
        MethodArg::OddF => Some("odd-f"),
        MethodArg::FourM => Some("four-m"),
        MethodArg::SixMu => Some("six-mu"),
        MethodArg::Table => Some("table"),
    };
    let built: Result<(ResidueArray, Method), ConstructError> = match name {
        None => construct_auto(order),
        Some(name) => match method_for(name, order) {
            Some(m) => m.build().map(|a| (a, m)),
            None => Err(ConstructError::NoMethod(order)),
        },
    };
    let (array, m) = match built {
        Ok(x) => x,
        Err(ConstructError::NoMethod(o)) => {
            let avail: Vec<String> = applicable_methods(o).iter().map(|m| m.to_string()).collect();
            let hint = if avail.is_empty() { "none".to_string() } else { avail.join(", ") };
            return Err(Fail(
                EXIT_NO_RESULT,
                format!("no {} construction for order {o} (applicable: {hint})", name.unwrap_or("direct")),
            ));
        }
        Err(e) => return Err(Fail(EXIT_NO_RESULT, e.to_string())),
    };
    let array = match form {
        FormArg::Reduced => array,
        FormArg::Full => array.to_full().map_err(|e| Fail(EXIT_VERIFY_FAILED, e.to_string()))?,
    };
    reverify(&array)?;
    write_output(io, out, &serialize_array(&array, Some(m.to_string()), format)?)?;
    let summary = format!("method={m} verified=pass\n");
    let sink: &mut dyn Write = if out == "-" { io.stderr } else { io.stdout };
    sink.write_all(summary.as_bytes()).map_err(io_err)?;
    Ok(EXIT_OK)
}

fn cmd_verify(io: &mut Io<'_>, file: &str, strict: bool, format: Format) -> CmdResult {
    let text = read_input(io, file)?;
    let array = read_any(&text).map_err(|e| usage(format!("{file}: {e}")))?;
    let report = match verify_any(&array, strict) {
        Ok(r) => r,
        Err(e @ VerifyError::OddOrderStrict(_)) => return Err(Fail(EXIT_VERIFY_FAILED, e.to_string())),
        Err(e) => return Err(usage(e.to_string())),
    };
    let payload = match format {
        Format::Json => report.to_json() + "\n",
        Format::Text => report.to_text(),
        Format::Csv => return Err(usage("verification reports are text or json")),
    };
    io.stdout.write_all(payload.as_bytes()).map_err(io_err)?;
    Ok(if report.passed() { EXIT_OK } else { EXIT_VERIFY_FAILED })
}

struct SearchOpts {
    limit: usize,
    budget: u64,
    prefix: Vec<u32>,
    parallel: bool,
    progress: Option<u64>,
    out_dir: Option<PathBuf>,
    format: Format,
}

fn emit_solutions(io: &mut Io<'_>, arrays: &[(ResidueArray, String)], opts: &SearchOpts) -> CmdResult {
    if opts.format == Format::Csv {
        return Err(usage("arrays are written as text or json"));
    }
    let ext = if opts.format == Format::Json { "json" } else { "txt" };
    let mut joined = String::new();
    for (idx, (a, method)) in arrays.iter().enumerate() {
        reverify(a)?;
        let payload = serialize_array(a, Some(method.clone()), opts.format)?;
        match &opts.out_dir {
            Some(dir) => {
                fs::create_dir_all(dir).map_err(io_err)?;
                let path = dir.join(format!("solution_{idx}.{ext}"));
                fs::write(&path, payload).map_err(io_err)?;
                writeln!(io.stdout, "{}", path.display()).map_err(io_err)?;
            }
            None => {
                if idx > 0 && opts.format == Format::Text {
                    joined.push('\n');
                }
                joined.push_str(&payload);
            }
        }
    }
    io.stdout.write_all(joined.as_bytes()).map_err(io_err)?;
    Ok(EXIT_OK)
}

/// Progress lines go straight to the process stderr so long searches stream.
fn status_line(p: &crate::search::Progress) {
    eprintln!("{}", serde_json::to_string(p).expect("progress serializes"));
}

fn cmd_search(io: &mut Io<'_>, order: u32, opts: &SearchOpts) -> CmdResult {
    let mut cfg = SearchConfig::new(order).with_limit(opts.limit).with_budget(opts.budget);
    cfg.prefix = opts.prefix.clone();
    cfg.parallel = opts.parallel;
    cfg.progress_every = opts.progress;
    let result = search_third_column_with_progress(&cfg, &status_line);
    let outcome = match result {
        Ok(o) => o,
        Err(e @ SearchError::BudgetExhausted(_)) => return Err(Fail(EXIT_NO_RESULT, e.to_string())),
        Err(e) => return Err(usage(e.to_string())),
    };
    writeln!(
        io.stderr,
        "{}",
        serde_json::json!({
            "nodes": outcome.nodes,
            "solutions": outcome.solutions.len(),
            "complete": outcome.complete,
            "budget_exhausted": outcome.budget_exhausted,
        })
    )
    .map_err(io_err)?;
    if outcome.solutions.is_empty() {
        return Err(Fail(EXIT_NO_RESULT, format!("no third column exists for order {order} with these fixed columns")));
    }
    let arrays: Vec<(ResidueArray, String)> = (0..outcome.solutions.len())
        .map(|i| (outcome.array(&cfg, i), format!("search order={order}")))
        .collect();
    emit_solutions(io, &arrays, opts)
}

fn cmd_search_hdm(io: &mut Io<'_>, n: u32, h: u32, opts: &SearchOpts) -> CmdResult {
    let cfg = HdmSearchConfig {
        node_budget: opts.budget,
        progress_every: opts.progress,
        ..HdmSearchConfig::default()
    };
    let result = search_hdm_with_progress(n, h, &cfg, &status_line);
    let a = match result {
        Ok(a) => a,
        Err(e @ (SearchError::BudgetExhausted(_) | SearchError::NoSolution)) => {
            return Err(Fail(EXIT_NO_RESULT, e.to_string()))
        }
        Err(e) => return Err(usage(e.to_string())),
    };
    emit_solutions(io, &[(a, format!("search hdm n={n} h={h}"))], opts)
}

#[derive(Serialize)]
struct LatinJson {
    order: u32,
    indices: Vec<usize>,
    ordering: Option<Vec<usize>>,
    squares: Vec<Vec<Vec<u32>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    row_complete: Option<Vec<bool>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    classification: Option<Vec<Vec<&'static str>>>,
}

fn cmd_latin(
    io: &mut Io<'_>,
    file: &str,
    square: &str,
    williams: bool,
    classify: bool,
    format: Format,
) -> CmdResult {
    let text = read_input(io, file)?;
    let array = read_any(&text).map_err(|e| usage(format!("{file}: {e}")))?;
    if array.kind() != ArrayKind::Dca {
        return Err(usage(format!("expected a DCA, got a {}", array.kind())));
    }
    let report = verify_dca(&array, true).map_err(|e| Fail(EXIT_VERIFY_FAILED, e.to_string()))?;
    if !report.passed() {
        return Err(Fail(
            EXIT_VERIFY_FAILED,
            format!("input fails strict verification: {}", report.to_text()),
        ));
    }
    let normalized = match array.form() {
        crate::array::Form::Full => array.normalized(),
        crate::array::Form::Reduced => array,
    };
    let all = latin_squares_from_dca(&normalized).map_err(|e| usage(e.to_string()))?;
    let indices: Vec<usize> = if square == "all" {
        (0..all.len()).collect()
    } else {
        let s: usize = square.parse().map_err(|_| usage(format!("--square expects an index or `all`, got `{square}`")))?;
        if s >= all.len() {
            return Err(usage(format!("square {s} out of range 0..{}", all.len())));
        }
        vec![s]
    };
    let n = normalized.order();
    let ordering = if williams {
        Some(williams_order(n).map_err(|e| usage(e.to_string()))?)
    } else {
        None
    };
    let picked: Vec<&LatinSquare> = indices.iter().map(|&s| &all[s]).collect();
    let row_complete: Option<Vec<bool>> = match &ordering {
        Some(w) => Some(
            picked
                .iter()
                .map(|l| check_row_complete(l, Some(w)).map(|r| r.passed()))
                .collect::<Result<_, _>>()
                .map_err(|e| usage(e.to_string()))?,
        ),
        None => None,
    };
    let emitted: Vec<LatinSquare> = match &ordering {
        Some(w) => picked
            .iter()
            .map(|l| l.reorder_columns(w))
            .collect::<Result<_, _>>()
            .map_err(|e| usage(e.to_string()))?,
        None => picked.iter().map(|l| (*l).clone()).collect(),
    };
    let classification = if classify {
        let mut m = Vec::new();
        for a in &picked {
            let mut row = Vec::new();
            for b in &picked {
                row.push(classify_pair(a, b).map_err(|e| usage(e.to_string()))?.as_str());
            }
            m.push(row);
        }
        Some(m)
    } else {
        None
    };

    let payload = match format {
        Format::Json => {
            let doc = LatinJson {
                order: n,
                indices: indices.clone(),
                ordering: ordering.clone(),
                squares: emitted
                    .iter()
                    .map(|l| (0..n as usize).map(|i| l.row(i).to_vec()).collect())
                    .collect(),
                row_complete: row_complete.clone(),
                classification: classification.clone(),
            };
            serde_json::to_string(&doc).expect("latin output serializes") + "\n"
        }
        Format::Text => {
            let mut out = String::new();
            for (pos, (s, l)) in indices.iter().zip(&emitted).enumerate() {
                if pos > 0 {
                    out.push('\n');
                }
                out.push_str(&format!("# square {s}\n"));
                out.push_str(&write_latin(l));
            }
            if let Some(rc) = &row_complete {
                out.push('\n');
                for (s, ok) in indices.iter().zip(rc) {
                    out.push_str(&format!(
                        "# square {s} row_complete={}\n",
                        if *ok { "pass" } else { "fail" }
                    ));
                }
            }
            if let Some(m) = &classification {
                out.push_str("\n# classification\n");
                for row in m {
                    out.push_str(&format!("# {}\n", row.join(" ")));
                }
            }
            out
        }
        Format::Csv => return Err(usage("Latin squares are written as text or json")),
    };
    io.stdout.write_all(payload.as_bytes()).map_err(io_err)?;
    let all_complete = row_complete.map_or(true, |rc| rc.iter().all(|&b| b));
    Ok(if all_complete { EXIT_OK } else { EXIT_VERIFY_FAILED })
}

fn cmd_spectrum(io: &mut Io<'_>, min: u32, max: u32, format: Format) -> CmdResult {
    if min % 2 != 0 || max % 2 != 0 || min < 6 || min > max {
        return Err(usage(format!("bounds must be even with 6 <= min <= max, got {min}..{max}")));
    }
    let rows = construct::spectrum_report(min, max);
    let payload = match format {
        Format::Csv => spectrum::to_csv(&rows),
        Format::Json => spectrum::to_json(&rows) + "\n",
        Format::Text => {
            let mut out = String::new();
            for r in &rows {
                let by = if r.constructible_by.is_empty() {
                    "-".to_string()
                } else {
                    r.constructible_by.join(", ")
                };
                out.push_str(&format!(
                    "{:>4}  {:<18}  {:<14}  {}\n",
                    r.order,
                    r.paper_status.as_str(),
                    r.paper_source,
                    by
                ));
            }
            out
        }
    };
    io.stdout.write_all(payload.as_bytes()).map_err(io_err)?;
    Ok(EXIT_OK)
}
