//! CSV and table rendering. Every writer is a pure function of its input, so
//! rerunning a configuration reproduces the files byte for byte. Wall times
//! are kept out of the result CSVs for that reason.

use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};
use crate::kernels::KernelSpec;

use super::boundary::GridPoint;
use super::experiment::Report;
use super::sweep::CurvePoint;

pub const REPORT_HEADER: &str =
    "k_train,method,mean_rate,stddev,repeats,completed,not_converged,svm_sigma2,c_cost";
pub const REPEATS_HEADER: &str = "k_train,method,repeat,seed,rate,error";
pub const TIMING_HEADER: &str = "k_train,method,wall_seconds";
pub const BOUNDARY_HEADER: &str = "x,y,class";

const NA: &str = "NA";

fn opt(v: Option<f64>) -> String {
    v.map_or_else(|| NA.to_string(), |v| format!("{v:.6}"))
}

/// Quotes a CSV field when it contains a delimiter, quote or newline.
fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n', '\r']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// One row per (k_train, method): rates are fractions in `[0, 1]`; `NA`
/// marks statistics with too few completed repeats. `svm_sigma2` and
/// `c_cost` are the SVM parameters actually used (empty for NN).
pub fn report_csv(report: &Report) -> String {
    let mut out = format!("{REPORT_HEADER}\n");
    for cell in &report.cells {
        let (sigma2, cost) = match cell.svm {
            Some(p) => (
                match p.kernel {
                    KernelSpec::Rbf { sigma2 } => format!("{sigma2:e}"),
                    _ => String::new(),
                },
                format!("{}", p.c_cost),
            ),
            None => (String::new(), String::new()),
        };
        writeln!(
            out,
            "{},{},{},{},{},{},{},{},{}",
            cell.k_train,
            csv_field(&cell.method.to_string()),
            opt(cell.mean_rate()),
            opt(cell.stddev()),
            cell.outcomes.len(),
            cell.completed(),
            cell.not_converged(),
            sigma2,
            cost
        )
        .unwrap();
    }
    out
}

/// One row per repeat; `rate` is `NA` and `error` holds the message for
/// failed repeats.
pub fn repeats_csv(report: &Report) -> String {
    let mut out = format!("{REPEATS_HEADER}\n");
    for cell in &report.cells {
        for o in &cell.outcomes {
            let (rate, error) = match &o.result {
                Ok(r) => (format!("{r:.6}"), String::new()),
                Err(e) => (NA.to_string(), csv_field(e)),
            };
            writeln!(
                out,
                "{},{},{},{},{},{}",
                cell.k_train,
                csv_field(&cell.method.to_string()),
                o.repeat,
                o.seed,
                rate,
                error
            )
            .unwrap();
        }
    }
    out
}

pub fn timing_csv(report: &Report) -> String {
    let mut out = format!("{TIMING_HEADER}\n");
    for cell in &report.cells {
        writeln!(
            out,
            "{},{},{:.3}",
            cell.k_train,
            csv_field(&cell.method.to_string()),
            cell.wall_time.as_secs_f64()
        )
        .unwrap();
    }
    out
}

/// `value_name,mean_error_rate,completed,repeats`.
pub fn curve_csv(value_name: &str, points: &[CurvePoint]) -> String {
    let mut out = format!("{value_name},mean_error_rate,completed,repeats\n");
    for p in points {
        writeln!(
            out,
            "{},{},{},{}",
            p.value,
            opt(p.mean_error),
            p.completed,
            p.repeats
        )
        .unwrap();
    }
    out
}

pub fn boundary_csv(points: &[GridPoint]) -> String {
    let mut out = format!("{BOUNDARY_HEADER}\n");
    for p in points {
        writeln!(out, "{:.6},{:.6},{}", p.x, p.y, p.class).unwrap();
    }
    out
}

/// Recognition rates in percent, one row per `k_train` and one column per
/// method, in the layout of a results table. Incomplete cells are starred.
pub fn table1(report: &Report) -> String {
    let mut methods: Vec<String> = Vec::new();
    let mut ks: Vec<usize> = Vec::new();
    for c in &report.cells {
        let m = c.method.to_string();
        if !methods.contains(&m) {
            methods.push(m);
        }
        if !ks.contains(&c.k_train) {
            ks.push(c.k_train);
        }
    }
    let width = methods.iter().map(String::len).max().unwrap_or(0).max(14);
    let mut out = format!("{:>7}", "k_train");
    for m in &methods {
        write!(out, "  {m:>width$}").unwrap();
    }
    out.push('\n');
    for &k in &ks {
        write!(out, "{k:>7}").unwrap();
        for m in &methods {
            let text = match report.cell(k, m) {
                Some(cell) => match cell.mean_rate() {
                    Some(mean) => {
                        let sd = cell
                            .stddev()
                            .map_or(String::new(), |s| format!(" ± {:.1}", 100.0 * s));
                        let star = if cell.is_complete() { "" } else { "*" };
                        format!("{:.1}{sd}{star}", 100.0 * mean)
                    }
                    None => "failed".to_string(),
                },
                None => "-".to_string(),
            };
            write!(out, "  {text:>width$}").unwrap();
        }
        out.push('\n');
    }
    if report.cells.iter().any(|c| !c.is_complete()) {
        out.push_str("* some repeats failed; mean over completed repeats\n");
    }
    out
}

/// Writes `contents` to `dir/name`, creating `dir` if needed.
pub fn write_output(dir: &Path, name: &str, contents: &str) -> Result<()> {
    std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let path = dir.join(name);
    std::fs::write(&path, contents).map_err(|e| Error::io(&path, e))
}
