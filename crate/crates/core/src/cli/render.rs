//! Output formatting. Every renderer is a pure function of its inputs, so
//! identical runs produce byte-identical output.

use std::fmt::Write as _;

use clap::ValueEnum;
use serde::Serialize;

use crate::bcf::{MomentCell, ProductionReport};
use crate::gauss_borel::{AlphaSequence, Method};
use crate::hessenberg::HessenbergBands;
use crate::matrix::Matrix;
use crate::moments::MomentFile;
use crate::scalar::{decimal17, decimal17_f64, Scalar};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Pretty,
}

#[derive(Serialize)]
struct IndexedValue {
    n: usize,
    value: String,
}

#[derive(Serialize)]
struct Run {
    r: usize,
    method: &'static str,
    valid_through: Option<usize>,
    alphas: Vec<IndexedValue>,
    decimal: Vec<f64>,
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serialisable");
    s.push('\n');
    s
}

fn run_of(r: usize, seq: &AlphaSequence) -> Run {
    Run {
        r,
        method: seq.method().name(),
        valid_through: seq.valid_through(),
        alphas: seq
            .values()
            .iter()
            .enumerate()
            .map(|(n, v)| IndexedValue {
                n,
                value: v.to_string(),
            })
            .collect(),
        decimal: seq.values().iter().map(decimal17_f64).collect(),
    }
}

pub fn factor(r: usize, runs: &[AlphaSequence], format: Format) -> String {
    match format {
        Format::Json => to_json(&runs.iter().map(|s| run_of(r, s)).collect::<Vec<_>>()),
        Format::Csv => {
            let mut out = String::from("n,method,value,decimal\n");
            for seq in runs {
                for (n, v) in seq.values().iter().enumerate() {
                    let _ = writeln!(out, "{n},{},{v},{}", seq.method(), decimal17(v));
                }
            }
            out
        }
        Format::Pretty => {
            let mut out = String::new();
            for seq in runs {
                let _ = writeln!(out, "{} (r = {r})", seq.method());
                for (n, v) in seq.values().iter().enumerate() {
                    let _ = writeln!(out, "  alpha_{n:<4} {v:<30} {}", decimal17(v));
                }
            }
            out
        }
    }
}

#[derive(Serialize)]
struct MethodValue {
    method: &'static str,
    value: String,
}

#[derive(Serialize)]
struct VerifyRow {
    n: usize,
    agree: bool,
    values: Vec<MethodValue>,
}

#[derive(Serialize)]
struct VerifyReport {
    r: usize,
    methods: Vec<&'static str>,
    agree: bool,
    rows: Vec<VerifyRow>,
}

pub fn verify(r: usize, runs: &[AlphaSequence], format: Format) -> String {
    let len = runs.iter().map(AlphaSequence::len).min().unwrap_or(0);
    let rows: Vec<VerifyRow> = (0..len)
        .map(|n| {
            let first = &runs[0].values()[n];
            VerifyRow {
                n,
                agree: runs.iter().all(|s| &s.values()[n] == first),
                values: runs
                    .iter()
                    .map(|s| MethodValue {
                        method: s.method().name(),
                        value: s.values()[n].to_string(),
                    })
                    .collect(),
            }
        })
        .collect();
    let report = VerifyReport {
        r,
        methods: runs.iter().map(|s| s.method().name()).collect(),
        agree: rows.iter().all(|row| row.agree),
        rows,
    };
    match format {
        Format::Json => to_json(&report),
        Format::Csv => {
            let mut out = String::from("n,method,value,decimal\n");
            for row in &report.rows {
                for (mv, seq) in row.values.iter().zip(runs) {
                    let _ = writeln!(
                        out,
                        "{},{},{},{}",
                        row.n,
                        mv.method,
                        mv.value,
                        decimal17(&seq.values()[row.n])
                    );
                }
            }
            out
        }
        Format::Pretty => {
            let mut out = format!("r = {r}; methods: {}\n", report.methods.join(", "));
            for row in &report.rows {
                let mark = if row.agree { "ok" } else { "MISMATCH" };
                let vals: Vec<String> = row
                    .values
                    .iter()
                    .map(|v| format!("{}={}", v.method, v.value))
                    .collect();
                let _ = writeln!(out, "  alpha_{:<4} {mark:<8} {}", row.n, vals.join("  "));
            }
            let _ = writeln!(
                out,
                "{}",
                if report.agree {
                    "all methods agree"
                } else {
                    "methods disagree"
                }
            );
            out
        }
    }
}

#[derive(Serialize)]
struct Gamma {
    k: usize,
    n: usize,
    value: String,
}

#[derive(Serialize)]
struct HessenbergOut {
    r: usize,
    size: usize,
    method: &'static str,
    gammas: Vec<Gamma>,
    matrix: Vec<Vec<String>>,
}

pub fn hessenberg(
    r: usize,
    method: Method,
    bands: &HessenbergBands,
    h: &Matrix,
    format: Format,
) -> String {
    let gammas: Vec<Gamma> = (0..=r)
        .filter(|&k| k < bands.size())
        .flat_map(|k| {
            bands.band(k).iter().enumerate().map(move |(n, g)| Gamma {
                k,
                n,
                value: g.to_string(),
            })
        })
        .collect();
    let matrix: Vec<Vec<String>> = h
        .to_rows()
        .iter()
        .map(|row| row.iter().map(ToString::to_string).collect())
        .collect();
    match format {
        Format::Json => to_json(&HessenbergOut {
            r,
            size: h.rows(),
            method: method.name(),
            gammas,
            matrix,
        }),
        Format::Csv => {
            // gamma rows are indexed (k, n); H rows by (row, col)
            let mut out = String::from("kind,i,j,value,decimal\n");
            for g in &gammas {
                let v = bands.gamma(g.k, g.n).expect("listed");
                let _ = writeln!(out, "gamma,{},{},{},{}", g.k, g.n, g.value, decimal17(v));
            }
            for i in 0..h.rows() {
                for j in 0..h.cols() {
                    let v = &h[(i, j)];
                    let _ = writeln!(out, "H,{i},{j},{v},{}", decimal17(v));
                }
            }
            out
        }
        Format::Pretty => {
            let mut out = format!("r = {r}, size = {}, alphas by {method}\n", h.rows());
            for g in &gammas {
                let _ = writeln!(out, "  gamma_{}^[{}] = {}", g.n, g.k, g.value);
            }
            let width = matrix.iter().flatten().map(String::len).max().unwrap_or(1);
            out.push_str("H =\n");
            for row in &matrix {
                let cells: Vec<String> = row.iter().map(|c| format!("{c:>width$}")).collect();
                let _ = writeln!(out, "  [ {} ]", cells.join("  "));
            }
            out
        }
    }
}

#[derive(Serialize)]
struct ProductionOut {
    n: usize,
    k: usize,
    matrix: String,
    paths: String,
    ok: bool,
}

#[derive(Serialize)]
struct MomentOut {
    j: usize,
    n: usize,
    moment: String,
    paths: String,
    ok: bool,
}

#[derive(Serialize)]
struct SrcheckOut {
    r: usize,
    method: &'static str,
    nmax: usize,
    kmax: usize,
    passed: bool,
    production: Vec<ProductionOut>,
    moments: Vec<MomentOut>,
}

pub fn srcheck(
    r: usize,
    method: Method,
    nmax: usize,
    kmax: usize,
    production: &ProductionReport,
    moments: &[MomentCell],
    format: Format,
) -> String {
    let report = SrcheckOut {
        r,
        method: method.name(),
        nmax,
        kmax,
        passed: production.passed() && moments.iter().all(MomentCell::passed),
        production: production
            .cells
            .iter()
            .map(|c| ProductionOut {
                n: c.n,
                k: c.k,
                matrix: c.matrix.to_string(),
                paths: c.paths.to_string(),
                ok: c.passed(),
            })
            .collect(),
        moments: moments
            .iter()
            .map(|c| MomentOut {
                j: c.j,
                n: c.n,
                moment: c.moment.to_string(),
                paths: c.paths.to_string(),
                ok: c.passed(),
            })
            .collect(),
    };
    match format {
        Format::Json => to_json(&report),
        Format::Csv => {
            let mut out = String::from("check,a,b,lhs,rhs,ok\n");
            for c in &report.production {
                let _ = writeln!(
                    out,
                    "production,{},{},{},{},{}",
                    c.n, c.k, c.matrix, c.paths, c.ok
                );
            }
            for c in &report.moments {
                let _ = writeln!(
                    out,
                    "moment,{},{},{},{},{}",
                    c.j, c.n, c.moment, c.paths, c.ok
                );
            }
            out
        }
        Format::Pretty => {
            let mut out = format!("r = {r}, alphas by {method}\n");
            for c in &report.production {
                let mark = if c.ok { "ok" } else { "FAIL" };
                let _ = writeln!(
                    out,
                    "  (H^{})_0,{} = {}  S_{},{} = {}  {mark}",
                    c.n, c.k, c.matrix, c.n, c.k, c.paths
                );
            }
            for c in &report.moments {
                let mark = if c.ok { "ok" } else { "FAIL" };
                let _ = writeln!(
                    out,
                    "  <v_{}, x^{}> = {}  Sbar_{};{} = {}  {mark}",
                    c.j,
                    c.n,
                    c.moment,
                    c.n,
                    c.j - 1,
                    c.paths
                );
            }
            let _ = writeln!(
                out,
                "{}",
                if report.passed {
                    "all identities hold"
                } else {
                    "identity failures"
                }
            );
            out
        }
    }
}

pub fn moments(file: &MomentFile, format: Format) -> String {
    match format {
        Format::Json => to_json(file),
        Format::Csv => {
            let mut out = String::from("j,n,value,decimal\n");
            for (j, list) in file.moments.iter().enumerate() {
                for (n, v) in list.iter().enumerate() {
                    let d = v
                        .parse::<Scalar>()
                        .map(|x| decimal17(&x))
                        .unwrap_or_default();
                    let _ = writeln!(out, "{},{n},{v},{d}", j + 1);
                }
            }
            out
        }
        Format::Pretty => {
            let mut out = format!("r = {}\n", file.r);
            for (j, list) in file.moments.iter().enumerate() {
                let _ = writeln!(out, "  v_{}: {}", j + 1, list.join(", "));
            }
            out
        }
    }
}
