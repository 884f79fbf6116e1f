//! CSV emission of sweep results and a reader for the same files.
//!
//! Every file starts with `# key=value` comment lines (config hash, norm
//! conventions) followed by the header. Floats use 17 significant digits;
//! absent values are empty cells; booleans are `0`/`1`.

use std::path::Path;

use crate::diagnostics::{ENERGY_NORM, ETA_NORM};
use crate::error::{Error, Result};
use crate::harness::sweep::SweepResult;

pub const ERRORS_HEADER: [&str; 7] = ["tau", "t", "err_xi_l2", "err_phi_l2", "err_zeta_l2", "err_v_l2", "err_v_sup"];
pub const ETA_HEADER: [&str; 4] = ["tau", "t", "eta_h2_sq", "eta_sup"];
pub const ENERGY_HEADER: [&str; 8] = ["tau", "t", "e_xi", "e_tau_v", "e_phi", "e_zeta", "e_x_xi", "int_e_v_to_t"];
pub const LAYER_HEADER: [&str; 6] = ["tau", "eta0_h2_sq", "t_star", "fitted_rate", "plateau", "crossed"];

pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

fn fmt_opt(x: Option<f64>) -> String {
    x.map(fmt_f64).unwrap_or_default()
}

fn render(comments: &[String], header: &[&str], rows: &[Vec<String>]) -> String {
    let mut out = String::new();
    for c in comments {
        out.push_str("# ");
        out.push_str(c);
        out.push('\n');
    }
    let mut w = ::csv::WriterBuilder::new().from_writer(Vec::new());
    w.write_record(header).expect("in-memory write");
    for r in rows {
        w.write_record(r).expect("in-memory write");
    }
    let bytes = w.into_inner().expect("in-memory flush");
    out.push_str(std::str::from_utf8(&bytes).expect("ascii output"));
    out
}

fn comments(result: &SweepResult, extra: &[&str]) -> Vec<String> {
    let mut c = vec![
        format!("config_hash={}", result.config_hash),
        format!("scenario={}", result.scenario),
    ];
    c.extend(extra.iter().map(|s| s.to_string()));
    for r in &result.runs {
        if let Err(e) = &r.result {
            c.push(format!("failed tau={}: {e}", fmt_f64(r.tau.value())));
        }
    }
    c
}

/// The four files as `(name, contents)`.
pub fn render_csv(result: &SweepResult) -> Vec<(&'static str, String)> {
    let ok_runs: Vec<_> = result.runs.iter().filter_map(|r| r.result.as_ref().ok()).collect();

    let mut errors = Vec::new();
    let mut eta = Vec::new();
    let mut energy = Vec::new();
    let mut layer = Vec::new();
    for run in &ok_runs {
        let tau = fmt_f64(run.tau.value());
        for s in &run.samples {
            if let Some(e) = &s.errors {
                errors.push(vec![
                    tau.clone(),
                    fmt_f64(s.t),
                    fmt_f64(e.xi_l2),
                    fmt_f64(e.phi_l2),
                    fmt_f64(e.zeta_l2),
                    fmt_f64(e.v_l2),
                    fmt_f64(e.v_sup),
                ]);
            }
            eta.push(vec![tau.clone(), fmt_f64(s.t), fmt_f64(s.eta_h2_sq), fmt_f64(s.eta_sup)]);
            let en = &s.energy;
            energy.push(vec![
                tau.clone(),
                fmt_f64(s.t),
                fmt_f64(en.e_xi),
                fmt_f64(en.e_tau_v),
                fmt_f64(en.e_phi),
                fmt_f64(en.e_zeta),
                fmt_f64(en.e_x_xi),
                fmt_f64(s.int_e_v_to_t),
            ]);
        }
        let l = &run.layer;
        // the layer estimate runs on the amplitude ||eta||; report squares
        layer.push(vec![
            tau.clone(),
            fmt_f64(l.eta0_norm * l.eta0_norm),
            fmt_opt(l.t_star),
            fmt_opt(l.fitted_rate),
            fmt_f64(l.plateau * l.plateau),
            if l.crossed { "1" } else { "0" }.to_string(),
        ]);
    }

    let eta_norm = format!("eta_norm={}", ETA_NORM.label());
    let energy_norm = format!("energy_norm={}", ENERGY_NORM.label());
    vec![
        (
            "errors.csv",
            render(
                &comments(result, &["norms=strong L2 and sup at sample times; weak convergence of v is not measured"]),
                &ERRORS_HEADER,
                &errors,
            ),
        ),
        ("eta.csv", render(&comments(result, &[&eta_norm]), &ETA_HEADER, &eta)),
        (
            "energy.csv",
            render(
                &comments(result, &[&energy_norm, "int_e_v_to_t=trapezoid over sample times (sampled approximation)"]),
                &ENERGY_HEADER,
                &energy,
            ),
        ),
        (
            "layer.csv",
            render(
                &comments(
                    result,
                    &[&eta_norm, "layer=threshold 0.01 and fitted_rate on the amplitude ||eta||_H2"],
                ),
                &LAYER_HEADER,
                &layer,
            ),
        ),
    ]
}

/// Writes `errors.csv`, `eta.csv`, `energy.csv` and `layer.csv` into `dir`.
pub fn emit_csv(result: &SweepResult, dir: &Path) -> Result<()> {
    std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    for (name, text) in render_csv(result) {
        let path = dir.join(name);
        std::fs::write(&path, text).map_err(|e| Error::io(&path, e))?;
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq)]
pub struct CsvTable {
    /// Comment lines without the leading `#` and space.
    pub comments: Vec<String>,
    pub header: Vec<String>,
    /// Empty cells are `None`.
    pub rows: Vec<Vec<Option<f64>>>,
}

impl CsvTable {
    pub fn column(&self, name: &str) -> Option<usize> {
        self.header.iter().position(|h| h == name)
    }

    /// Value of `key=value` comment lines.
    pub fn comment_value(&self, key: &str) -> Option<&str> {
        self.comments
            .iter()
            .find_map(|c| c.strip_prefix(key).and_then(|r| r.strip_prefix('=')))
    }
}

/// Parses a file produced by [`emit_csv`].
pub fn parse_csv(text: &str) -> Result<CsvTable> {
    let comments = text
        .lines()
        .take_while(|l| l.starts_with('#'))
        .map(|l| l.trim_start_matches('#').trim_start().to_string())
        .collect();
    let mut rdr = ::csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .has_headers(true)
        .from_reader(text.as_bytes());
    let header: Vec<String> = rdr
        .headers()
        .map_err(|e| Error::Csv(e.to_string()))?
        .iter()
        .map(str::to_string)
        .collect();
    if header.is_empty() || header.iter().any(|h| h.is_empty()) {
        return Err(Error::Csv("missing or empty header".into()));
    }
    let mut rows = Vec::new();
    for (i, rec) in rdr.records().enumerate() {
        let rec = rec.map_err(|e| Error::Csv(e.to_string()))?;
        let row = rec
            .iter()
            .map(|cell| {
                if cell.is_empty() {
                    Ok(None)
                } else {
                    cell.parse::<f64>()
                        .map(Some)
                        .map_err(|_| Error::Csv(format!("row {}: `{cell}` is not a number", i + 1)))
                }
            })
            .collect::<Result<Vec<_>>>()?;
        rows.push(row);
    }
    Ok(CsvTable { comments, header, rows })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn float_format_round_trips() {
        for x in [0.1, 1.0 / 3.0, -2.5e-300, 6.02214076e23, 0.0] {
            assert_eq!(fmt_f64(x).parse::<f64>().unwrap(), x);
        }
        assert_eq!(fmt_f64(0.25), "2.5000000000000000e-1");
    }

    #[test]
    fn parse_basic_table() {
        let t = parse_csv("# config_hash=ab\n# x=y\na,b\n1.5,\n2,3e-1\n").unwrap();
        assert_eq!(t.comment_value("config_hash"), Some("ab"));
        assert_eq!(t.header, vec!["a", "b"]);
        assert_eq!(t.rows, vec![vec![Some(1.5), None], vec![Some(2.0), Some(0.3)]]);
        assert_eq!(t.column("b"), Some(1));
    }

    #[test]
    fn parse_rejects_garbage() {
        assert!(parse_csv("a,b\n1,x\n").is_err());
        assert!(parse_csv("a,b\n1,2,3\n").is_err());
        assert!(parse_csv("").is_err());
    }
}
