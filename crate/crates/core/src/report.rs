//! CSV and JSON emitters. Floats use the shortest decimal that round-trips,
//! rows keep k or grid order, so equal inputs give byte-identical files.

use std::fmt::Write as _;

use serde::Serialize;

use crate::denominator::{DenominatorReport, DiophantineScan};
use crate::error::{Error, Result};
use crate::solver::{GrowthRow, ResidualReport, SeriesSolution, SmoothnessReport};

pub fn fmt_float(v: f64) -> String {
    if v.is_nan() {
        "nan".into()
    } else if v.is_infinite() {
        if v > 0.0 { "inf" } else { "-inf" }.into()
    } else {
        format!("{v:?}")
    }
}

fn opt(v: Option<f64>) -> String {
    v.map(fmt_float).unwrap_or_default()
}

pub fn denominator_csv(report: &DenominatorReport) -> String {
    let mut out = String::from("k,expected_delta4,scaled_det_mantissa,log_scale,delta5_estimate,resonant_flag\n");
    for r in &report.rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{}",
            r.k,
            opt(r.expected_delta4),
            fmt_float(r.scaled_det_mantissa),
            fmt_float(r.log_scale),
            opt(r.delta5_estimate),
            u8::from(r.resonant)
        );
    }
    out
}

pub fn grid_csv(rows: &[(f64, f64, f64)]) -> String {
    let mut out = String::from("x,y,u\n");
    for (x, y, u) in rows {
        let _ = writeln!(out, "{},{},{}", fmt_float(*x), fmt_float(*y), fmt_float(*u));
    }
    out
}

pub fn scan_csv(scan: &DiophantineScan) -> String {
    let mut out = String::from("k,abs_denominator,weighted\n");
    for r in &scan.table {
        let _ = writeln!(out, "{},{},{}", r.k, fmt_float(r.abs_denominator), fmt_float(r.weighted));
    }
    out
}

pub fn growth_csv(rows: &[GrowthRow]) -> String {
    let mut out = String::from("k,log_max_coefficient,scaled_det_mantissa,log_scale\n");
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{},{}",
            r.k,
            fmt_float(r.log_max_coefficient),
            fmt_float(r.scaled_det_mantissa),
            fmt_float(r.log_scale)
        );
    }
    out
}

#[derive(Debug, Serialize)]
pub struct SolveSummary<'a> {
    pub truncation: usize,
    pub resonant_modes: &'a [usize],
    pub m_hat: Option<f64>,
    pub energy_sup: f64,
    pub residuals: &'a ResidualReport,
    pub smoothness: Option<&'a SmoothnessReport>,
    pub warnings: &'a [String],
}

impl<'a> SolveSummary<'a> {
    pub fn new(sol: &'a SeriesSolution, residuals: &'a ResidualReport, smoothness: Option<&'a SmoothnessReport>) -> Self {
        Self {
            truncation: sol.truncation(),
            resonant_modes: sol.resonant(),
            m_hat: sol.m_hat(),
            energy_sup: residuals.energy_sup,
            residuals,
            smoothness,
            warnings: sol.warnings(),
        }
    }
}

pub fn to_json<T: Serialize>(value: &T) -> Result<String> {
    serde_json::to_string_pretty(value)
        .map(|s| s + "\n")
        .map_err(|e| Error::Config(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floats_round_trip() {
        for v in [0.1, 1.0 / 3.0, -4.828_427_124_746_19, 1e-300, 6.02e23] {
            assert_eq!(fmt_float(v).parse::<f64>().unwrap(), v);
        }
        assert_eq!(fmt_float(1.0), "1.0");
        assert_eq!(fmt_float(f64::INFINITY), "inf");
    }

    #[test]
    fn grid_layout() {
        let csv = grid_csv(&[(0.0, -1.0, 0.5), (1.5, -1.0, 0.25)]);
        assert_eq!(csv, "x,y,u\n0.0,-1.0,0.5\n1.5,-1.0,0.25\n");
    }
}
