use std::io::Write;

use serde::{Deserialize, Serialize};

use super::ensemble::EnsembleMeta;
use crate::error::Result;

/// Sample mean and standard error `sd / sqrt(N)`; the error is 0 for `N < 2`.
pub fn mean_stderr(xs: &[f64]) -> (f64, f64) {
    let n = xs.len();
    if n == 0 {
        return (f64::NAN, 0.0);
    }
    // Shifted by the first sample, so identical samples give exact results.
    let x0 = xs[0];
    let dm = xs.iter().map(|x| x - x0).sum::<f64>() / n as f64;
    let mean = x0 + dm;
    if n < 2 {
        return (mean, 0.0);
    }
    let var = xs.iter().map(|x| (x - x0 - dm).powi(2)).sum::<f64>() / (n - 1) as f64;
    (mean, (var / n as f64).sqrt())
}

/// One checked point of an inequality `left <= right`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReportRow {
    /// Time or radius at which the inequality is evaluated.
    pub x: f64,
    pub left: f64,
    pub right: f64,
    /// Monte-Carlo standard error of `left - right`.
    pub stderr: f64,
    pub pass: bool,
    /// False when the bound is vacuous (a probability bound above 1).
    pub informative: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EstimateReport {
    pub name: String,
    pub bias: f64,
    pub meta: EnsembleMeta,
    pub pass: bool,
    pub rows: Vec<ReportRow>,
}

pub const REPORT_HEADER: &str = "x,left,right,stderr,bias,pass,informative";

impl EstimateReport {
    /// Rows pass when `left <= right + 3 stderr + bias`.
    pub(crate) fn build(name: &str, points: Vec<(f64, f64, f64, f64, bool)>, bias: f64, meta: EnsembleMeta) -> Self {
        let rows: Vec<ReportRow> = points
            .into_iter()
            .map(|(x, left, right, stderr, informative)| ReportRow {
                x,
                left,
                right,
                stderr,
                pass: left <= right + 3.0 * stderr + bias,
                informative,
            })
            .collect();
        let pass = !rows.is_empty() && rows.iter().all(|r| r.pass);
        Self {
            name: name.into(),
            bias,
            meta,
            pass,
            rows,
        }
    }

    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "{REPORT_HEADER}")?;
        for r in &self.rows {
            writeln!(
                w,
                "{:e},{:e},{:e},{:e},{:e},{},{}",
                r.x, r.left, r.right, r.stderr, self.bias, r.pass, r.informative
            )?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mean_and_stderr() {
        let (m, s) = mean_stderr(&[1.0, 2.0, 3.0, 4.0]);
        assert_eq!(m, 2.5);
        assert!((s - (5.0f64 / 3.0 / 4.0).sqrt()).abs() < 1e-15);
        assert_eq!(mean_stderr(&[7.0]), (7.0, 0.0));
        assert!(mean_stderr(&[]).0.is_nan());
        assert_eq!(mean_stderr(&[0.1; 7]), (0.1, 0.0));
    }
}
