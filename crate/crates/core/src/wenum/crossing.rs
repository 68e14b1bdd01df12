//! First zero crossing of `r(delta)`.

use super::growth::{GrowthPoint, GrowthProblem, NodeWeightVector, OuterConfig};
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::fmt::Write as _;

/// Grid scan and bisection settings.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SearchConfig {
    pub grid_step: f64,
    /// Right end of the scanned range `(0, upper]`.
    pub upper: f64,
    /// Bisection stops once the bracket is at most this wide.
    pub bisect_tol: f64,
    /// Some grid point before the crossing must have `r < -tol_neg`.
    pub tol_neg: f64,
    pub outer: OuterConfig,
}

impl Default for SearchConfig {
    fn default() -> Self {
        Self {
            grid_step: 1e-3,
            upper: 0.5,
            bisect_tol: 1e-6,
            tol_neg: 1e-5,
            outer: OuterConfig::default(),
        }
    }
}

impl SearchConfig {
    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("grid_step", self.grid_step),
            ("bisect_tol", self.bisect_tol),
            ("tol_neg", self.tol_neg),
        ];
        for (name, v) in positive {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::InvalidArgument(format!(
                    "{name} must be positive, got {v}"
                )));
            }
        }
        if !(self.upper > self.grid_step && self.upper <= 1.0) {
            return Err(Error::InvalidArgument(format!(
                "upper must lie in (grid_step, 1], got {}",
                self.upper
            )));
        }
        Ok(())
    }
}

/// Sampled `r(delta)` with the located crossing.
#[derive(Clone, Debug, Serialize)]
pub struct GrowthCurve {
    /// `(delta, r(delta))` in the order evaluated: grid first, then bisection.
    pub samples: Vec<(f64, f64)>,
    pub delta_min: Option<f64>,
    /// `r < -tol_neg` held at some grid point below the crossing.
    pub certificate: bool,
    /// Final bisection bracket `(lo, hi)` with `r(lo) < 0 <= r(hi)`.
    pub bracket: Option<(f64, f64)>,
    /// `r` at the reported `delta_min`.
    pub r_at_delta_min: Option<f64>,
    /// Most negative grid value before the crossing.
    pub min_r: f64,
    /// Maximizing node weights at the upper end of the bracket.
    pub witness: Option<NodeWeightVector>,
}

impl GrowthCurve {
    /// `delta,r_delta` rows sorted by `delta`, 12 significant digits.
    pub fn to_csv(&self) -> String {
        let mut rows = self.samples.clone();
        rows.sort_by(|a, b| a.0.total_cmp(&b.0));
        let mut out = String::from("delta,r_delta\n");
        for (d, r) in rows {
            let _ = writeln!(out, "{},{}", sig12(d), sig12(r));
        }
        out
    }

    /// Grid points in order (the bisection samples are excluded).
    pub fn grid(&self, step: f64) -> impl Iterator<Item = &(f64, f64)> {
        self.samples
            .iter()
            .filter(move |(d, _)| ((d / step).round() * step - d).abs() < 1e-12)
    }
}

/// Formats with 12 significant digits.
pub fn sig12(v: f64) -> String {
    if v == 0.0 || !v.is_finite() {
        return format!("{v}");
    }
    let s = format!("{v:.11e}");
    // keep plain decimals for the usual range so the CSV is easy to read
    let exp = v.abs().log10().floor() as i32;
    if (-5..12).contains(&exp) {
        let decimals = (11 - exp).max(0) as usize;
        format!("{v:.decimals$}")
    } else {
        s
    }
}

/// Scans the grid for the first sign change and bisects it. Never fails on
/// a missing crossing; see [`delta_min`] for that.
pub fn scan(problem: &GrowthProblem, cfg: &SearchConfig) -> Result<GrowthCurve> {
    cfg.validate()?;
    let mut samples = Vec::new();
    let mut prev: Option<GrowthPoint> = None;
    let mut min_r = 0.0f64;
    let mut bracket = None;
    let steps = (cfg.upper / cfg.grid_step + 1e-9).floor() as usize;
    for k in 1..=steps {
        let d = k as f64 * cfg.grid_step;
        let pt = eval(problem, d, cfg, prev.as_ref())?;
        samples.push((d, pt.r));
        if pt.r >= 0.0 {
            if let Some(lo) = prev.take() {
                bracket = Some((lo, pt));
            }
            break;
        }
        min_r = min_r.min(pt.r);
        prev = Some(pt);
    }
    let certificate = min_r < -cfg.tol_neg;
    let Some((mut lo, mut hi)) = bracket else {
        return Ok(GrowthCurve {
            samples,
            delta_min: None,
            certificate,
            bracket: None,
            r_at_delta_min: None,
            min_r,
            witness: None,
        });
    };
    while hi.delta - lo.delta > cfg.bisect_tol {
        let mid = 0.5 * (lo.delta + hi.delta);
        let pt = eval(problem, mid, cfg, Some(&hi))?;
        samples.push((mid, pt.r));
        if pt.r >= 0.0 {
            hi = pt;
        } else {
            lo = pt;
        }
    }
    let mid = 0.5 * (lo.delta + hi.delta);
    let at = eval(problem, mid, cfg, Some(&hi))?;
    samples.push((mid, at.r));
    Ok(GrowthCurve {
        samples,
        delta_min: Some(mid),
        certificate,
        bracket: Some((lo.delta, hi.delta)),
        r_at_delta_min: Some(at.r),
        min_r,
        witness: Some(hi.weights),
    })
}

fn eval(
    problem: &GrowthProblem,
    d: f64,
    cfg: &SearchConfig,
    warm: Option<&GrowthPoint>,
) -> Result<GrowthPoint> {
    let pt = problem.growth_rate(d, &cfg.outer, warm.map(|w| &w.weights))?;
    if pt.r.is_nan() {
        return Err(Error::Solver {
            delta: d,
            reason: "growth rate evaluated to NaN".into(),
        });
    }
    Ok(pt)
}

/// `delta_min` with its negativity certificate; an error when `r` has no
/// certified sign change in the scanned range.
pub fn delta_min(problem: &GrowthProblem, cfg: &SearchConfig) -> Result<GrowthCurve> {
    let curve = scan(problem, cfg)?;
    if curve.delta_min.is_none() || !curve.certificate {
        return Err(Error::NoCrossing {
            upper: cfg.upper,
            step: cfg.grid_step,
        });
    }
    Ok(curve)
}
