//! Free-distance bounds from tail-biting unwrappings.
//!
//! A tail-biting code with unwrapping factor `lambda` has minimum distance
//! at most the free distance of the convolutional code, so
//! `delta_free >= R/(1-R) * lambda * delta_min(lambda)` with `delta_min`
//! measured on `H_tb` and `delta_free` relative to the encoding constraint
//! length.

use crate::config::RunConfig;
use crate::error::{Error, Result};
use crate::protograph::Protograph;
use crate::unwrap::{m_cover, nonuniform_cut, tail_biting, uniform_cut, CutWarning, UnwrappedPair};
use crate::wenum::crossing::sig12;
use crate::wenum::{delta_min, GrowthProblem};
use num_rational::Ratio;
use rayon::prelude::*;
use serde::Serialize;
use std::collections::HashSet;
use std::fmt::Write as _;

/// One point of a `lambda` sweep.
#[derive(Clone, Debug, Serialize)]
pub struct LambdaEntry {
    pub lambda: usize,
    pub delta_min: f64,
    pub bound: f64,
    /// Most negative grid value of `r` below the crossing.
    pub min_r: f64,
    pub r_at_delta_min: f64,
    /// Final bisection bracket.
    pub bracket: (f64, f64),
}

#[derive(Clone, Debug, Serialize)]
pub struct BoundReport {
    pub source: String,
    pub cut: String,
    /// `R` as a reduced fraction.
    pub rate: String,
    /// `R / (1 - R)`.
    pub rate_factor: f64,
    pub per_lambda: Vec<LambdaEntry>,
    pub best_bound: f64,
    pub best_lambda: usize,
    /// The last two bounds differ by less than `level_tol`.
    pub leveled: bool,
    pub level_tol: f64,
    /// `lambda * delta_min(lambda)` never decreased along the sweep
    /// (observed only, not a theorem).
    pub monotone: bool,
}

impl BoundReport {
    /// `lambda,delta_min,bound` rows, 12 significant digits.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("lambda,delta_min,bound\n");
        for e in &self.per_lambda {
            let _ = writeln!(
                out,
                "{},{},{}",
                e.lambda,
                sig12(e.delta_min),
                sig12(e.bound)
            );
        }
        out
    }
}

/// `(R / (1 - R))` for `R = (n_v - n_c) / n_v`, i.e. `(n_v - n_c) / n_c`.
pub fn rate_factor(p: &Protograph) -> Result<Ratio<i64>> {
    let r = p.rate();
    if *r.numer() <= 0 || r >= Ratio::from_integer(1) {
        return Err(Error::InvalidArgument(format!(
            "rate {r} is outside (0, 1)"
        )));
    }
    Ok(r / (Ratio::from_integer(1) - r))
}

fn to_f64(r: Ratio<i64>) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

/// Sweeps `lambda = 1..=lambda_max` over tail-biting wraps of `pair`.
pub fn delta_free_bound(
    pair: &UnwrappedPair,
    lambda_max: usize,
    cfg: &RunConfig,
) -> Result<BoundReport> {
    if lambda_max == 0 {
        return Err(Error::InvalidArgument("lambda_max must be positive".into()));
    }
    cfg.validate()?;
    if !cfg.allow_empty_lower_rows {
        if let Some(CutWarning::EmptyLowerRow { row }) = pair.warnings().first() {
            return Err(Error::InvalidCut(format!(
                "row {} of P_l is empty, so the leading syndrome-former block is rank deficient; \
                 set allow_empty_lower_rows to sweep it anyway",
                row + 1
            )));
        }
    }
    let src = pair.source();
    let factor = rate_factor(src)?;
    let search = cfg.search();
    let entries: Vec<Result<LambdaEntry>> = (1..=lambda_max)
        .into_par_iter()
        .map(|lambda| {
            let at = |e: Error| Error::AtLambda {
                lambda,
                source: Box::new(e),
            };
            let tb = tail_biting(pair, lambda).map_err(at)?;
            let curve = delta_min(&GrowthProblem::tail_biting(&tb), &search).map_err(at)?;
            let d = curve.delta_min.expect("delta_min returns a crossing");
            Ok(LambdaEntry {
                lambda,
                delta_min: d,
                bound: to_f64(factor) * lambda as f64 * d,
                min_r: curve.min_r,
                r_at_delta_min: curve.r_at_delta_min.unwrap_or(f64::NAN),
                bracket: curve.bracket.unwrap_or((d, d)),
            })
        })
        .collect();
    let per_lambda = entries.into_iter().collect::<Result<Vec<_>>>()?;
    Ok(summarize(
        src,
        pair.cut().describe(),
        factor,
        per_lambda,
        cfg.level_tol,
    ))
}

fn summarize(
    src: &Protograph,
    cut: String,
    factor: Ratio<i64>,
    per_lambda: Vec<LambdaEntry>,
    level_tol: f64,
) -> BoundReport {
    let (best_lambda, best_bound) = per_lambda.iter().fold((0, f64::NEG_INFINITY), |acc, e| {
        if e.bound > acc.1 {
            (e.lambda, e.bound)
        } else {
            acc
        }
    });
    let leveled = per_lambda.len() >= 2 && {
        let n = per_lambda.len();
        (per_lambda[n - 1].bound - per_lambda[n - 2].bound).abs() < level_tol
    };
    let monotone = per_lambda
        .windows(2)
        .all(|w| w[1].bound >= w[0].bound - 1e-9);
    BoundReport {
        source: src.name().to_string(),
        cut,
        rate: src.rate().to_string(),
        rate_factor: to_f64(factor),
        per_lambda,
        best_bound,
        best_lambda,
        leveled,
        level_tol,
        monotone,
    }
}

/// Nonuniform cut with steps `xi`, then the `lambda` sweep.
pub fn nonuniform_bound(
    p: &Protograph,
    xi: &[usize],
    lambda_max: usize,
    cfg: &RunConfig,
) -> Result<BoundReport> {
    delta_free_bound(&nonuniform_cut(p, xi)?, lambda_max, cfg)
}

/// Uniform cut, then the `lambda` sweep.
pub fn uniform_bound(p: &Protograph, lambda_max: usize, cfg: &RunConfig) -> Result<BoundReport> {
    delta_free_bound(&uniform_cut(p)?, lambda_max, cfg)
}

/// Best bound of one M-cover member.
#[derive(Clone, Debug, Serialize)]
pub struct MemberBound {
    pub seed: u64,
    pub best_bound: f64,
    pub best_lambda: usize,
}

/// Order statistics of member bounds. Quartiles interpolate linearly between
/// order statistics (`q = (n-1) p`).
#[derive(Clone, Debug, Serialize)]
pub struct MiniEnsembleStats {
    pub samples: Vec<MemberBound>,
    pub median: f64,
    pub lower_quartile: f64,
    pub upper_quartile: f64,
    pub min: f64,
    pub max: f64,
}

impl MiniEnsembleStats {
    pub fn from_samples(samples: Vec<MemberBound>) -> Result<Self> {
        if samples.is_empty() {
            return Err(Error::InvalidArgument("no samples".into()));
        }
        let mut v: Vec<f64> = samples.iter().map(|s| s.best_bound).collect();
        v.sort_by(f64::total_cmp);
        let q = |p: f64| {
            let pos = p * (v.len() - 1) as f64;
            let (lo, hi) = (pos.floor() as usize, pos.ceil() as usize);
            v[lo] + (v[hi] - v[lo]) * (pos - lo as f64)
        };
        Ok(Self {
            median: q(0.5),
            lower_quartile: q(0.25),
            upper_quartile: q(0.75),
            min: v[0],
            max: v[v.len() - 1],
            samples,
        })
    }

    /// `seed,best_bound,best_lambda` rows in draw order.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("seed,best_bound,best_lambda\n");
        for s in &self.samples {
            let _ = writeln!(out, "{},{},{}", s.seed, sig12(s.best_bound), s.best_lambda);
        }
        out
    }
}

/// Seed of the `k`-th candidate cover (splitmix64 of the base seed).
pub fn member_seed(seed: u64, k: u64) -> u64 {
    let mut z = seed.wrapping_add(0x9e37_79b9_7f4a_7c15u64.wrapping_mul(k + 1));
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Draws `num_samples` distinct M-covers of `p` (duplicate base matrices are
/// rejected), cuts each uniformly and sweeps `lambda`.
pub fn draw_members(
    p: &Protograph,
    m: usize,
    num_samples: usize,
    seed: u64,
) -> Result<Vec<(u64, Protograph)>> {
    if num_samples == 0 {
        return Err(Error::InvalidArgument(
            "num_samples must be positive".into(),
        ));
    }
    let g = num_integer::gcd(m * p.n_c(), m * p.n_v());
    if g < 2 {
        return Err(Error::NoUniformCut {
            n_c: m * p.n_c(),
            n_v: m * p.n_v(),
        });
    }
    let max_attempts = 100 * num_samples as u64 + 1000;
    let mut seen = HashSet::new();
    let mut out = Vec::with_capacity(num_samples);
    for k in 0..max_attempts {
        if out.len() == num_samples {
            break;
        }
        let s = member_seed(seed, k);
        let cover = m_cover(p, m, s)?;
        if seen.insert(cover.base().clone()) {
            out.push((s, cover));
        }
    }
    if out.len() < num_samples {
        return Err(Error::InsufficientMembers {
            requested: num_samples,
            found: out.len(),
        });
    }
    Ok(out)
}

pub fn mini_ensemble(
    p: &Protograph,
    m: usize,
    num_samples: usize,
    lambda_max: usize,
    seed: u64,
    cfg: &RunConfig,
) -> Result<MiniEnsembleStats> {
    let members = draw_members(p, m, num_samples, seed)?;
    let results: Vec<Result<MemberBound>> = members
        .par_iter()
        .map(|(s, cover)| {
            let report = uniform_bound(cover, lambda_max, cfg)?;
            Ok(MemberBound {
                seed: *s,
                best_bound: report.best_bound,
                best_lambda: report.best_lambda,
            })
        })
        .collect();
    MiniEnsembleStats::from_samples(results.into_iter().collect::<Result<Vec<_>>>()?)
}
