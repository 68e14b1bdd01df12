//! Asymptotic growth rate `r(delta)` of a protograph ensemble.
//!
//! `r(delta) = (1/m) max F(w)` over node weights `w` with
//! `sum_{v transmitted} w_v = m delta`, where
//! `F(w) = sum_c a^c(w) - sum_v (deg v - 1) H(w_v)`.
//! `F` is not concave, so the maximum is taken over a deterministic list of
//! local searches.

use super::check::{entropy, solve_check, CheckEnumProblem};
use crate::error::{Error, Result};
use crate::protograph::Protograph;
use crate::unwrap::TailBitingGraph;
use nalgebra::{DMatrix, DVector, SymmetricEigen};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// Normalized node weights `d_v / N`, one per protograph variable.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NodeWeightVector {
    pub delta: Vec<f64>,
}

impl NodeWeightVector {
    pub fn new(delta: Vec<f64>) -> Result<Self> {
        if let Some(&d) = delta.iter().find(|d| !(0.0..=1.0).contains(*d)) {
            return Err(Error::DeltaOutOfRange(d));
        }
        Ok(Self { delta })
    }

    pub fn len(&self) -> usize {
        self.delta.len()
    }

    pub fn is_empty(&self) -> bool {
        self.delta.is_empty()
    }

    /// Rotates by `shift` positions (block-circulant symmetry of tail-biting graphs).
    pub fn rotated(&self, shift: usize) -> Self {
        let mut delta = self.delta.clone();
        if !delta.is_empty() {
            let s = shift % delta.len();
            delta.rotate_right(s);
        }
        Self { delta }
    }
}

/// Parameters of the outer local search.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct OuterConfig {
    /// Random starts per evaluation, in addition to the structured ones.
    pub random_starts: usize,
    pub seed: u64,
    pub max_iter: usize,
    /// Bound on the scaled projected gradient `|w_v dF/dw_v|`.
    pub tol: f64,
    /// Stop once the predicted gain of a Newton step, per transmitted
    /// variable, drops below this.
    pub value_tol: f64,
}

impl Default for OuterConfig {
    fn default() -> Self {
        Self {
            random_starts: 8,
            seed: 0x5eed,
            max_iter: 300,
            tol: 1e-9,
            value_tol: 1e-9,
        }
    }
}

#[derive(Clone, Debug)]
enum ReducedCheck {
    /// Two live sockets: forces equal weights and contributes `H(w)`.
    Tied(usize),
    /// Socket list in group indices.
    General(Vec<usize>),
}

/// Protograph preprocessed for repeated growth-rate evaluation.
///
/// Degree-one checks force their variable to zero (propagated by peeling),
/// and degree-two checks tie their variables into one group. The search
/// runs over group weights.
#[derive(Clone, Debug)]
pub struct GrowthProblem {
    name: String,
    n_v: usize,
    m: usize,
    group_of: Vec<Option<usize>>,
    group_trans: Vec<f64>,
    /// `sum (deg v - 1)` over the members of each group.
    group_deg: Vec<f64>,
    checks: Vec<ReducedCheck>,
    /// `(block width, number of blocks)` when the graph is block circulant.
    blocks: Option<(usize, usize)>,
}

impl GrowthProblem {
    pub fn new(p: &Protograph) -> Self {
        let n_v = p.n_v();
        let sockets = p.check_sockets();
        let mut forced = vec![false; n_v];
        loop {
            let mut changed = false;
            for s in &sockets {
                let live: Vec<usize> = s.iter().copied().filter(|&v| !forced[v]).collect();
                if live.len() == 1 {
                    forced[live[0]] = true;
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
        let mut parent: Vec<usize> = (0..n_v).collect();
        fn find(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        for s in &sockets {
            let live: Vec<usize> = s.iter().copied().filter(|&v| !forced[v]).collect();
            if live.len() == 2 {
                let (a, b) = (find(&mut parent, live[0]), find(&mut parent, live[1]));
                if a != b {
                    parent[a.max(b)] = a.min(b);
                }
            }
        }
        let mut group_of = vec![None; n_v];
        let mut root_group = vec![usize::MAX; n_v];
        let mut group_trans = Vec::new();
        let mut group_deg = Vec::new();
        let degrees = p.variable_degrees();
        for v in 0..n_v {
            if forced[v] {
                continue;
            }
            let r = find(&mut parent, v);
            if root_group[r] == usize::MAX {
                root_group[r] = group_trans.len();
                group_trans.push(0.0);
                group_deg.push(0.0);
            }
            let g = root_group[r];
            group_of[v] = Some(g);
            if p.transmitted()[v] {
                group_trans[g] += 1.0;
            }
            group_deg[g] += degrees[v] as f64 - 1.0;
        }
        let checks = sockets
            .iter()
            .filter_map(|s| {
                let live: Vec<usize> = s.iter().filter_map(|&v| group_of[v]).collect();
                match live.len() {
                    0 => None,
                    2 => Some(ReducedCheck::Tied(live[0])),
                    _ => Some(ReducedCheck::General(live)),
                }
            })
            .collect();
        Self {
            name: p.name().to_string(),
            n_v,
            m: p.m(),
            group_of,
            group_trans,
            group_deg,
            checks,
            blocks: None,
        }
    }

    /// Same as [`GrowthProblem::new`] on `H_tb`, with the block structure
    /// used for localized starting points.
    pub fn tail_biting(tb: &TailBitingGraph) -> Self {
        let mut g = Self::new(&tb.as_protograph());
        g.blocks = Some((tb.pair().source().n_v(), tb.lambda()));
        g
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn n_v(&self) -> usize {
        self.n_v
    }

    /// Number of transmitted variables.
    pub fn m(&self) -> usize {
        self.m
    }

    fn n_groups(&self) -> usize {
        self.group_trans.len()
    }

    fn expand(&self, x: &[f64]) -> NodeWeightVector {
        NodeWeightVector {
            delta: self
                .group_of
                .iter()
                .map(|g| g.map_or(0.0, |g| x[g]))
                .collect(),
        }
    }

    /// The objective `F(w)` in nats; `-inf` outside the feasible set.
    pub fn objective(&self, w: &NodeWeightVector) -> Result<f64> {
        if w.len() != self.n_v {
            return Err(Error::InvalidArgument(format!(
                "weight vector has {} entries, expected {}",
                w.len(),
                self.n_v
            )));
        }
        // forced variables must be zero and tied variables equal
        let mut x = vec![f64::NAN; self.n_groups()];
        for (v, g) in self.group_of.iter().enumerate() {
            let d = w.delta[v];
            if !(0.0..=1.0).contains(&d) {
                return Err(Error::DeltaOutOfRange(d));
            }
            match *g {
                None if d != 0.0 => return Ok(f64::NEG_INFINITY),
                None => {}
                Some(g) if x[g].is_nan() => x[g] = d,
                Some(g) if x[g] != d => return Ok(f64::NEG_INFINITY),
                Some(_) => {}
            }
        }
        let mut value = 0.0;
        for (g, &xg) in x.iter().enumerate() {
            value -= self.group_deg[g] * entropy(xg);
        }
        for c in &self.checks {
            match c {
                ReducedCheck::Tied(g) => value += entropy(x[*g]),
                ReducedCheck::General(s) => {
                    let deltas = s.iter().map(|&g| x[g]).collect();
                    let sol = solve_check(&CheckEnumProblem::new(deltas, false), None)?;
                    if !sol.converged {
                        return Err(Error::Solver {
                            delta: f64::NAN,
                            reason: "check-node solve did not converge".into(),
                        });
                    }
                    value += sol.value;
                }
            }
            if value == f64::NEG_INFINITY {
                return Ok(value);
            }
        }
        Ok(value)
    }

    /// Value, gradient and Hessian at an interior group point.
    fn eval(
        &self,
        x: &[f64],
        warm: &mut [Vec<f64>],
        derivs: bool,
    ) -> Option<(f64, DVector<f64>, DMatrix<f64>)> {
        let n = self.n_groups();
        let mut f = 0.0;
        let mut grad = DVector::zeros(if derivs { n } else { 0 });
        let mut hess = DMatrix::zeros(grad.len(), grad.len());
        for (g, &xg) in x.iter().enumerate() {
            let dg = self.group_deg[g];
            f -= dg * entropy(xg);
            if derivs {
                grad[g] -= dg * ((1.0 - xg) / xg).ln();
                hess[(g, g)] += dg / (xg * (1.0 - xg));
            }
        }
        for (ci, c) in self.checks.iter().enumerate() {
            match c {
                ReducedCheck::Tied(g) => {
                    let xg = x[*g];
                    f += entropy(xg);
                    if derivs {
                        grad[*g] += ((1.0 - xg) / xg).ln();
                        hess[(*g, *g)] -= 1.0 / (xg * (1.0 - xg));
                    }
                }
                ReducedCheck::General(s) => {
                    let deltas = s.iter().map(|&g| x[g]).collect();
                    let w = (!warm[ci].is_empty()).then(|| warm[ci].as_slice());
                    let sol = solve_check(&CheckEnumProblem::new(deltas, false), w).ok()?;
                    if !sol.is_feasible() || !sol.converged || sol.active.len() != s.len() {
                        return None;
                    }
                    f += sol.value;
                    warm[ci].clone_from(&sol.multipliers);
                    if derivs {
                        for (i, &gi) in s.iter().enumerate() {
                            grad[gi] -= sol.multipliers[i];
                            for (j, &gj) in s.iter().enumerate() {
                                hess[(gi, gj)] += sol.hessian[(i, j)];
                            }
                        }
                    }
                }
            }
        }
        f.is_finite().then_some((f, grad, hess))
    }

    /// Raises light sockets until every general check satisfies
    /// `max socket <= sum of the others` with some slack, then rescales to
    /// the transmitted total `target`.
    fn repair_and_scale(&self, mut x: Vec<f64>, target: f64) -> Option<Vec<f64>> {
        for _ in 0..200 {
            let mut changed = false;
            for c in &self.checks {
                let ReducedCheck::General(s) = c else {
                    continue;
                };
                let (imax, &gmax) = s
                    .iter()
                    .enumerate()
                    .max_by(|a, b| x[*a.1].total_cmp(&x[*b.1]))?;
                let others: f64 = s
                    .iter()
                    .enumerate()
                    .filter(|&(i, _)| i != imax)
                    .map(|(_, &g)| x[g])
                    .sum();
                let need = 1.25 * x[gmax];
                if others < need {
                    let scale = need / others.max(f64::MIN_POSITIVE);
                    for (i, &g) in s.iter().enumerate() {
                        if i != imax && g != gmax {
                            x[g] *= scale;
                        }
                    }
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
        let total: f64 = x.iter().zip(&self.group_trans).map(|(a, t)| a * t).sum();
        if !(total > 0.0) {
            return None;
        }
        let s = target / total;
        let y: Vec<f64> = x.iter().map(|v| v * s).collect();
        y.iter().all(|&v| v > 0.0 && v < 0.99).then_some(y)
    }

    /// Structured and random starting points, in a fixed order.
    fn starts(
        &self,
        target: f64,
        cfg: &OuterConfig,
        warm: Option<&NodeWeightVector>,
    ) -> Vec<Vec<f64>> {
        let n = self.n_groups();
        let mut raw: Vec<Vec<f64>> = vec![vec![1.0; n]];
        if let Some((width, count)) = self.blocks {
            // a window of `w` heavy blocks with tails decaying away from it
            for w in 1..count {
                let mut x = vec![0.0; n];
                for (v, g) in self.group_of.iter().enumerate() {
                    if let Some(g) = *g {
                        let b = v / width;
                        let dist = if b < w { 0 } else { (b - w + 1).min(count - b) };
                        x[g] = f64::max(x[g], 0.1f64.powi(dist as i32).max(1e-12));
                    }
                }
                raw.push(x);
            }
        }
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        for k in 0..cfg.random_starts {
            rng.set_stream(k as u64);
            raw.push((0..n).map(|_| (-6.0 * rng.random::<f64>()).exp()).collect());
        }
        if let Some(w) = warm {
            let mut x = vec![0.0; n];
            let mut ok = w.len() == self.n_v;
            if ok {
                for (v, g) in self.group_of.iter().enumerate() {
                    if let Some(g) = *g {
                        x[g] = w.delta[v];
                    }
                }
                ok = x.iter().all(|&v| v > 0.0);
            }
            if ok {
                raw.push(x);
            }
        }
        raw.into_iter()
            .filter_map(|x| self.repair_and_scale(x, target))
            .collect()
    }

    /// Projected, affinely scaled Newton ascent from `x` on the plane
    /// `sum_g t_g x_g = const`, with eigenvalue modification and a
    /// fraction-to-boundary rule.
    fn ascend(&self, mut x: Vec<f64>, cfg: &OuterConfig) -> Option<LocalMax> {
        let n = self.n_groups();
        let mut warm = vec![Vec::new(); self.checks.len()];
        let (mut f, mut grad, mut hess) = self.eval(&x, &mut warm, true)?;
        let mut iterations = 0;
        let mut stationarity;
        loop {
            let d: Vec<f64> = x.iter().map(|&v| v.min(1.0 - v)).collect();
            let dm = DMatrix::from_diagonal(&DVector::from_column_slice(&d));
            let gs = &dm * &grad;
            let hs = &dm * &hess * &dm;
            let a =
                DVector::from_iterator(n, self.group_trans.iter().zip(&d).map(|(t, di)| t * di));
            let z = tangent_basis(&a);
            let rg = z.transpose() * &gs;
            stationarity = rg.amax();
            if stationarity <= cfg.tol || iterations >= cfg.max_iter || z.ncols() == 0 {
                break;
            }
            iterations += 1;
            let rh = z.transpose() * &hs * &z;
            let rh = (&rh + rh.transpose()) * 0.5;
            let eig = SymmetricEigen::new(rh);
            let scale = eig.eigenvalues.amax().max(1e-300);
            let coeff = eig.eigenvectors.transpose() * &rg;
            let p_red = &eig.eigenvectors
                * DVector::from_iterator(
                    coeff.len(),
                    coeff
                        .iter()
                        .zip(eig.eigenvalues.iter())
                        .map(|(c, l)| c / l.abs().max(1e-10 * scale)),
                );
            let step: Vec<f64> = (&dm * (&z * &p_red)).iter().copied().collect();
            let slope = rg.dot(&p_red);
            if slope <= cfg.value_tol * self.m as f64 {
                break;
            }
            let mut t: f64 = 1.0;
            for (xi, si) in x.iter().zip(&step) {
                if *si < 0.0 {
                    t = t.min(0.99 * xi / -si);
                } else if *si > 0.0 {
                    t = t.min(0.99 * (1.0 - xi) / si);
                }
            }
            let mut accepted = None;
            for _ in 0..40 {
                let trial: Vec<f64> = x
                    .iter()
                    .zip(&step)
                    .map(|(a, s)| (a + t * s).max(1e-280))
                    .collect();
                if let Some((f2, _, _)) = self.eval(&trial, &mut warm.clone(), false) {
                    if f2 >= f + 1e-4 * t * slope {
                        accepted = Some(trial);
                        break;
                    }
                }
                t *= 0.5;
            }
            let Some(next) = accepted else { break };
            x = next;
            (f, grad, hess) = self.eval(&x, &mut warm, true)?;
        }
        Some(LocalMax {
            value: f,
            x,
            iterations,
            stationarity,
        })
    }

    /// `r(delta)` with the maximizing node weights.
    pub fn growth_rate(
        &self,
        delta: f64,
        cfg: &OuterConfig,
        warm: Option<&NodeWeightVector>,
    ) -> Result<GrowthPoint> {
        if !(0.0..=1.0).contains(&delta) || delta.is_nan() {
            return Err(Error::DeltaOutOfRange(delta));
        }
        let m = self.m as f64;
        if delta == 0.0 {
            return Ok(GrowthPoint {
                delta,
                r: 0.0,
                weights: NodeWeightVector {
                    delta: vec![0.0; self.n_v],
                },
                start: 0,
                iterations: 0,
                stationarity: 0.0,
            });
        }
        let target = delta * m;
        let starts = self.starts(target, cfg, warm);
        let results: Vec<Option<LocalMax>> = starts
            .into_par_iter()
            .map(|x| self.ascend(x, cfg))
            .collect();
        let mut best: Option<(usize, LocalMax)> = None;
        for (i, r) in results.into_iter().enumerate() {
            if let Some(r) = r {
                if best.as_ref().is_none_or(|(_, b)| r.value > b.value) {
                    best = Some((i, r));
                }
            }
        }
        match best {
            Some((start, b)) => Ok(GrowthPoint {
                delta,
                r: b.value / m,
                weights: self.expand(&b.x),
                start,
                iterations: b.iterations,
                stationarity: b.stationarity,
            }),
            None => Ok(GrowthPoint {
                delta,
                r: f64::NEG_INFINITY,
                weights: NodeWeightVector {
                    delta: vec![0.0; self.n_v],
                },
                start: 0,
                iterations: 0,
                stationarity: f64::NAN,
            }),
        }
    }
}

struct LocalMax {
    value: f64,
    x: Vec<f64>,
    iterations: usize,
    stationarity: f64,
}

/// Orthonormal basis of the complement of `a` (all of space when `a = 0`).
fn tangent_basis(a: &DVector<f64>) -> DMatrix<f64> {
    let n = a.len();
    let norm = a.norm();
    if norm == 0.0 {
        return DMatrix::identity(n, n);
    }
    // Householder reflector mapping e_1 to -sign(a_1) a / |a|
    let mut v = a / norm;
    let s = if v[0] >= 0.0 { 1.0 } else { -1.0 };
    v[0] += s;
    let vn = v.norm_squared();
    let q = DMatrix::identity(n, n) - (&v * v.transpose()) * (2.0 / vn);
    q.columns(1, n - 1).into_owned()
}

/// One evaluation of `r(delta)`.
#[derive(Clone, Debug, Serialize)]
pub struct GrowthPoint {
    pub delta: f64,
    /// Nats per transmitted bit; `-inf` when no feasible weights were found.
    pub r: f64,
    pub weights: NodeWeightVector,
    /// Index of the start that attained the maximum.
    pub start: usize,
    pub iterations: usize,
    /// Scaled projected gradient at the returned point.
    pub stationarity: f64,
}

/// `r(delta)` for a protograph with default search settings.
pub fn growth_rate(p: &Protograph, delta: f64) -> Result<f64> {
    Ok(GrowthProblem::new(p)
        .growth_rate(delta, &OuterConfig::default(), None)?
        .r)
}
