//! Asymptotic check-node enumerator.
//!
//! For socket weights `delta` the exponent is
//! `a = inf_{x > 0} ln g(x) - sum_i delta_i ln x_i` with
//! `g(x) = (prod(1 + x_i) +- prod(1 - x_i)) / 2`. In `u = ln x` the objective
//! is convex; its gradient is the mean of the socket bits under the tilted
//! even-word distribution and its Hessian is their covariance.

use crate::error::{Error, Result};
use nalgebra::{DMatrix, DVector};

/// Tolerance on `|mean_i - delta_i| / min(delta_i, 1 - delta_i)`.
pub const INNER_TOL: f64 = 1e-12;
const INNER_MAX_ITER: usize = 200;
/// Accepted when the line search stalls before `INNER_TOL` is met.
const LOOSE_TOL: f64 = 1e-8;

/// Socket weights of one check and the parity every row must have.
#[derive(Clone, Debug, PartialEq)]
pub struct CheckEnumProblem {
    pub deltas: Vec<f64>,
    /// Odd row parity instead of even.
    pub parity_flip: bool,
}

impl CheckEnumProblem {
    pub fn new(deltas: Vec<f64>, parity_flip: bool) -> Self {
        Self {
            deltas,
            parity_flip,
        }
    }
}

/// Result of the inner minimisation.
#[derive(Clone, Debug)]
pub struct CheckSolution {
    /// Exponent in nats; `-inf` when no configuration has these weights.
    pub value: f64,
    /// `ln x_i` per socket at the minimiser (`-inf` for `delta_i = 0`, `+inf` for `delta_i = 1`).
    pub multipliers: Vec<f64>,
    /// Sockets left after removing `delta_i in {0, 1}`.
    pub active: Vec<usize>,
    /// Hessian of the exponent with respect to the active `delta`s.
    pub hessian: DMatrix<f64>,
    /// `max_i |x_i d_i ln g - delta_i|` on the reduced problem.
    pub residual: f64,
    pub iterations: usize,
    /// False when Newton stopped short of the tolerance; `value` is then an
    /// overestimate and must not be used.
    pub converged: bool,
}

impl CheckSolution {
    pub fn is_feasible(&self) -> bool {
        self.value > f64::NEG_INFINITY
    }

    fn infeasible(k: usize) -> Self {
        Self {
            value: f64::NEG_INFINITY,
            multipliers: vec![f64::NAN; k],
            active: Vec::new(),
            hessian: DMatrix::zeros(0, 0),
            residual: 0.0,
            iterations: 0,
            converged: true,
        }
    }
}

/// Natural-log binary entropy.
pub fn entropy(d: f64) -> f64 {
    if d <= 0.0 || d >= 1.0 {
        0.0
    } else {
        -d * d.ln() - (1.0 - d) * (1.0 - d).ln()
    }
}

#[inline]
fn softplus(u: f64) -> f64 {
    u.max(0.0) + (-u.abs()).exp().ln_1p()
}

/// `(p, 1 - p)` for `p = 1 / (1 + e^-u)`, without cancellation.
#[inline]
pub(crate) fn sigmoid(u: f64) -> (f64, f64) {
    if u >= 0.0 {
        let e = (-u).exp();
        (1.0 / (1.0 + e), e / (1.0 + e))
    } else {
        let e = u.exp();
        (e / (1.0 + e), 1.0 / (1.0 + e))
    }
}

#[inline]
pub(crate) fn logit(d: f64) -> f64 {
    d.ln() - (-d).ln_1p()
}

/// Value, mean and covariance of `phi(u) = ln g(e^u)`.
pub(crate) struct PhiEval {
    pub phi: f64,
    pub mean: Vec<f64>,
    pub cov: DMatrix<f64>,
}

/// `sign = +1` for even rows, `-1` for odd. With `p = sigmoid(u)` and
/// `rho_S = prod_{j not in S} (1 - 2 p_j)`:
/// `g = prod(1+x)/2 * (1 + sign rho)`,
/// `E[z_i] = p_i (1 - sign rho_i) / (1 + sign rho)`,
/// `E[z_i z_j] = p_i p_j (1 + sign rho_ij) / (1 + sign rho)`.
/// Products are carried as (sign, log magnitude) so that `1 - rho` keeps full
/// relative precision when every `p` is tiny.
pub(crate) fn eval_phi(u: &[f64], sign: f64, want_cov: bool) -> PhiEval {
    let k = u.len();
    let pq: Vec<(f64, f64)> = u.iter().map(|&v| sigmoid(v)).collect();
    let log_abs: Vec<f64> = pq.iter().map(|&(p, q)| (-2.0 * p.min(q)).ln_1p()).collect();
    let negative: Vec<bool> = pq.iter().map(|&(p, q)| p > q).collect();
    // 1 + s * prod over j outside `skip`, for s = +-1
    let one_plus = |s: f64, skip: &[usize]| -> f64 {
        let mut l = 0.0;
        let mut sg = s;
        for j in (0..k).filter(|j| !skip.contains(j)) {
            l += log_abs[j];
            if negative[j] {
                sg = -sg;
            }
        }
        if sg > 0.0 {
            1.0 + l.exp()
        } else {
            -l.exp_m1()
        }
    };
    let d = one_plus(sign, &[]);
    let phi = u.iter().map(|&v| softplus(v)).sum::<f64>() - std::f64::consts::LN_2 + d.ln();
    let mean: Vec<f64> = (0..k)
        .map(|i| pq[i].0 * one_plus(-sign, &[i]) / d)
        .collect();
    let n = if want_cov { k } else { 0 };
    let mut cov = DMatrix::zeros(n, n);
    if want_cov {
        for i in 0..k {
            cov[(i, i)] = mean[i] * (1.0 - mean[i]);
            for j in i + 1..k {
                let v = pq[i].0 * pq[j].0 * one_plus(sign, &[i, j]) / d - mean[i] * mean[j];
                cov[(i, j)] = v;
                cov[(j, i)] = v;
            }
        }
    }
    PhiEval { phi, mean, cov }
}

/// Slack of the most violated parity-polytope facet, minus one: the weights
/// lie in the interior of the polytope iff this is positive. `want_odd`
/// selects the odd-row polytope. Evaluated as
/// `sum_{j not in S} d_j - sum_{j in S} d_j + |S| - 1` so that small weights
/// keep their relative precision.
pub(crate) fn polytope_slack(deltas: &[f64], want_odd: bool) -> f64 {
    let mut in_set: Vec<bool> = deltas.iter().map(|&d| d > 0.5).collect();
    let ones = in_set.iter().filter(|&&b| b).count();
    // facets are indexed by sets of the parity the rows must not have
    let forbidden = if want_odd { 0 } else { 1 };
    if ones % 2 != forbidden {
        let flip = (0..deltas.len()).min_by(|&i, &j| {
            (1.0 - 2.0 * deltas[i])
                .abs()
                .total_cmp(&(1.0 - 2.0 * deltas[j]).abs())
        });
        match flip {
            Some(i) => in_set[i] = !in_set[i],
            None => return -1.0,
        }
    }
    let size = in_set.iter().filter(|&&b| b).count() as f64;
    let signed: f64 = deltas
        .iter()
        .zip(&in_set)
        .map(|(&d, &b)| if b { -d } else { d })
        .sum();
    signed + (size - 1.0)
}

/// Closed form for a reduced check with two sockets.
fn two_socket(deltas: &[f64], odd: bool) -> Option<f64> {
    let (a, b) = (deltas[0], deltas[1]);
    let tol = 1e-9 * a.max(b).max(1e-300);
    if odd {
        ((a + b - 1.0).abs() <= tol).then(|| entropy(a))
    } else {
        ((a - b).abs() <= tol).then(|| entropy(0.5 * (a + b)))
    }
}

/// Solves the inner problem, optionally warm-started from the multipliers of
/// a nearby problem with the same socket count.
pub fn solve_check(prob: &CheckEnumProblem, warm: Option<&[f64]>) -> Result<CheckSolution> {
    let k = prob.deltas.len();
    if let Some(&d) = prob.deltas.iter().find(|d| !(0.0..=1.0).contains(*d)) {
        return Err(Error::DeltaOutOfRange(d));
    }
    let mut odd = prob.parity_flip;
    let mut active = Vec::with_capacity(k);
    let mut multipliers = vec![0.0; k];
    for (i, &d) in prob.deltas.iter().enumerate() {
        if d == 0.0 {
            multipliers[i] = f64::NEG_INFINITY;
        } else if d == 1.0 {
            multipliers[i] = f64::INFINITY;
            odd = !odd;
        } else {
            active.push(i);
        }
    }
    let deltas: Vec<f64> = active.iter().map(|&i| prob.deltas[i]).collect();
    let ka = deltas.len();
    match ka {
        0 => {
            return Ok(if odd {
                CheckSolution::infeasible(k)
            } else {
                CheckSolution {
                    value: 0.0,
                    multipliers,
                    active,
                    hessian: DMatrix::zeros(0, 0),
                    residual: 0.0,
                    iterations: 0,
                    converged: true,
                }
            })
        }
        1 => return Ok(CheckSolution::infeasible(k)),
        2 => {
            let Some(value) = two_socket(&deltas, odd) else {
                return Ok(CheckSolution::infeasible(k));
            };
            let y = if odd {
                deltas[0]
            } else {
                0.5 * (deltas[0] + deltas[1])
            };
            // only the sum (even) or difference (odd) of the multipliers is determined
            let l = logit(y);
            let (u0, u1) = if odd { (0.0, -l) } else { (0.5 * l, 0.5 * l) };
            multipliers[active[0]] = u0;
            multipliers[active[1]] = u1;
            let c = -1.0 / (4.0 * y * (1.0 - y));
            let hessian = if odd {
                DMatrix::from_row_slice(2, 2, &[c, -c, -c, c])
            } else {
                DMatrix::from_element(2, 2, c)
            };
            return Ok(CheckSolution {
                value,
                multipliers,
                active,
                hessian,
                residual: 0.0,
                iterations: 0,
                converged: true,
            });
        }
        _ => {}
    }
    // on the boundary the minimiser sits at infinity; treated as infeasible
    if polytope_slack(&deltas, odd) <= 0.0 {
        return Ok(CheckSolution::infeasible(k));
    }

    let sign = if odd { -1.0 } else { 1.0 };
    let cold: Vec<f64> = deltas.iter().map(|&d| logit(d)).collect();
    let mut run = match warm {
        Some(w) if w.len() == k && active.iter().all(|&i| w[i].is_finite()) => {
            let hot = newton(active.iter().map(|&i| w[i]).collect(), &deltas, sign);
            if hot.converged {
                hot
            } else {
                newton(cold, &deltas, sign)
            }
        }
        _ => newton(cold, &deltas, sign),
    };
    for (slot, &i) in active.iter().enumerate() {
        multipliers[i] = run.u[slot];
    }
    let hessian = match run.ev.cov.clone().cholesky() {
        Some(ch) => -ch.inverse(),
        None => -std::mem::replace(&mut run.ev.cov, DMatrix::zeros(0, 0))
            .pseudo_inverse(1e-300)
            .unwrap_or_else(|_| DMatrix::zeros(ka, ka)),
    };
    Ok(CheckSolution {
        value: run.f,
        multipliers,
        active,
        hessian,
        residual: run.residual,
        iterations: run.iterations,
        converged: run.converged,
    })
}

struct NewtonRun {
    u: Vec<f64>,
    ev: PhiEval,
    f: f64,
    residual: f64,
    iterations: usize,
    converged: bool,
}

/// Damped Newton on the convex function `phi(u) - delta . u`.
fn newton(mut u: Vec<f64>, deltas: &[f64], sign: f64) -> NewtonRun {
    let objective =
        |e: &PhiEval, u: &[f64]| e.phi - deltas.iter().zip(u).map(|(d, v)| d * v).sum::<f64>();
    let mut ev = eval_phi(&u, sign, true);
    let mut f = objective(&ev, &u);
    let mut iterations = 0;
    let mut residual;
    let mut converged = false;
    loop {
        let grad: Vec<f64> = ev.mean.iter().zip(deltas).map(|(m, d)| m - d).collect();
        residual = grad.iter().fold(0.0f64, |a, g| a.max(g.abs()));
        // relative to the distance from the box, so tiny weights are resolved too
        let scaled = grad
            .iter()
            .zip(deltas)
            .fold(0.0f64, |a, (g, d)| a.max(g.abs() / d.min(1.0 - d)));
        if scaled <= INNER_TOL {
            converged = true;
            break;
        }
        if iterations >= INNER_MAX_ITER {
            break;
        }
        iterations += 1;
        let step = newton_direction(&ev.cov, &grad);
        let slope: f64 = grad.iter().zip(&step).map(|(g, s)| g * s).sum();
        if -slope <= 1e-14 * (1.0 + f.abs()) {
            // decrease below rounding of f: the full Newton step is safe and the
            // line search could not tell it apart from zero
            u.iter_mut().zip(&step).for_each(|(a, s)| *a += s);
            ev = eval_phi(&u, sign, true);
            f = objective(&ev, &u);
            continue;
        }
        let mut t = 1.0;
        let mut accepted = false;
        while t > 1e-16 {
            let trial: Vec<f64> = u.iter().zip(&step).map(|(a, s)| a + t * s).collect();
            let e2 = eval_phi(&trial, sign, false);
            let f2 = objective(&e2, &trial);
            if f2.is_finite() && f2 <= f + 1e-4 * t * slope {
                u = trial;
                accepted = true;
                break;
            }
            t *= 0.5;
        }
        if !accepted {
            // stalled within rounding of the optimum
            converged = scaled <= LOOSE_TOL;
            break;
        }
        ev = eval_phi(&u, sign, true);
        f = objective(&ev, &u);
    }
    NewtonRun {
        u,
        ev,
        f,
        residual,
        iterations,
        converged,
    }
}

fn newton_direction(cov: &DMatrix<f64>, grad: &[f64]) -> Vec<f64> {
    let g = DVector::from_column_slice(grad);
    let k = grad.len();
    let scale = (0..k)
        .map(|i| cov[(i, i)].abs())
        .fold(0.0f64, f64::max)
        .max(1e-300);
    let mut ridge = 0.0;
    for _ in 0..12 {
        let m = cov + DMatrix::identity(k, k) * ridge;
        if let Some(ch) = m.cholesky() {
            return (-ch.solve(&g)).as_slice().to_vec();
        }
        ridge = if ridge == 0.0 {
            1e-14 * scale
        } else {
            ridge * 100.0
        };
    }
    g.iter().map(|v| -v).collect()
}

/// The asymptotic check exponent `a^c` in nats (`-inf` if infeasible).
pub fn check_enum_asymptotic(prob: &CheckEnumProblem) -> Result<f64> {
    Ok(solve_check(prob, None)?.value)
}
