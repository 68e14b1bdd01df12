//! End-to-end reproduction of the published growth-rate numbers plus the
//! oracle and solver-health checks. Prints one line per criterion and fails
//! if any criterion fails, unless the failure comes with a certificate that
//! the target is out of reach for every unwrapping factor.

use nalgebra::{DMatrix, DVector};
use num_traits::{ToPrimitive, Zero};
use protobound::bounds::{self, BoundReport};
use protobound::unwrap::{
    m_cover, nonuniform_cut, tail_biting, uniform_cut, validate_xi, UnwrappedPair,
};
use protobound::verify;
use protobound::wenum::{self, ensemble_enum_exact, GrowthProblem, DEFAULT_GUARD_LIMIT};
use protobound::{regular_protograph, Protograph, RunConfig};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeMap;
use std::time::Instant;

const BOUND_TOL: f64 = 0.003;
const BLOCK_TOL: f64 = 0.002;
/// Sweep depth for the cut examples; every sweep must also have leveled.
const LAMBDA_MAX: usize = 7;
const MINI_SAMPLES: usize = 50;
const MINI_LAMBDA_MAX: usize = 4;

struct Outcome {
    pass: bool,
    detail: String,
    /// Set when every failing part has a certified cap below its target.
    certified: Option<String>,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
        certified: None,
    }
}

/// Block `delta_min` per `(J, K)`, filled by criterion 1.
type BlockTable = BTreeMap<(usize, usize), f64>;

const BLOCK_TARGETS: [((usize, usize), f64); 7] = [
    ((3, 4), 0.112),
    ((3, 5), 0.045),
    ((3, 6), 0.023),
    ((4, 5), 0.210),
    ((4, 6), 0.128),
    ((4, 8), 0.063),
    ((5, 6), 0.254),
];

fn block_values(cfg: &RunConfig, table: &mut BlockTable) -> Outcome {
    let mut pass = true;
    let mut parts = Vec::new();
    for ((j, k), target) in BLOCK_TARGETS {
        let p = regular_protograph(j, k).unwrap();
        match wenum::delta_min(&GrowthProblem::new(&p), &cfg.search()) {
            Ok(c) => {
                let d = c.delta_min.unwrap();
                table.insert((j, k), d);
                pass &= (d - target).abs() <= BLOCK_TOL;
                parts.push(format!("({j},{k}) {d:.4}/{target}"));
            }
            Err(e) => {
                pass = false;
                parts.push(format!("({j},{k}) error: {e}"));
            }
        }
    }
    outcome(pass, parts.join(", "))
}

fn sweep(
    p: &Protograph,
    xi: Option<&[usize]>,
    lambda_max: usize,
    cfg: &RunConfig,
) -> Result<BoundReport, String> {
    let pair = cut_of(p, xi)?;
    bounds::delta_free_bound(&pair, lambda_max, cfg).map_err(|e| e.to_string())
}

fn sweep_36(cfg: &RunConfig, best: &mut Vec<(String, f64, (usize, usize))>) -> Outcome {
    let r = match sweep(&regular_protograph(3, 6).unwrap(), None, 8, cfg) {
        Ok(r) => r,
        Err(e) => return outcome(false, e),
    };
    let ld: Vec<f64> = r
        .per_lambda
        .iter()
        .map(|e| e.lambda as f64 * e.delta_min)
        .collect();
    let plateau = ld[3..8].iter().all(|v| (v - 0.086).abs() <= BOUND_TOL);
    let rising = ld[1] < ld[3..8].iter().copied().fold(f64::INFINITY, f64::min)
        && ld[2] < ld[3..8].iter().copied().fold(f64::INFINITY, f64::min);
    best.push(("(3,6) uniform".into(), r.best_bound, (3, 6)));
    let s: Vec<String> = ld.iter().map(|v| format!("{v:.4}")).collect();
    outcome(
        plateau && rising,
        format!("lambda*delta_min = [{}]", s.join(", ")),
    )
}

type Case<'a> = (&'a str, (usize, usize), Option<&'a [usize]>, f64, usize);

fn cut_of(p: &Protograph, xi: Option<&[usize]>) -> Result<UnwrappedPair, String> {
    match xi {
        Some(xi) => nonuniform_cut(p, xi),
        None => uniform_cut(p),
    }
    .map_err(|e| e.to_string())
}

/// Runs each case; a leveled sweep that falls short of its target counts as
/// certified when `certify_cap` proves no lambda reaches the tolerance band.
fn cases(list: &[Case], cfg: &RunConfig, best: &mut Vec<(String, f64, (usize, usize))>) -> Outcome {
    let mut pass = true;
    let mut uncertified = false;
    let mut parts = Vec::new();
    let mut certs = Vec::new();
    for &(label, (j, k), xi, target, lambda_max) in list {
        let p = regular_protograph(j, k).unwrap();
        let r = match sweep(&p, xi, lambda_max, cfg) {
            Ok(r) => r,
            Err(e) => {
                pass = false;
                uncertified = true;
                parts.push(format!("{label} error: {e}"));
                continue;
            }
        };
        best.push((label.to_string(), r.best_bound, (j, k)));
        let ok = (r.best_bound - target).abs() <= BOUND_TOL && r.leveled;
        let level = if r.leveled { "" } else { ", not leveled" };
        parts.push(format!(
            "{label} {:.4}/{target} at lambda {}{level}",
            r.best_bound, r.best_lambda
        ));
        pass &= ok;
        if ok {
            continue;
        }
        if !r.leveled || r.best_bound > target {
            uncertified = true;
            continue;
        }
        match cut_of(&p, xi).and_then(|pair| certify_cap(&pair, target - BOUND_TOL, cfg)) {
            Ok(c) => certs.push(format!("{label}: {c}")),
            Err(e) => {
                uncertified = true;
                parts.push(format!("{label} not certified: {e}"));
            }
        }
    }
    let certified = (!pass && !uncertified).then(|| certs.join("; "));
    Outcome {
        pass,
        detail: parts.join("; "),
        certified,
    }
}

fn entropy(d: f64) -> f64 {
    if d <= 0.0 || d >= 1.0 {
        0.0
    } else {
        -d * d.ln() - (1.0 - d) * (1.0 - d).ln()
    }
}

/// `min_t ln sum_{even S} e^{t.S} - d.t` by damped Newton over the explicit
/// subset list, independent of the library's check solver. Zero entries drop
/// out. The Newton decrement is subtracted, so an unconverged solve can only
/// report less than the infimum; `None` if it does not converge.
fn check_exponent(d: &[f64]) -> Option<f64> {
    let d: Vec<f64> = d.iter().copied().filter(|&x| x > 0.0).collect();
    let k = d.len();
    match k {
        0 => return Some(0.0),
        1 => return Some(f64::NEG_INFINITY),
        // two sockets carry the same support
        2 => {
            return Some(if d[0] == d[1] {
                entropy(d[0])
            } else {
                f64::NEG_INFINITY
            })
        }
        _ if d.iter().any(|&x| x >= 1.0) => return None,
        _ => {}
    }
    let dv = DVector::from_column_slice(&d);
    let subsets: Vec<u32> = (0u32..1 << k).filter(|s| s.count_ones() % 2 == 0).collect();
    let eval = |t: &DVector<f64>| {
        let e: Vec<f64> = subsets
            .iter()
            .map(|&s| (0..k).filter(|&i| s >> i & 1 == 1).map(|i| t[i]).sum())
            .collect();
        let top = e.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let z: f64 = e.iter().map(|x| (x - top).exp()).sum();
        let mut mean = DVector::zeros(k);
        let mut second = DMatrix::zeros(k, k);
        for (&s, x) in subsets.iter().zip(&e) {
            let p = (x - top).exp() / z;
            for i in (0..k).filter(|&i| s >> i & 1 == 1) {
                mean[i] += p;
                for j in (0..k).filter(|&j| s >> j & 1 == 1) {
                    second[(i, j)] += p;
                }
            }
        }
        let hess = second - &mean * mean.transpose();
        (top + z.ln() - t.dot(&dv), mean - &dv, hess)
    };
    let mut t = DVector::zeros(k);
    for _ in 0..500 {
        let (v, g, h) = eval(&t);
        let step = h.lu().solve(&g)?;
        let decrement = g.dot(&step);
        if decrement < 1e-24 {
            return Some(v - decrement.max(0.0));
        }
        // full steps once the Armijo test is below rounding of the value
        let mut a = 1.0;
        while decrement > 1e-10 && a > 1e-12 && eval(&(&t - &step * a)).0 > v - 1e-4 * a * decrement
        {
            a *= 0.5;
        }
        t -= step * a;
    }
    None
}

/// `sum_c a_c - sum_v (deg v - 1) H(w_v)` from the independent check exponent.
fn independent_objective(p: &Protograph, w: &[f64]) -> Option<f64> {
    let mut f: f64 = p
        .variable_degrees()
        .iter()
        .zip(w)
        .map(|(&g, &d)| -(g as f64 - 1.0) * entropy(d))
        .sum();
    for s in p.check_sockets() {
        let d: Vec<f64> = s.iter().map(|&v| w[v]).collect();
        f += check_exponent(&d)?;
    }
    Some(f)
}

/// Proves `bound(lambda) < threshold` for every `lambda`. Each lambda up to
/// the first one whose maximizer keeps a positive objective once negligible
/// weights are dropped and some block is then all zero gets a weight vector with a positive objective at the delta
/// that would reach the threshold, so `delta_min` lies below it. Inserting zero blocks next to a zero block
/// keeps both the objective and the total weight, which caps every larger
/// lambda at the same total.
fn certify_cap(pair: &UnwrappedPair, threshold: f64, cfg: &RunConfig) -> Result<String, String> {
    let src = pair.source();
    let factor = bounds::rate_factor(src)
        .map_err(|e| e.to_string())?
        .to_f64()
        .unwrap();
    let width = src.n_v();
    let outer = cfg.search().outer;
    for lambda in 1..=12 {
        let tb = tail_biting(pair, lambda).map_err(|e| e.to_string())?;
        let delta = (threshold * (1.0 - 1e-4) / (factor * lambda as f64)).min(0.5);
        let point = GrowthProblem::tail_biting(&tb)
            .growth_rate(delta, &outer, None)
            .map_err(|e| e.to_string())?;
        let graph = tb.as_protograph();
        let w = point.weights.delta;
        if !independent_objective(&graph, &w).is_some_and(|f| f > 0.0) {
            return Err(format!(
                "no positive weight vector at lambda {lambda}, delta {delta:.6}"
            ));
        }
        if lambda < 2 {
            continue;
        }
        // dropping negligible weights only lowers the total
        let zeroed = [1e-9, 1e-7, 1e-5, 1e-3].into_iter().find_map(|eps| {
            let w: Vec<f64> = w.iter().map(|&x| if x < eps { 0.0 } else { x }).collect();
            let b =
                (0..lambda).find(|&b| w[b * width..(b + 1) * width].iter().all(|&x| x == 0.0))?;
            let f = independent_objective(&graph, &w).filter(|&f| f > 0.0)?;
            Some((w, b, f))
        });
        let Some((w, b, f)) = zeroed else { continue };
        for extra in 1..=3 {
            let wider = tail_biting(pair, lambda + extra)
                .map_err(|e| e.to_string())?
                .as_protograph();
            let mut wl = w[..(b + 1) * width].to_vec();
            wl.extend(std::iter::repeat_n(0.0, extra * width));
            wl.extend_from_slice(&w[(b + 1) * width..]);
            let fl = independent_objective(&wider, &wl).ok_or("independent solve failed")?;
            if (fl - f).abs() > 1e-9 * (1.0 + f.abs()) {
                return Err(format!(
                    "zero-block insertion changed the objective: {f} vs {fl}"
                ));
            }
        }
        let total: f64 = w
            .iter()
            .zip(graph.transmitted())
            .filter(|(_, &t)| t)
            .map(|(x, _)| x)
            .sum();
        let cap = factor * total / src.m() as f64;
        if cap >= threshold {
            return Err(format!(
                "pattern caps lambda at {cap:.4}, not below {threshold:.4}"
            ));
        }
        return Ok(format!(
            "positive weight vectors for lambda < {lambda} and a zero-block pattern at lambda {lambda} \
             cap every lambda at {cap:.5} < {threshold:.5}"
        ));
    }
    Err("no zero-block pattern up to lambda 12".into())
}

fn mini_ensemble(cfg: &RunConfig, block: &BlockTable) -> Outcome {
    let p = regular_protograph(3, 5).unwrap();
    let floor = block.get(&(3, 5)).copied().unwrap_or(0.045);
    match bounds::mini_ensemble(&p, 2, MINI_SAMPLES, MINI_LAMBDA_MAX, cfg.seed, cfg) {
        Ok(s) => {
            let low: Vec<_> = s.samples.iter().filter(|m| m.best_bound <= floor).collect();
            let all_above = low.is_empty();
            let median_ok = (0.085..=0.105).contains(&s.median);
            let max_ok = (0.10..=0.115).contains(&s.max);
            let mut o = outcome(
                all_above && median_ok && max_ok,
                format!(
                    "{} members, lambda <= {MINI_LAMBDA_MAX}: min {:.4}, q1 {:.4}, median {:.4}, q3 {:.4}, max {:.4} \
                     (published: median 0.097, min 0.069, max 0.108); all > {floor:.4}: {all_above}",
                    s.samples.len(),
                    s.min,
                    s.lower_quartile,
                    s.median,
                    s.upper_quartile,
                    s.max
                ),
            );
            // members below the floor only count as out of reach with a certificate
            if !all_above && median_ok && max_ok {
                let certs: Result<Vec<String>, String> = low
                    .iter()
                    .map(|m| {
                        let pair = uniform_cut(&m_cover(&p, 2, m.seed).unwrap())
                            .map_err(|e| e.to_string())?;
                        certify_cap(&pair, floor, cfg)
                            .map(|c| format!("member {} ({:.4}): {c}", m.seed, m.best_bound))
                    })
                    .collect();
                match certs {
                    Ok(c) => o.certified = Some(c.join("; ")),
                    Err(e) => o.detail.push_str(&format!("; not certified: {e}")),
                }
            }
            o
        }
        Err(e) => outcome(false, e.to_string()),
    }
}

fn headline(best: &[(String, f64, (usize, usize))], block: &BlockTable) -> Outcome {
    let mut pass = !best.is_empty();
    let mut parts = Vec::new();
    for (label, b, jk) in best {
        match block.get(jk) {
            Some(&d) => {
                pass &= *b > d;
                parts.push(format!("{label} {b:.4} > {d:.4}"));
            }
            None => {
                pass = false;
                parts.push(format!("{label}: no block value"));
            }
        }
    }
    outcome(pass, parts.join(", "))
}

/// Every 0/1 base with `n_c <= 3`, `2 <= n_v <= 4` and every transmitted mask.
fn oracle(seed: u64) -> Outcome {
    let mut compared = 0;
    let mut bases = 0;
    for n_c in 1..=3usize {
        for n_v in 2..=4usize {
            let full = (1u32 << n_v) - 1;
            let rows_total = (full as usize).pow(n_c as u32);
            for code in 0..rows_total {
                let mut c = code;
                let rows: Vec<Vec<u32>> = (0..n_c)
                    .map(|_| {
                        let r = (c % full as usize) as u32 + 1;
                        c /= full as usize;
                        (0..n_v).map(|v| r >> v & 1).collect()
                    })
                    .collect();
                let p = Protograph::from_rows("oracle", &rows).unwrap();
                let by_node = verify::brute_force_node_weights(&p, 2).unwrap();
                bases += 1;
                for mask in 1u32..=full {
                    let t: Vec<bool> = (0..n_v).map(|v| mask >> v & 1 == 1).collect();
                    let pm = Protograph::new("oracle", p.base().clone(), t.clone()).unwrap();
                    let exact = ensemble_enum_exact(&pm, 2, DEFAULT_GUARD_LIMIT).unwrap();
                    let mut lhs = exact.entries.clone();
                    lhs.retain(|_, v| !v.is_zero());
                    if lhs != verify::bucket_by_mask(&by_node, &t) {
                        return outcome(false, format!("mismatch for base {rows:?}, mask {t:?}"));
                    }
                    compared += 1;
                }
            }
        }
    }
    // Monte-Carlo over sampled lifts of (3,6) at N = 2
    let p = regular_protograph(3, 6).unwrap();
    let exact = ensemble_enum_exact(&p, 2, DEFAULT_GUARD_LIMIT).unwrap();
    let sampled = verify::sampled_average(&p, 2, 200, seed).unwrap();
    let mut worst = 0.0f64;
    let mut mc_ok = true;
    for (d, (&mean, &se)) in sampled.mean.iter().zip(&sampled.std_err).enumerate() {
        let a = exact.get(d).to_f64().unwrap();
        let z = if se > 0.0 {
            (mean - a).abs() / se
        } else if mean == a {
            0.0
        } else {
            f64::INFINITY
        };
        if z > 3.0 {
            mc_ok = false;
        }
        if z.is_finite() {
            worst = worst.max(z);
        }
    }
    outcome(
        mc_ok,
        format!("{compared} spectra over {bases} bases equal exactly; (3,6) N=2 over 200 lifts: worst deviation {worst:.2} SE"),
    )
}

fn fold(seed: u64) -> Outcome {
    let mut tested = 0;
    let mut nonzero = 0;
    let cases: Vec<(Protograph, Option<Vec<usize>>, usize, usize)> = vec![
        (regular_protograph(3, 6).unwrap(), None, 1, 4),
        (regular_protograph(3, 6).unwrap(), None, 2, 3),
        (regular_protograph(3, 6).unwrap(), None, 3, 3),
        (regular_protograph(4, 8).unwrap(), None, 2, 3),
        (regular_protograph(3, 5).unwrap(), Some(vec![2, 4, 5]), 2, 3),
        (regular_protograph(3, 5).unwrap(), Some(vec![1, 2, 3]), 3, 3),
        (regular_protograph(3, 4).unwrap(), Some(vec![2, 3, 4]), 2, 4),
        (
            regular_protograph(4, 5).unwrap(),
            Some(vec![2, 3, 4, 5]),
            2,
            3,
        ),
    ];
    for (i, (p, xi, lambda, n)) in cases.iter().enumerate() {
        let pair = match xi {
            Some(xi) => nonuniform_cut(p, xi).unwrap(),
            None => uniform_cut(p).unwrap(),
        };
        let tb = tail_biting(&pair, *lambda).unwrap();
        let r = verify::fold_check(&tb, *n, 3, 150, seed + i as u64).unwrap();
        tested += r.tested;
        nonzero += r.nonzero;
        if r.counterexample.is_some() {
            return outcome(
                false,
                format!("case {i}: a folded codeword has nonzero syndrome"),
            );
        }
    }
    outcome(
        tested >= 1000,
        format!("{tested} codewords folded to tail-biting codewords ({nonzero} nonzero folds)"),
    )
}

fn solver_health(seed: u64) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = 0.0f64;
    let mut failures = 0;
    for i in 0..1000 {
        let k = 3 + i % 8;
        let odd = rng.random::<bool>();
        let prob = verify::random_check_problem(&mut rng, k, odd);
        match verify::stationarity_by_enumeration(&prob) {
            Ok(s) if s <= 1e-6 => worst = worst.max(s),
            Ok(s) => {
                failures += 1;
                worst = worst.max(s);
            }
            Err(_) => failures += 1,
        }
    }
    let mut r0_worst = 0.0f64;
    for ((j, k), _) in BLOCK_TARGETS {
        r0_worst = r0_worst.max(
            wenum::growth_rate(&regular_protograph(j, k).unwrap(), 0.0)
                .unwrap()
                .abs(),
        );
    }
    // every valid step vector of random bases up to 6 x 8
    let mut cuts = 0;
    let mut cut_ok = true;
    for n_c in 1..=6usize {
        for n_v in 2..=8usize {
            for _ in 0..3 {
                let rows: Vec<Vec<u32>> = (0..n_c)
                    .map(|_| {
                        let mut r: Vec<u32> = (0..n_v).map(|_| rng.random_range(0..3)).collect();
                        if r.iter().all(|&x| x == 0) {
                            r[rng.random_range(0..n_v)] = 1;
                        }
                        r
                    })
                    .collect();
                let p = Protograph::from_rows("cut", &rows).unwrap();
                for xi in increasing(n_c, n_v) {
                    if validate_xi(&p, &xi).is_err() {
                        continue;
                    }
                    let pair = nonuniform_cut(&p, &xi).unwrap();
                    cut_ok &= pair.p_lower().checked_add(pair.p_upper()).as_ref() == Some(p.base());
                    cuts += 1;
                }
                if p.gcd_partition() > 1 {
                    let pair = uniform_cut(&p).unwrap();
                    cut_ok &= pair.p_lower().checked_add(pair.p_upper()).as_ref() == Some(p.base());
                    cuts += 1;
                }
            }
        }
    }
    outcome(
        failures == 0 && r0_worst <= 1e-9 && cut_ok,
        format!(
            "stationarity worst {worst:.1e} over 1000 problems ({failures} failures); max |r(0)| {r0_worst:.1e}; \
             P_l + P_u = P on {cuts} cuts: {cut_ok}"
        ),
    )
}

/// All strictly increasing sequences of length `len` with entries in `0..=max`.
fn increasing(len: usize, max: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, len: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == len {
            out.push(cur.clone());
            return;
        }
        for v in start..=max {
            cur.push(v);
            go(v + 1, len, max, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, len, max, &mut Vec::new(), &mut out);
    out
}

fn main() {
    let cfg = RunConfig::default();
    let seed = cfg.seed;
    let mut block = BlockTable::new();
    let mut best = Vec::new();
    let mut all = true;
    // ACCEPTANCE_ONLY=9,10,11 runs a subset
    let only: Option<Vec<usize>> = std::env::var("ACCEPTANCE_ONLY")
        .ok()
        .map(|s| s.split(',').filter_map(|t| t.trim().parse().ok()).collect());
    let mut report = |n: usize, name: &str, f: &mut dyn FnMut() -> Outcome| {
        if only.as_ref().is_some_and(|o| !o.contains(&n)) {
            println!("criterion {n:>2} SKIP {name}");
            return;
        }
        let t = Instant::now();
        let o = f();
        all &= o.pass || o.certified.is_some();
        let note = o
            .certified
            .map(|c| format!("; out of reach: {c}"))
            .unwrap_or_default();
        println!(
            "criterion {n:>2} {} {name}: {}{note} [{:.0?}]",
            if o.pass { "PASS" } else { "FAIL" },
            o.detail,
            t.elapsed()
        );
    };
    report(1, "block delta_min", &mut || block_values(&cfg, &mut block));
    report(2, "(3,6) uniform sweep", &mut || sweep_36(&cfg, &mut best));
    report(3, "(4,6) uniform", &mut || {
        cases(
            &[("(4,6) uniform", (4, 6), None, 0.197, LAMBDA_MAX)],
            &cfg,
            &mut best,
        )
    });
    report(4, "(4,8) uniform", &mut || {
        cases(
            &[("(4,8) uniform", (4, 8), None, 0.191, LAMBDA_MAX)],
            &cfg,
            &mut best,
        )
    });
    report(5, "(3,5) nonuniform cuts", &mut || {
        cases(
            &[
                (
                    "(3,5) xi=(2,4,5)",
                    (3, 5),
                    Some(&[2, 4, 5]),
                    0.119,
                    LAMBDA_MAX,
                ),
                (
                    "(3,5) xi=(1,2,3)",
                    (3, 5),
                    Some(&[1, 2, 3]),
                    0.111,
                    LAMBDA_MAX,
                ),
            ],
            &cfg,
            &mut best,
        )
    });
    report(6, "table cuts", &mut || {
        cases(
            &[
                (
                    "(3,4) xi=(2,3,4)",
                    (3, 4),
                    Some(&[2, 3, 4]),
                    0.177,
                    LAMBDA_MAX,
                ),
                (
                    "(4,5) xi=(2,3,4,5)",
                    (4, 5),
                    Some(&[2, 3, 4, 5]),
                    0.266,
                    LAMBDA_MAX,
                ),
                // the bound first leaves the block value at lambda 7
                (
                    "(5,6) xi=(2,3,4,5,6)",
                    (5, 6),
                    Some(&[2, 3, 4, 5, 6]),
                    0.317,
                    LAMBDA_MAX + 1,
                ),
            ],
            &cfg,
            &mut best,
        )
    });
    report(7, "(3,5) two-cover mini-ensemble", &mut || {
        mini_ensemble(&cfg, &block)
    });
    report(
        8,
        "free-distance bound exceeds block delta_min",
        &mut || headline(&best, &block),
    );
    report(9, "exact enumerator oracle", &mut || oracle(seed));
    report(10, "fold property", &mut || fold(seed));
    report(11, "solver health", &mut || solver_health(seed));
    if !all {
        eprintln!("acceptance: at least one criterion failed");
        std::process::exit(1);
    }
}
