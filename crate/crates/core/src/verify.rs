//! Independent oracles: brute-force lifting averages, the fold property of
//! unwrapped tail-biting codes, and inner-solver stationarity checked by
//! direct enumeration.

use crate::error::{Error, Result};
use crate::gf2::{BitMatrix, SparseBinMatrix};
use crate::lift::lift;
use crate::protograph::Protograph;
use crate::unwrap::{lifted_unrolled_window, wrap_back, TailBitingGraph};
use crate::wenum::{solve_check, CheckEnumProblem};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use std::collections::BTreeMap;

/// Codeword counts per transmitted weight of one parity-check matrix.
pub fn weight_counts(h: &SparseBinMatrix, transmitted: &[bool]) -> Vec<u64> {
    let m = transmitted.iter().filter(|&&t| t).count();
    let mut counts = vec![0u64; m + 1];
    for_each_codeword(&h.to_dense(), |word| {
        counts[word
            .iter()
            .zip(transmitted)
            .filter(|(&w, &t)| w && t)
            .count()] += 1;
    });
    counts
}

/// Transmitted mask of an `N`-fold lift (copies of a variable are adjacent).
pub fn lifted_mask(p: &Protograph, n: usize) -> Vec<bool> {
    p.transmitted()
        .iter()
        .flat_map(|&t| std::iter::repeat_n(t, n))
        .collect()
}

/// Exact ensemble average over every assignment of an `N x N` permutation to
/// every base edge, bucketed by transmitted weight. Entries must be 0/1.
pub fn brute_force_average(p: &Protograph, n: usize) -> Result<BTreeMap<usize, BigRational>> {
    Ok(bucket_by_mask(
        &brute_force_node_weights(p, n)?,
        p.transmitted(),
    ))
}

/// Exact ensemble-average number of codewords for every node-weight vector
/// `(d_1, .., d_{n_v})`, over all permutation assignments. Entries must be 0/1.
pub fn brute_force_node_weights(
    p: &Protograph,
    n: usize,
) -> Result<BTreeMap<Vec<usize>, BigRational>> {
    if p.base().max_entry() > 1 {
        return Err(Error::InvalidArgument(
            "brute-force averaging needs a 0/1 base".into(),
        ));
    }
    let edges: Vec<(usize, usize)> = p.base().iter_nonzero().map(|(c, v, _)| (c, v)).collect();
    let perms = all_permutations(n);
    let total = (perms.len() as u128)
        .checked_pow(edges.len() as u32)
        .filter(|&t| t <= 1 << 22)
        .ok_or(Error::GuardLimit {
            needed: u128::MAX,
            limit: 1 << 22,
        })?;
    let mut sums: BTreeMap<Vec<usize>, u64> = BTreeMap::new();
    let mut choice = vec![0usize; edges.len()];
    for _ in 0..total {
        let mut h = BitMatrix::zeros(n * p.n_c(), n * p.n_v());
        for (&(c, v), &k) in edges.iter().zip(&choice) {
            for (j, &i) in perms[k].iter().enumerate() {
                h.set(n * c + j, n * v + i, true);
            }
        }
        for_each_codeword(&h, |word| {
            let key: Vec<usize> = word
                .chunks(n)
                .map(|b| b.iter().filter(|&&x| x).count())
                .collect();
            *sums.entry(key).or_default() += 1;
        });
        for slot in choice.iter_mut() {
            *slot += 1;
            if *slot < perms.len() {
                break;
            }
            *slot = 0;
        }
    }
    let denom = BigInt::from(total);
    Ok(sums
        .into_iter()
        .map(|(k, s)| (k, BigRational::new(BigInt::from(s), denom.clone())))
        .collect())
}

/// Sums node-weight averages into buckets of transmitted weight.
pub fn bucket_by_mask(
    by_node: &BTreeMap<Vec<usize>, BigRational>,
    transmitted: &[bool],
) -> BTreeMap<usize, BigRational> {
    let mut out: BTreeMap<usize, BigRational> = BTreeMap::new();
    for (key, a) in by_node {
        let d = key
            .iter()
            .zip(transmitted)
            .filter(|(_, &t)| t)
            .map(|(w, _)| w)
            .sum();
        *out.entry(d).or_insert_with(BigRational::zero) += a;
    }
    out.retain(|_, v| !v.is_zero());
    out
}

/// Calls `f` on every codeword of the null space of `h` (Gray-code order).
fn for_each_codeword(h: &BitMatrix, mut f: impl FnMut(&[bool])) {
    let basis = h.null_space();
    assert!(basis.len() < 40, "null space too large to enumerate");
    let mut word = vec![false; h.ncols()];
    f(&word);
    for i in 1u64..(1u64 << basis.len()) {
        let flip = i.trailing_zeros() as usize;
        for (w, &b) in word.iter_mut().zip(&basis[flip]) {
            *w ^= b;
        }
        f(&word);
    }
}

fn all_permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in all_permutations(n - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            out.push(q);
        }
    }
    out.sort();
    out
}

/// Per-weight sample mean and standard error over random lifts.
#[derive(Clone, Debug, Serialize)]
pub struct SampledSpectrum {
    pub samples: usize,
    pub mean: Vec<f64>,
    pub std_err: Vec<f64>,
}

pub fn sampled_average(
    p: &Protograph,
    n: usize,
    samples: usize,
    seed: u64,
) -> Result<SampledSpectrum> {
    let mask = lifted_mask(p, n);
    let m = mask.iter().filter(|&&t| t).count();
    let mut sum = vec![0.0; m + 1];
    let mut sq = vec![0.0; m + 1];
    for k in 0..samples {
        let code = lift(p, n, seed.wrapping_add(k as u64))?;
        for (d, c) in weight_counts(code.parity_matrix(), &mask)
            .into_iter()
            .enumerate()
        {
            sum[d] += c as f64;
            sq[d] += (c as f64) * (c as f64);
        }
    }
    let s = samples as f64;
    let mean: Vec<f64> = sum.iter().map(|x| x / s).collect();
    let std_err = sq
        .iter()
        .zip(&mean)
        .map(|(q, mu)| ((q / s - mu * mu).max(0.0) * s / (s - 1.0).max(1.0)).sqrt() / s.sqrt())
        .collect();
    Ok(SampledSpectrum {
        samples,
        mean,
        std_err,
    })
}

/// Outcome of folding random codewords of an unwrapped lifted code.
#[derive(Clone, Debug, Serialize)]
pub struct FoldReport {
    pub tested: usize,
    pub nonzero: usize,
    /// First failing codeword, if any.
    pub counterexample: Option<Vec<u8>>,
}

/// Draws `count` random codewords of the window of `repeats` unwrapped
/// copies of the lifted `H_tb` and checks that each folds onto a codeword of
/// the lifted tail-biting code.
pub fn fold_check(
    tb: &TailBitingGraph,
    n: usize,
    repeats: usize,
    count: usize,
    seed: u64,
) -> Result<FoldReport> {
    let code = lift(&tb.as_protograph(), n, seed)?;
    let window = lifted_unrolled_window(tb, &code, repeats)?;
    let basis = window.to_dense().null_space();
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xf01d);
    let span = code.parity_matrix().ncols();
    let mut report = FoldReport {
        tested: 0,
        nonzero: 0,
        counterexample: None,
    };
    for _ in 0..count {
        let mut word = vec![false; window.ncols()];
        for b in &basis {
            if rng.random::<bool>() {
                for (w, &x) in word.iter_mut().zip(b) {
                    *w ^= x;
                }
            }
        }
        debug_assert!(window.is_codeword(&word));
        let folded = wrap_back(&word, span)?;
        report.tested += 1;
        report.nonzero += folded.iter().any(|&b| b) as usize;
        if !code.parity_matrix().is_codeword(&folded) && report.counterexample.is_none() {
            report.counterexample = Some(word.iter().map(|&b| b as u8).collect());
        }
    }
    Ok(report)
}

/// Largest `|x_i d_i ln g - delta_i|` at the solver's multipliers, with the
/// expectation computed by summing over all valid-parity words.
pub fn stationarity_by_enumeration(prob: &CheckEnumProblem) -> Result<f64> {
    let sol = solve_check(prob, None)?;
    if !sol.is_feasible() {
        return Err(Error::Solver {
            delta: f64::NAN,
            reason: "infeasible check problem".into(),
        });
    }
    let k = prob.deltas.len();
    if k > 20 {
        return Err(Error::InvalidArgument(
            "too many sockets to enumerate".into(),
        ));
    }
    let u = &sol.multipliers;
    let want = prob.parity_flip as u32;
    let mut logs = Vec::new();
    let mut words = Vec::new();
    for z in 0u32..(1 << k) {
        if z.count_ones() % 2 != want {
            continue;
        }
        // infinite multipliers pin the socket to 0 or 1
        let mut s = 0.0;
        let mut ok = true;
        for (i, &ui) in u.iter().enumerate() {
            let bit = z >> i & 1 == 1;
            if ui == f64::NEG_INFINITY && bit || ui == f64::INFINITY && !bit {
                ok = false;
                break;
            }
            if bit && ui.is_finite() {
                s += ui;
            }
        }
        if ok {
            logs.push(s);
            words.push(z);
        }
    }
    let mx = logs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let weights: Vec<f64> = logs.iter().map(|l| (l - mx).exp()).collect();
    let total: f64 = weights.iter().sum();
    let mut worst = 0.0f64;
    for i in 0..k {
        let e: f64 = words
            .iter()
            .zip(&weights)
            .filter(|(z, _)| *z >> i & 1 == 1)
            .map(|(_, w)| w)
            .sum::<f64>()
            / total;
        worst = worst.max((e - prob.deltas[i]).abs());
    }
    Ok(worst)
}

/// A random interior point of the parity polytope: the mean of a random
/// distribution over valid-parity words mixed with the uniform one.
pub fn random_check_problem(rng: &mut ChaCha8Rng, k: usize, odd: bool) -> CheckEnumProblem {
    let words: Vec<u32> = (0u32..(1 << k))
        .filter(|z| (z.count_ones() % 2 == 1) == odd)
        .collect();
    let raw: Vec<f64> = words.iter().map(|_| rng.random::<f64>().powi(4)).collect();
    let mix = 0.05 + 0.5 * rng.random::<f64>();
    let total: f64 = raw.iter().sum();
    let deltas = (0..k)
        .map(|i| {
            let e: f64 = words
                .iter()
                .zip(&raw)
                .filter(|(z, _)| *z >> i & 1 == 1)
                .map(|(_, w)| w)
                .sum::<f64>()
                / total;
            (1.0 - mix) * e + mix * 0.5
        })
        .collect();
    CheckEnumProblem::new(deltas, odd)
}

/// `A_d` as exact rationals from a spectrum map, zero-filled up to `max_d`.
pub fn dense_spectrum(entries: &BTreeMap<usize, BigRational>, max_d: usize) -> Vec<BigRational> {
    (0..=max_d)
        .map(|d| entries.get(&d).cloned().unwrap_or_else(BigRational::zero))
        .collect()
}

/// `true` iff the all-zero word is counted exactly once.
pub fn has_unit_zero_term(entries: &BTreeMap<usize, BigRational>) -> bool {
    entries.get(&0).is_some_and(|a| *a >= BigRational::one())
}
