//! Exact ensemble-average weight enumerators for small lift degrees.

use crate::error::{Error, Result};
use crate::protograph::Protograph;
use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;
use std::collections::{BTreeMap, HashMap};

/// Default cap on the number of node-weight assignments `prod (N+1)`.
pub const DEFAULT_GUARD_LIMIT: u128 = 20_000_000;

/// Binomial coefficient as a big integer.
pub fn binomial(n: usize, k: usize) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc *= BigUint::from(n - i);
        acc /= BigUint::from(i + 1);
    }
    acc
}

/// Number of `n x k` binary matrices with column sums `weights` whose rows
/// all have even weight (odd if `parity_flip`).
pub fn check_enum_exact(weights: &[usize], n: usize, parity_flip: bool) -> Result<BigUint> {
    if let Some(&w) = weights.iter().find(|&&w| w > n) {
        return Err(Error::InvalidArgument(format!(
            "column weight {w} exceeds lift degree {n}"
        )));
    }
    let mut memo = HashMap::new();
    Ok(CheckCounter {
        parity: parity_flip as usize,
        memo: &mut memo,
    }
    .count(n, canonical(weights)))
}

fn canonical(weights: &[usize]) -> Vec<usize> {
    let mut s: Vec<usize> = weights.iter().copied().filter(|&w| w > 0).collect();
    s.sort_unstable_by(|a, b| b.cmp(a));
    s
}

/// Row-by-row dynamic program. The number of completions only depends on the
/// multiset of remaining column sums, so states are kept sorted and columns
/// with equal remaining sums are decremented as a group.
struct CheckCounter<'a> {
    parity: usize,
    memo: &'a mut HashMap<(usize, Vec<usize>), BigUint>,
}

impl CheckCounter<'_> {
    fn count(&mut self, rows_left: usize, state: Vec<usize>) -> BigUint {
        if state.is_empty() {
            // every remaining row is all zero, which is even
            return if self.parity == 0 || rows_left == 0 {
                BigUint::one()
            } else {
                BigUint::zero()
            };
        }
        if rows_left == 0 || state[0] > rows_left {
            return BigUint::zero();
        }
        let key = (rows_left, state);
        if let Some(v) = self.memo.get(&key) {
            return v.clone();
        }
        let state = &key.1;
        let mut groups: Vec<(usize, usize)> = Vec::new();
        for &w in state {
            match groups.last_mut() {
                Some((v, c)) if *v == w => *c += 1,
                _ => groups.push((w, 1)),
            }
        }
        let mut total = BigUint::zero();
        let mut take = vec![0usize; groups.len()];
        loop {
            let chosen: usize = take.iter().sum();
            if chosen % 2 == self.parity {
                let mut next = Vec::with_capacity(state.len());
                let mut ways = BigUint::one();
                for (&(v, c), &j) in groups.iter().zip(&take) {
                    ways *= binomial(c, j);
                    next.extend(std::iter::repeat_n(v - 1, j));
                    next.extend(std::iter::repeat_n(v, c - j));
                }
                let next = canonical(&next);
                let sub = self.count(rows_left - 1, next);
                if !sub.is_zero() {
                    total += ways * sub;
                }
            }
            // odometer over per-group take counts
            let mut i = 0;
            loop {
                if i == groups.len() {
                    self.memo.insert(key.clone(), total.clone());
                    return total;
                }
                if take[i] < groups[i].1 {
                    take[i] += 1;
                    break;
                }
                take[i] = 0;
                i += 1;
            }
        }
    }
}

/// Ensemble-average number of codewords per transmitted weight, exact.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WeightSpectrum {
    pub lift_degree: usize,
    #[serde(serialize_with = "ser_rational_map")]
    pub entries: BTreeMap<usize, BigRational>,
}

fn ser_rational_map<S: serde::Serializer>(
    m: &BTreeMap<usize, BigRational>,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeMap;
    let mut map = s.serialize_map(Some(m.len()))?;
    for (k, v) in m {
        map.serialize_entry(&k.to_string(), &v.to_string())?;
    }
    map.end()
}

impl WeightSpectrum {
    pub fn get(&self, d: usize) -> BigRational {
        self.entries
            .get(&d)
            .cloned()
            .unwrap_or_else(BigRational::zero)
    }

    /// Sum over all weights (average code size).
    pub fn total(&self) -> BigRational {
        self.entries
            .values()
            .fold(BigRational::zero(), |a, b| a + b)
    }
}

/// `A_d = sum over node weights of prod_c A^c * prod_v C(N, d_v)^(1 - deg v)`,
/// bucketed by transmitted weight.
pub fn ensemble_enum_exact(p: &Protograph, n: usize, guard_limit: u128) -> Result<WeightSpectrum> {
    if n == 0 {
        return Err(Error::InvalidArgument(
            "lift degree must be positive".into(),
        ));
    }
    let n_v = p.n_v();
    let needed = (n as u128 + 1).checked_pow(n_v as u32).unwrap_or(u128::MAX);
    if needed > guard_limit {
        return Err(Error::GuardLimit {
            needed,
            limit: guard_limit,
        });
    }
    let sockets = p.check_sockets();
    let degrees = p.variable_degrees();
    let transmitted = p.transmitted();
    let binoms: Vec<BigUint> = (0..=n).map(|k| binomial(n, k)).collect();
    let mut check_memo: HashMap<Vec<usize>, BigUint> = HashMap::new();
    let mut dp_memo = HashMap::new();
    let mut entries: BTreeMap<usize, BigRational> = BTreeMap::new();

    let mut d = vec![0usize; n_v];
    loop {
        let mut numer = BigUint::one();
        for sock in &sockets {
            let w = canonical(&sock.iter().map(|&v| d[v]).collect::<Vec<_>>());
            let count = match check_memo.get(&w) {
                Some(c) => c.clone(),
                None => {
                    let c = CheckCounter {
                        parity: 0,
                        memo: &mut dp_memo,
                    }
                    .count(n, w.clone());
                    check_memo.insert(w, c.clone());
                    c
                }
            };
            numer *= count;
            if numer.is_zero() {
                break;
            }
        }
        if !numer.is_zero() {
            let mut denom = BigUint::one();
            for v in 0..n_v {
                let b = &binoms[d[v]];
                match degrees[v] {
                    0 => numer *= b,
                    deg => denom *= b.pow(deg - 1),
                }
            }
            let weight: usize = (0..n_v).filter(|&v| transmitted[v]).map(|v| d[v]).sum();
            let term = BigRational::new(numer.into(), denom.into());
            *entries.entry(weight).or_insert_with(BigRational::zero) += term;
        }
        let mut i = 0;
        loop {
            if i == n_v {
                return Ok(WeightSpectrum {
                    lift_degree: n,
                    entries,
                });
            }
            if d[i] < n {
                d[i] += 1;
                break;
            }
            d[i] = 0;
            i += 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::protograph::Protograph;
    use num_bigint::BigInt;

    /// Brute force: all 2^(N k) binary matrices.
    fn brute(weights: &[usize], n: usize, odd: bool) -> u64 {
        let k = weights.len();
        let mut count = 0;
        for bits in 0u64..(1 << (n * k)) {
            let cell = |r: usize, c: usize| bits >> (r * k + c) & 1 == 1;
            let cols_ok = (0..k).all(|c| (0..n).filter(|&r| cell(r, c)).count() == weights[c]);
            let rows_ok = (0..n).all(|r| ((0..k).filter(|&c| cell(r, c)).count() % 2 == 1) == odd);
            if cols_ok && rows_ok {
                count += 1;
            }
        }
        count
    }

    /// Character-sum identity: 2^-N sum_t (+-1)^t C(N,t) prod_i K_{w_i}(t).
    fn krawtchouk_count(weights: &[usize], n: usize, odd: bool) -> BigInt {
        let kraw = |w: usize, t: usize| -> BigInt {
            (0..=w.min(t))
                .map(|j| {
                    let term = BigInt::from(binomial(t, j)) * BigInt::from(binomial(n - t, w - j));
                    if j % 2 == 1 {
                        -term
                    } else {
                        term
                    }
                })
                .sum()
        };
        let mut total = BigInt::zero();
        for t in 0..=n {
            let mut term = BigInt::from(binomial(n, t));
            for &w in weights {
                term *= kraw(w, t);
            }
            if odd && t % 2 == 1 {
                total -= term;
            } else {
                total += term;
            }
        }
        total >> n
    }

    #[test]
    fn small_cases() {
        assert_eq!(
            check_enum_exact(&[1, 1], 2, false).unwrap(),
            BigUint::from(2u32)
        );
        assert_eq!(
            check_enum_exact(&[0, 0, 0], 5, false).unwrap(),
            BigUint::one()
        );
        assert_eq!(check_enum_exact(&[1], 3, false).unwrap(), BigUint::zero());
        assert_eq!(check_enum_exact(&[1], 3, true).unwrap(), BigUint::zero());
        assert_eq!(check_enum_exact(&[3], 3, true).unwrap(), BigUint::one());
        assert!(check_enum_exact(&[4], 3, false).is_err());
    }

    #[test]
    fn matches_brute_force() {
        for n in 1..=3 {
            for k in 1..=4 {
                let mut w = vec![0; k];
                loop {
                    for odd in [false, true] {
                        let got = check_enum_exact(&w, n, odd).unwrap();
                        assert_eq!(
                            got,
                            BigUint::from(brute(&w, n, odd)),
                            "w={w:?} n={n} odd={odd}"
                        );
                    }
                    let mut i = 0;
                    while i < k && w[i] == n {
                        w[i] = 0;
                        i += 1;
                    }
                    if i == k {
                        break;
                    }
                    w[i] += 1;
                }
            }
        }
    }

    #[test]
    fn matches_krawtchouk_identity() {
        for (w, n) in [
            (vec![3, 5, 7, 2, 8, 4], 16),
            (vec![8, 8, 8, 8, 8, 8], 16),
            (vec![1, 2, 3, 4], 8),
            (vec![5, 5], 9),
        ] {
            for odd in [false, true] {
                let got = check_enum_exact(&w, n, odd).unwrap();
                assert_eq!(BigInt::from(got), krawtchouk_count(&w, n, odd), "w={w:?}");
            }
        }
    }

    #[test]
    fn single_check_pair() {
        let p = Protograph::from_rows("pair", &[vec![1, 1]]).unwrap();
        let s = ensemble_enum_exact(&p, 2, DEFAULT_GUARD_LIMIT).unwrap();
        assert_eq!(s.get(0), BigRational::one());
        assert_eq!(s.get(2), BigRational::from_integer(2.into()));
        assert_eq!(s.get(4), BigRational::one());
        assert_eq!(s.get(1), BigRational::zero());
    }

    #[test]
    fn zero_weight_is_one() {
        let p = crate::protograph::regular_protograph(3, 6).unwrap();
        let s = ensemble_enum_exact(&p, 2, DEFAULT_GUARD_LIMIT).unwrap();
        assert_eq!(s.get(0), BigRational::one());
    }

    #[test]
    fn guard_limit_enforced() {
        let p = crate::protograph::regular_protograph(3, 6).unwrap();
        assert!(matches!(
            ensemble_enum_exact(&p, 4, 100),
            Err(Error::GuardLimit { .. })
        ));
    }
}
