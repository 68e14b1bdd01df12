//! Protographs: small base matrices that define LDPC ensembles by lifting.

use crate::error::{Error, Result};
use crate::matrix::IntMatrix;
use num_integer::Integer;
use num_rational::Ratio;
use serde::{Deserialize, Serialize};

/// A protograph parity-check matrix.
///
/// Entry `(c, v)` is the number of parallel edges between check `c` and
/// variable `v`. Variables with `transmitted[v] == false` are punctured.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Protograph {
    name: String,
    base: IntMatrix,
    transmitted: Vec<bool>,
}

impl Protograph {
    pub fn new(name: impl Into<String>, base: IntMatrix, transmitted: Vec<bool>) -> Result<Self> {
        let p = Self {
            name: name.into(),
            base,
            transmitted,
        };
        p.validate()?;
        Ok(p)
    }

    /// All variables transmitted.
    pub fn from_base(name: impl Into<String>, base: IntMatrix) -> Result<Self> {
        let n_v = base.cols();
        Self::new(name, base, vec![true; n_v])
    }

    pub fn from_rows(name: impl Into<String>, rows: &[Vec<u32>]) -> Result<Self> {
        let base = IntMatrix::from_rows(rows).ok_or_else(|| {
            Error::InvalidProtograph("base rows must be non-empty and of equal length".into())
        })?;
        Self::from_base(name, base)
    }

    fn validate(&self) -> Result<()> {
        let (n_c, n_v) = (self.base.rows(), self.base.cols());
        if n_c < 1 {
            return Err(Error::InvalidProtograph(
                "need at least one check node".into(),
            ));
        }
        if n_v < 2 {
            return Err(Error::InvalidProtograph(
                "need at least two variable nodes".into(),
            ));
        }
        if self.transmitted.len() != n_v {
            return Err(Error::InvalidProtograph(format!(
                "transmitted mask has length {}, expected {n_v}",
                self.transmitted.len()
            )));
        }
        if let Some(r) = self.base.row_weights().iter().position(|&w| w == 0) {
            return Err(Error::InvalidProtograph(format!(
                "check row {r} has no edges"
            )));
        }
        if !self.transmitted.iter().any(|&t| t) {
            return Err(Error::InvalidProtograph(
                "no transmitted variable nodes".into(),
            ));
        }
        Ok(())
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn base(&self) -> &IntMatrix {
        &self.base
    }

    pub fn transmitted(&self) -> &[bool] {
        &self.transmitted
    }

    pub fn n_c(&self) -> usize {
        self.base.rows()
    }

    pub fn n_v(&self) -> usize {
        self.base.cols()
    }

    /// Number of transmitted variable nodes.
    pub fn m(&self) -> usize {
        self.transmitted.iter().filter(|&&t| t).count()
    }

    /// Variable node degrees, counting parallel edges.
    pub fn variable_degrees(&self) -> Vec<u32> {
        self.base.col_weights()
    }

    /// Check node degrees, counting parallel edges.
    pub fn check_degrees(&self) -> Vec<u32> {
        self.base.row_weights()
    }

    /// Design rate `(n_v - n_c) / n_v`.
    pub fn rate(&self) -> Ratio<i64> {
        let n_v = self.n_v() as i64;
        Ratio::new(n_v - self.n_c() as i64, n_v)
    }

    /// `gcd(n_c, n_v)`: the largest square block partition a uniform cut can use.
    pub fn gcd_partition(&self) -> usize {
        self.n_c().gcd(&self.n_v())
    }

    /// Returns a copy with a new label.
    pub fn renamed(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    /// Sockets of each check: the variable index of every edge, parallel edges repeated.
    pub fn check_sockets(&self) -> Vec<Vec<usize>> {
        (0..self.n_c())
            .map(|c| {
                self.base
                    .row(c)
                    .iter()
                    .enumerate()
                    .flat_map(|(v, &mult)| std::iter::repeat_n(v, mult as usize))
                    .collect()
            })
            .collect()
    }
}

/// The `J x K` all-ones protograph of the `(J,K)`-regular ensemble.
pub fn regular_protograph(j: usize, k: usize) -> Result<Protograph> {
    if j < 1 || j >= k {
        return Err(Error::InvalidRegular { j, k });
    }
    Protograph::from_base(format!("({j},{k})-regular"), IntMatrix::filled(j, k, 1))
}

/// Degree profile summary: `(degree, count)` pairs sorted by degree.
pub fn degree_histogram(degrees: &[u32]) -> Vec<(u32, usize)> {
    let mut hist: std::collections::BTreeMap<u32, usize> = Default::default();
    for &d in degrees {
        *hist.entry(d).or_default() += 1;
    }
    hist.into_iter().collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn regular_constructor() {
        let p = regular_protograph(3, 6).unwrap();
        assert_eq!((p.n_c(), p.n_v(), p.m()), (3, 6, 6));
        assert!(p.base().iter_nonzero().all(|(_, _, v)| v == 1));
        assert_eq!(p.rate(), Ratio::new(1, 2));

        let p = regular_protograph(1, 2).unwrap();
        assert_eq!(p.base().to_rows(), vec![vec![1, 1]]);
        assert_eq!(p.rate(), Ratio::new(1, 2));

        assert_eq!(regular_protograph(4, 6).unwrap().rate(), Ratio::new(1, 3));
        assert!(matches!(
            regular_protograph(3, 3),
            Err(Error::InvalidRegular { .. })
        ));
        assert!(regular_protograph(0, 3).is_err());
    }

    #[test]
    fn rates() {
        assert_eq!(regular_protograph(3, 5).unwrap().rate(), Ratio::new(2, 5));
        let square = Protograph::from_rows("sq", &[vec![1, 1], vec![1, 1]]).unwrap();
        assert_eq!(square.rate(), Ratio::new(0, 1));
        for k in 2..=12 {
            for j in 1..k {
                let p = regular_protograph(j, k).unwrap();
                assert_eq!(
                    p.rate(),
                    Ratio::from_integer(1) - Ratio::new(j as i64, k as i64)
                );
            }
        }
    }

    #[test]
    fn gcd() {
        assert_eq!(regular_protograph(3, 6).unwrap().gcd_partition(), 3);
        assert_eq!(regular_protograph(4, 6).unwrap().gcd_partition(), 2);
        assert_eq!(regular_protograph(3, 5).unwrap().gcd_partition(), 1);
    }

    #[test]
    fn validation() {
        assert!(Protograph::from_rows("x", &[vec![1]]).is_err());
        assert!(Protograph::from_rows("x", &[vec![1, 1], vec![0, 0]]).is_err());
        let base = IntMatrix::from_rows(&[vec![1, 1]]).unwrap();
        assert!(Protograph::new("x", base.clone(), vec![false, false]).is_err());
        assert!(Protograph::new("x", base.clone(), vec![true]).is_err());
        assert!(Protograph::new("x", base, vec![true, false]).is_ok());
    }

    #[test]
    fn sockets_repeat_parallel_edges() {
        let p = Protograph::from_rows("x", &[vec![2, 1, 0], vec![0, 1, 1]]).unwrap();
        assert_eq!(p.check_sockets(), vec![vec![0, 0, 1], vec![1, 2]]);
        assert_eq!(p.variable_degrees(), vec![2, 2, 1]);
    }
}
