//! Copy-and-permute lifting of a protograph.

use crate::error::{Error, Result};
use crate::gf2::SparseBinMatrix;
use crate::protograph::Protograph;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const MAX_DISJOINT_ATTEMPTS: usize = 10_000;

/// One base edge and the permutation that lifts it.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LiftedEdge {
    pub check: usize,
    pub var: usize,
    /// Copy `j` of the check connects to copy `perm[j]` of the variable.
    pub perm: Vec<u32>,
}

/// An `N`-fold lift of a protograph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LiftedCode {
    lift_degree: usize,
    edges: Vec<LiftedEdge>,
    parity: SparseBinMatrix,
}

impl LiftedCode {
    pub fn lift_degree(&self) -> usize {
        self.lift_degree
    }

    /// Edge permutations in row-major order of the base, parallel edges adjacent.
    pub fn edges(&self) -> &[LiftedEdge] {
        &self.edges
    }

    pub fn edge_permutations(&self) -> impl Iterator<Item = &[u32]> {
        self.edges.iter().map(|e| e.perm.as_slice())
    }

    /// The `N n_c x N n_v` parity-check matrix; row `N c + j`, column `N v + i`.
    pub fn parity_matrix(&self) -> &SparseBinMatrix {
        &self.parity
    }

    pub fn block_length(&self) -> usize {
        self.parity.ncols()
    }
}

/// Deterministic random permutation of `0..n` for `(seed, stream)`.
///
/// The stream is the ChaCha stream id, so edge `e` can be generated without
/// drawing edges `0..e` first.
pub fn stream_permutation(seed: u64, stream: u64, n: usize) -> Vec<u32> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    let mut p: Vec<u32> = (0..n as u32).collect();
    p.shuffle(&mut rng);
    p
}

fn collides(a: &[u32], b: &[u32]) -> bool {
    a.iter().zip(b).any(|(x, y)| x == y)
}

/// Lifts `p` by `n`: every edge becomes an independent random `n x n`
/// permutation matrix drawn from `(seed, edge index)`.
///
/// Parallel edges of one base entry are redrawn (continuing the same stream)
/// until their permutation matrices are pairwise disjoint, so the lifted
/// matrix stays binary.
pub fn lift(p: &Protograph, n: usize, seed: u64) -> Result<LiftedCode> {
    if n == 0 {
        return Err(Error::InvalidArgument(
            "lift degree must be positive".into(),
        ));
    }
    let base = p.base();
    let mut edges = Vec::with_capacity(base.total() as usize);
    let mut parity = SparseBinMatrix::new(n * p.n_c(), n * p.n_v());
    for (edge_index, (c, v, mult)) in base.iter_nonzero().enumerate() {
        if mult as usize > n {
            return Err(Error::LiftTooSmall {
                row: c,
                col: v,
                entry: mult,
                lift_degree: n,
            });
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(edge_index as u64);
        let mut group: Vec<Vec<u32>> = Vec::with_capacity(mult as usize);
        for _ in 0..mult {
            let mut attempts = 0;
            let perm = loop {
                let mut cand: Vec<u32> = (0..n as u32).collect();
                cand.shuffle(&mut rng);
                if group.iter().all(|g| !collides(g, &cand)) {
                    break cand;
                }
                attempts += 1;
                if attempts >= MAX_DISJOINT_ATTEMPTS {
                    return Err(Error::LiftDisjointness {
                        row: c,
                        col: v,
                        entry: mult,
                        attempts,
                    });
                }
            };
            group.push(perm);
        }
        for perm in group {
            for (j, &i) in perm.iter().enumerate() {
                parity.insert(n * c + j, n * v + i as usize);
            }
            edges.push(LiftedEdge {
                check: c,
                var: v,
                perm,
            });
        }
    }
    Ok(LiftedCode {
        lift_degree: n,
        edges,
        parity,
    })
}
