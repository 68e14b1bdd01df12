//! Cutting a protograph into `(P_l, P_u)` and the convolutional and
//! tail-biting structures built from the two parts.

use crate::error::{Error, Result};
use crate::gf2::{BitMatrix, SparseBinMatrix};
use crate::lift::{lift, LiftedCode};
use crate::matrix::IntMatrix;
use crate::protograph::Protograph;
use num_rational::Ratio;
use serde::{Deserialize, Serialize};

/// How a base matrix was split.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Cut {
    /// `y x y` block partition along the block diagonal, `y = gcd(n_c, n_v)`.
    Uniform { y: usize },
    /// Row `i` keeps its first `xi[i]` entries in `P_l`.
    Nonuniform { xi: Vec<usize> },
    /// `P_l = P`, `P_u = 0`.
    Trivial,
}

impl Cut {
    pub fn describe(&self) -> String {
        match self {
            Cut::Uniform { y } => format!("uniform(y={y})"),
            Cut::Nonuniform { xi } => {
                let s: Vec<String> = xi.iter().map(|v| v.to_string()).collect();
                format!("xi=({})", s.join(","))
            }
            Cut::Trivial => "trivial".into(),
        }
    }
}

/// Structural problems with a cut that do not make it invalid.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum CutWarning {
    /// Row `row` of `P_l` is all zero, so the leading syndrome-former block is rank deficient.
    EmptyLowerRow { row: usize },
}

/// The lower/upper split of a base matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UnwrappedPair {
    p_lower: IntMatrix,
    p_upper: IntMatrix,
    source: Protograph,
    cut: Cut,
}

impl UnwrappedPair {
    pub fn p_lower(&self) -> &IntMatrix {
        &self.p_lower
    }

    pub fn p_upper(&self) -> &IntMatrix {
        &self.p_upper
    }

    pub fn source(&self) -> &Protograph {
        &self.source
    }

    pub fn cut(&self) -> &Cut {
        &self.cut
    }

    pub fn warnings(&self) -> Vec<CutWarning> {
        self.p_lower
            .row_weights()
            .iter()
            .enumerate()
            .filter(|(_, &w)| w == 0)
            .map(|(row, _)| CutWarning::EmptyLowerRow { row })
            .collect()
    }

    /// True when each base entry went wholly to one side (always the case for
    /// the constructors in this module).
    fn owner_is_lower(&self, r: usize, c: usize) -> bool {
        self.p_lower.get(r, c) > 0
    }
}

/// Splits along the `y x y` block diagonal with `y = gcd(n_c, n_v)`.
pub fn uniform_cut(p: &Protograph) -> Result<UnwrappedPair> {
    let y = p.gcd_partition();
    if y < 2 {
        return Err(Error::NoUniformCut {
            n_c: p.n_c(),
            n_v: p.n_v(),
        });
    }
    let (bc, bv) = (p.n_c() / y, p.n_v() / y);
    let base = p.base();
    let mut lower = IntMatrix::zeros(p.n_c(), p.n_v());
    let mut upper = IntMatrix::zeros(p.n_c(), p.n_v());
    for (r, c, v) in base.iter_nonzero() {
        if c / bv <= r / bc {
            lower.set(r, c, v);
        } else {
            upper.set(r, c, v);
        }
    }
    Ok(UnwrappedPair {
        p_lower: lower,
        p_upper: upper,
        source: p.clone(),
        cut: Cut::Uniform { y },
    })
}

/// Checks the step vector against `0 <= xi_1 < xi_{n_c} <= n_v`, strictly increasing.
pub fn validate_xi(p: &Protograph, xi: &[usize]) -> Result<()> {
    if xi.len() != p.n_c() {
        return Err(Error::InvalidCut(format!(
            "xi has {} entries, protograph has {} checks",
            xi.len(),
            p.n_c()
        )));
    }
    if let Some(&last) = xi.last() {
        if last > p.n_v() {
            return Err(Error::InvalidCut(format!(
                "xi_{} = {last} exceeds n_v = {}",
                xi.len(),
                p.n_v()
            )));
        }
    }
    if let Some(i) = xi.windows(2).position(|w| w[0] >= w[1]) {
        return Err(Error::InvalidCut(format!(
            "xi must be strictly increasing, got xi_{} = {} >= xi_{} = {}",
            i + 1,
            xi[i],
            i + 2,
            xi[i + 1]
        )));
    }
    Ok(())
}

/// Row `i` of `P_l` keeps base entries `0..xi[i]`, the rest go to `P_u`.
pub fn nonuniform_cut(p: &Protograph, xi: &[usize]) -> Result<UnwrappedPair> {
    validate_xi(p, xi)?;
    let base = p.base();
    let mut lower = IntMatrix::zeros(p.n_c(), p.n_v());
    let mut upper = IntMatrix::zeros(p.n_c(), p.n_v());
    for (r, c, v) in base.iter_nonzero() {
        if c < xi[r] {
            lower.set(r, c, v);
        } else {
            upper.set(r, c, v);
        }
    }
    Ok(UnwrappedPair {
        p_lower: lower,
        p_upper: upper,
        source: p.clone(),
        cut: Cut::Nonuniform { xi: xi.to_vec() },
    })
}

/// `P_l = P`, `P_u = 0`: the memory-zero unwrapping.
pub fn trivial_cut(p: &Protograph) -> UnwrappedPair {
    UnwrappedPair {
        p_lower: p.base().clone(),
        p_upper: IntMatrix::zeros(p.n_c(), p.n_v()),
        source: p.clone(),
        cut: Cut::Trivial,
    }
}

/// An `M`-fold lift reinterpreted as a larger protograph, so that
/// `gcd(M n_c, M n_v) >= M` admits a uniform cut.
pub fn m_cover(p: &Protograph, m: usize, seed: u64) -> Result<Protograph> {
    if m == 0 {
        return Err(Error::InvalidArgument("M must be positive".into()));
    }
    if m == 1 {
        return Ok(p.clone());
    }
    let lifted = lift(p, m, seed)?;
    let transmitted = p
        .transmitted()
        .iter()
        .flat_map(|&t| std::iter::repeat_n(t, m))
        .collect();
    Protograph::new(
        format!("{} {m}-cover", p.name()),
        lifted.parity_matrix().to_int(),
        transmitted,
    )
}

/// `H_tb^(lambda)`: `lambda x lambda` block circulant with `P_l` on the
/// diagonal and `P_u` one block below it, wrapping into the top-right corner.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TailBitingGraph {
    lambda: usize,
    h_tb: IntMatrix,
    pair: UnwrappedPair,
}

impl TailBitingGraph {
    pub fn lambda(&self) -> usize {
        self.lambda
    }

    pub fn h_tb(&self) -> &IntMatrix {
        &self.h_tb
    }

    pub fn pair(&self) -> &UnwrappedPair {
        &self.pair
    }

    /// The wrapped matrix as a protograph; the transmitted mask repeats per block.
    pub fn as_protograph(&self) -> Protograph {
        let src = self.pair.source();
        let transmitted = (0..self.lambda)
            .flat_map(|_| src.transmitted().iter().copied())
            .collect();
        Protograph::new(
            format!("{} tb(lambda={})", src.name(), self.lambda),
            self.h_tb.clone(),
            transmitted,
        )
        .expect("wrapping preserves row weights and the transmitted set")
    }
}

pub fn tail_biting(pair: &UnwrappedPair, lambda: usize) -> Result<TailBitingGraph> {
    if lambda == 0 {
        return Err(Error::InvalidArgument(
            "unwrapping factor must be positive".into(),
        ));
    }
    let (n_c, n_v) = (pair.source.n_c(), pair.source.n_v());
    let mut h = IntMatrix::zeros(lambda * n_c, lambda * n_v);
    for t in 0..lambda {
        h.add_block(t * n_c, t * n_v, &pair.p_lower);
        let prev = (t + lambda - 1) % lambda;
        h.add_block(t * n_c, prev * n_v, &pair.p_upper);
    }
    Ok(TailBitingGraph {
        lambda,
        h_tb: h,
        pair: pair.clone(),
    })
}

/// Warnings about the syndrome-former blocks of an unrolled code.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum StructureWarning {
    /// `H_0` for time unit `unit` within a period is not full rank over GF(2).
    LeadingBlockRankDeficient {
        unit: usize,
        rank: usize,
        rows: usize,
    },
}

/// A window of the unterminated periodically time-varying code `H_cc` and its
/// convolutional parameters at protograph scale.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConvStructure {
    pub h_window: IntMatrix,
    pub periods: usize,
    /// Syndrome-former memory in time units of `c` symbols.
    pub m_s: usize,
    /// Decoding constraint length in symbols (band width of `H_cc`).
    pub nu_s: usize,
    /// Encoding constraint length in symbols; `None` for rate zero.
    pub nu_e: Option<Ratio<i64>>,
    /// Period in symbols.
    pub period_t: usize,
    /// Symbols per time unit.
    pub c: usize,
    /// Information symbols per time unit.
    pub b: usize,
    pub warnings: Vec<StructureWarning>,
}

impl ConvStructure {
    pub fn rate(&self) -> Ratio<i64> {
        Ratio::new(self.b as i64, self.c as i64)
    }
}

/// Builds `periods` block rows of `H_cc`: `P_l` on the block diagonal and
/// `P_u` on the block subdiagonal.
///
/// A uniform cut with `y` blocks has time units of `n_v / y` symbols and
/// memory `y - 1`; nonuniform and trivial cuts use the whole base as one time
/// unit. The decoding constraint length is `n_v` for every cut.
pub fn unroll(pair: &UnwrappedPair, periods: usize) -> Result<ConvStructure> {
    if periods == 0 {
        return Err(Error::InvalidArgument("periods must be positive".into()));
    }
    let src = pair.source();
    let (n_c, n_v) = (src.n_c(), src.n_v());
    let mut h = IntMatrix::zeros(periods * n_c, periods * n_v);
    for t in 0..periods {
        h.add_block(t * n_c, t * n_v, &pair.p_lower);
        if t > 0 {
            h.add_block(t * n_c, (t - 1) * n_v, &pair.p_upper);
        }
    }
    let (units, m_s) = match pair.cut {
        Cut::Uniform { y } => (y, y - 1),
        Cut::Nonuniform { .. } => (1, if pair.p_upper.is_zero() { 0 } else { 1 }),
        Cut::Trivial => (1, 0),
    };
    let c = n_v / units;
    let b = (n_v - n_c.min(n_v)) / units;
    let rate = src.rate();
    let nu_s = n_v;
    let nu_e = if *rate.numer() > 0 {
        Some((Ratio::from_integer(1) - rate) / rate * Ratio::from_integer(nu_s as i64))
    } else {
        None
    };
    let warnings = leading_block_warnings(pair, units);
    Ok(ConvStructure {
        h_window: h,
        periods,
        m_s,
        nu_s,
        nu_e,
        period_t: n_v,
        c,
        b,
        warnings,
    })
}

fn leading_block_warnings(pair: &UnwrappedPair, units: usize) -> Vec<StructureWarning> {
    let (n_c, n_v) = (pair.source.n_c(), pair.source.n_v());
    let (rc, cc) = (n_c / units, n_v / units);
    let mut out = Vec::new();
    for u in 0..units {
        let mut m = BitMatrix::zeros(rc, cc);
        for r in 0..rc {
            for c in 0..cc {
                m.set(r, c, pair.p_lower.get(u * rc + r, u * cc + c) % 2 == 1);
            }
        }
        let rank = m.rank();
        if rank < rc {
            out.push(StructureWarning::LeadingBlockRankDeficient {
                unit: u,
                rank,
                rows: rc,
            });
        }
    }
    out
}

/// Inserts zero columns so every step of the cut has width `xi_max`.
///
/// `xi_max = max(xi_1, xi_i - xi_{i-1})`; step `i` covers base columns
/// `xi_{i-1}..xi_i` and gets `xi_max - (xi_i - xi_{i-1})` zero columns
/// immediately to its left. Inserted columns are punctured. The result is for
/// encoder-format export only.
pub fn pad_zero_columns(p: &Protograph, xi: &[usize]) -> Result<Protograph> {
    validate_xi(p, xi)?;
    let widths: Vec<usize> = xi
        .iter()
        .scan(0, |prev, &x| {
            let w = x - *prev;
            *prev = x;
            Some(w)
        })
        .collect();
    let xi_max = widths.iter().copied().max().unwrap_or(0);
    let base = p.base();
    let mut cols: Vec<Option<usize>> = Vec::new();
    let mut start = 0;
    for (&x, &w) in xi.iter().zip(&widths) {
        cols.extend(std::iter::repeat_n(None, xi_max - w));
        cols.extend((start..x).map(Some));
        start = x;
    }
    cols.extend((start..p.n_v()).map(Some));
    let mut out = IntMatrix::zeros(p.n_c(), cols.len());
    let mut transmitted = Vec::with_capacity(cols.len());
    for (j, col) in cols.iter().enumerate() {
        match *col {
            Some(c) => {
                for r in 0..p.n_c() {
                    out.set(r, j, base.get(r, c));
                }
                transmitted.push(p.transmitted()[c]);
            }
            None => transmitted.push(false),
        }
    }
    Protograph::new(format!("{} padded", p.name()), out, transmitted)
}

/// Largest step width of a nonuniform cut.
pub fn xi_max(xi: &[usize]) -> usize {
    let mut prev = 0;
    xi.iter()
        .map(|&x| {
            let w = x.saturating_sub(prev);
            prev = x;
            w
        })
        .max()
        .unwrap_or(0)
}

/// Modulo-2 superposition of consecutive `window_bits`-long segments.
pub fn wrap_back(bits: &[bool], window_bits: usize) -> Result<Vec<bool>> {
    if window_bits == 0 || bits.is_empty() || !bits.len().is_multiple_of(window_bits) {
        return Err(Error::SegmentLength {
            len: bits.len(),
            window: window_bits,
        });
    }
    let mut out = vec![false; window_bits];
    for chunk in bits.chunks(window_bits) {
        for (o, &b) in out.iter_mut().zip(chunk) {
            *o ^= b;
        }
    }
    Ok(out)
}

/// A finite stretch of an unterminated codeword, a whole number of
/// tail-biting blocks long.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CodewordSegment {
    bits: Vec<bool>,
    window_bits: usize,
}

impl CodewordSegment {
    pub fn new(bits: Vec<bool>, window_bits: usize) -> Result<Self> {
        if window_bits == 0 || bits.is_empty() || !bits.len().is_multiple_of(window_bits) {
            return Err(Error::SegmentLength {
                len: bits.len(),
                window: window_bits,
            });
        }
        Ok(Self { bits, window_bits })
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    pub fn fold(&self) -> Vec<bool> {
        wrap_back(&self.bits, self.window_bits).expect("length validated at construction")
    }
}

/// Terminated window of the unterminated code obtained by unwrapping a lifted
/// tail-biting code and repeating it `repeats` times.
///
/// `lifted` must be a lift of `tb.as_protograph()`. The window has
/// `repeats * lambda` column blocks and one extra block row, so that its
/// codewords are exactly the codewords of the unterminated code supported on
/// the first `repeats * lambda` blocks.
pub fn lifted_unrolled_window(
    tb: &TailBitingGraph,
    lifted: &LiftedCode,
    repeats: usize,
) -> Result<SparseBinMatrix> {
    let src = tb.pair().source();
    let (n_c, n_v, lambda) = (src.n_c(), src.n_v(), tb.lambda());
    let n = lifted.lift_degree();
    if lifted.parity_matrix().nrows() != n * n_c * lambda
        || lifted.parity_matrix().ncols() != n * n_v * lambda
    {
        return Err(Error::InvalidArgument(
            "lifted code does not match the tail-biting graph".into(),
        ));
    }
    if repeats == 0 {
        return Err(Error::InvalidArgument("repeats must be positive".into()));
    }
    let blocks = repeats * lambda;
    let (rows_per, cols_per) = (n * n_c, n * n_v);
    let mut h = SparseBinMatrix::new((blocks + 1) * rows_per, blocks * cols_per);
    for e in lifted.edges() {
        let (t, i) = (e.check / n_c, e.check % n_c);
        let (s, j) = (e.var / n_v, e.var % n_v);
        let is_lower = if lambda == 1 {
            tb.pair().owner_is_lower(i, j)
        } else {
            s == t
        };
        for q in 0..=repeats {
            let row_block = t + q * lambda;
            if row_block > blocks {
                continue;
            }
            let col_block = if is_lower {
                Some(row_block)
            } else {
                row_block.checked_sub(1)
            };
            let Some(col_block) = col_block.filter(|&cb| cb < blocks) else {
                continue;
            };
            for (jj, &pi) in e.perm.iter().enumerate() {
                h.toggle(
                    row_block * rows_per + n * i + jj,
                    col_block * cols_per + n * j + pi as usize,
                );
            }
        }
    }
    Ok(h)
}
