//! GF(2) ranks of group developments over `G = GF(2)^m`.
//!
//! The development of `S ⊆ G` has one row per `g ∈ G`, the indicator of
//! `S + g`. Three interchangeable engines compute its rank:
//!
//! * [`RankMethod::Streaming`] generates every translate and feeds it to the
//!   incremental rank engine. Reference path; cost grows as `4^m`.
//! * [`RankMethod::Derivatives`] works on the algebraic normal form `F` of the
//!   indicator. Translating by a unit vector `e_i` adds the partial derivative
//!   `∂F/∂z_i`, so the span of all translates is the span of all iterated
//!   partial derivatives, built by closing `{F}` under the `m` derivatives.
//! * [`RankMethod::Split`] handles indicators whose ANF has degree <= 1 in
//!   the upper variables (`F = P(a) + Σ_j b_j Q_j(a)`). In ANF coordinates the
//!   development is `[[H_P, Y], [Yᵀ, 0]]` with `Y = [H_Q1 … H_Qn]`, so its
//!   rank is `2 rank(Y) + rank(Kᵀ H_P K)` with `K` spanning the kernel of
//!   `Yᵀ`. Everything happens in dimension `2^(m/2)` instead of `2^m`.
//!
//! [`RankMethod::Auto`] picks `Split` when it applies, else `Derivatives`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bitmatrix::{get_bit, set_bit, words_for, BitMatrix, CapExceeded, RankEngine};

#[derive(Copy, Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RankMethod {
    #[default]
    Auto,
    Streaming,
    Derivatives,
    Split,
}

impl std::str::FromStr for RankMethod {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "auto" => Ok(RankMethod::Auto),
            "streaming" => Ok(RankMethod::Streaming),
            "derivatives" => Ok(RankMethod::Derivatives),
            "split" => Ok(RankMethod::Split),
            _ => Err(format!("unknown rank method {s:?}")),
        }
    }
}

/// A subset of `GF(2)^m` as a bitset over all `2^m` points, with the lower
/// `split` coordinates designated as the `a` part and the rest as `b`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointSet {
    m: u32,
    split: u32,
    bits: Vec<u64>,
}

impl PointSet {
    pub fn new(m: u32, split: u32) -> Self {
        assert!(split <= m && m <= 32);
        PointSet { m, split, bits: vec![0; words_for(1usize << m)] }
    }

    pub fn insert(&mut self, p: usize) {
        set_bit(&mut self.bits, p);
    }

    pub fn contains(&self, p: usize) -> bool {
        get_bit(&self.bits, p)
    }

    pub fn len(&self) -> usize {
        self.bits.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.iter().all(|&w| w == 0)
    }

    pub fn dim(&self) -> u32 {
        self.m
    }

    pub fn points(&self) -> impl Iterator<Item = usize> + '_ {
        iter_ones(&self.bits)
    }

    /// ANF coefficients of the indicator function.
    pub fn anf(&self) -> Vec<u64> {
        let mut a = self.bits.clone();
        mobius(&mut a, self.m);
        a
    }
}

pub(crate) fn iter_ones(words: &[u64]) -> impl Iterator<Item = usize> + '_ {
    words.iter().enumerate().flat_map(|(i, &w)| {
        let mut w = w;
        std::iter::from_fn(move || {
            if w == 0 {
                return None;
            }
            let b = w.trailing_zeros() as usize;
            w &= w - 1;
            Some(i * 64 + b)
        })
    })
}

/// Positions whose bit `i` is clear, for `i < 6`.
const LOW_MASKS: [u64; 6] = [
    0x5555_5555_5555_5555,
    0x3333_3333_3333_3333,
    0x0f0f_0f0f_0f0f_0f0f,
    0x00ff_00ff_00ff_00ff,
    0x0000_ffff_0000_ffff,
    0x0000_0000_ffff_ffff,
];

/// In-place binary Möbius transform of a bitset over `2^m` points.
pub fn mobius(bits: &mut [u64], m: u32) {
    for i in 0..m.min(6) {
        let sh = 1u32 << i;
        for w in bits.iter_mut() {
            *w ^= (*w & LOW_MASKS[i as usize]) << sh;
        }
    }
    for i in 6..m {
        let h = 1usize << (i - 6);
        for block in bits.chunks_mut(2 * h) {
            let (lo, hi) = block.split_at_mut(h);
            for (x, y) in lo.iter().zip(hi.iter_mut()) {
                *y ^= *x;
            }
        }
    }
}

/// `∂/∂z_i` of an ANF coefficient vector over `2^m` monomials: the
/// coefficient of `z^T` becomes that of `z^(T ∪ {i})` for `i ∉ T`.
pub fn anf_derivative(v: &[u64], i: u32, m: u32) -> Vec<u64> {
    let mut out = vec![0u64; v.len()];
    if i < 6 {
        let sh = 1u32 << i;
        let hi = !LOW_MASKS[i as usize];
        let valid = if m < 6 { (1u64 << (1u32 << m)) - 1 } else { u64::MAX };
        for (o, &w) in out.iter_mut().zip(v) {
            *o = ((w & hi) >> sh) & valid;
        }
    } else {
        let h = 1usize << (i - 6);
        for (ob, vb) in out.chunks_mut(2 * h).zip(v.chunks(2 * h)) {
            ob[..h].copy_from_slice(&vb[h..]);
        }
    }
    out
}

const FRONTIER_CHUNK: usize = 64;

/// Closes `generators` under all `m` partial derivatives; returns the
/// engine holding a basis of the resulting space.
pub fn derivative_closure(
    generators: Vec<Vec<u64>>,
    m: u32,
    memory_cap: Option<usize>,
) -> Result<RankEngine, CapExceeded> {
    let cols = 1usize << m;
    let mut eng = RankEngine::new(cols).with_memory_cap(memory_cap);
    let mut frontier: Vec<Vec<u64>> = Vec::new();
    let start = eng.rank();
    eng.try_insert_batch(generators)?;
    frontier.extend(eng.pivots()[start..].iter().cloned());
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for chunk in frontier.chunks(FRONTIER_CHUNK) {
            let cands: Vec<Vec<u64>> = chunk
                .par_iter()
                .flat_map_iter(|v| (0..m).map(move |i| anf_derivative(v, i, m)))
                .filter(|d| d.iter().any(|&w| w != 0))
                .collect();
            let before = eng.rank();
            eng.try_insert_batch(cands)?;
            next.extend(eng.pivots()[before..].iter().cloned());
        }
        frontier = next;
    }
    Ok(eng)
}

/// Rank by streaming every translate `S + g` through the rank engine.
pub fn streaming_rank(set: &PointSet, memory_cap: Option<usize>) -> Result<usize, CapExceeded> {
    let size = 1usize << set.m;
    let points: Vec<usize> = set.points().collect();
    let stride = words_for(size);
    let mut eng = RankEngine::new(size).with_memory_cap(memory_cap);
    const BATCH: usize = 256;
    for start in (0..size).step_by(BATCH) {
        let rows: Vec<Vec<u64>> = (start..(start + BATCH).min(size))
            .into_par_iter()
            .map(|g| {
                let mut row = vec![0u64; stride];
                for &p in &points {
                    set_bit(&mut row, p ^ g);
                }
                row
            })
            .collect();
        eng.try_insert_batch(rows)?;
        if eng.rank() == size {
            break;
        }
    }
    Ok(eng.rank())
}

/// Rank via the derivative closure of the indicator's ANF.
pub fn derivative_rank(set: &PointSet, memory_cap: Option<usize>) -> Result<usize, CapExceeded> {
    let anf = set.anf();
    if anf.iter().all(|&w| w == 0) {
        return Ok(0);
    }
    Ok(derivative_closure(vec![anf], set.m, memory_cap)?.rank())
}

/// Splits an ANF into `P` and the `Q_j` when it is affine in the upper
/// variables; `None` otherwise.
pub fn split_affine(set: &PointSet) -> Option<(Vec<u64>, Vec<Vec<u64>>)> {
    let (na, nb) = (set.split, set.m - set.split);
    let anf = set.anf();
    let a_size = 1usize << na;
    let aw = words_for(a_size);
    let mut p = vec![0u64; aw];
    let mut q = vec![vec![0u64; aw]; nb as usize];
    for t in iter_ones(&anf) {
        let alpha = t & (a_size - 1);
        let beta = t >> na;
        match beta.count_ones() {
            0 => set_bit(&mut p, alpha),
            1 => set_bit(&mut q[beta.trailing_zeros() as usize], alpha),
            _ => return None,
        }
    }
    Some((p, q))
}

/// `H_X` as a dense matrix: row `α` holds the ANF of `∂_α X`,
/// i.e. entry `(α, α')` is `X̂[α ∪ α']` when `α ∩ α' = ∅`.
fn derivative_table(x: &[u64], na: u32) -> BitMatrix {
    let size = 1usize << na;
    let full = size - 1;
    let mut h = BitMatrix::zeros(size, size);
    for alpha in 0..size {
        let comp = full & !alpha;
        let row = h.row_mut(alpha);
        let mut sub = comp;
        loop {
            if get_bit(x, alpha | sub) {
                set_bit(row, sub);
            }
            if sub == 0 {
                break;
            }
            sub = (sub - 1) & comp;
        }
    }
    h
}

fn dot(a: &[u64], b: &[u64]) -> bool {
    a.iter().zip(b).map(|(x, y)| (x & y).count_ones()).sum::<u32>() & 1 == 1
}

/// Rank for indicators affine in the upper variables; `None` if not affine.
pub fn split_rank(set: &PointSet, memory_cap: Option<usize>) -> Option<Result<usize, CapExceeded>> {
    let (p, q) = split_affine(set)?;
    Some(split_rank_parts(&p, q, set.split, memory_cap))
}

fn split_rank_parts(p: &[u64], q: Vec<Vec<u64>>, na: u32, memory_cap: Option<usize>) -> Result<usize, CapExceeded> {
    let size = 1usize << na;
    let nonzero_q: Vec<Vec<u64>> = q.into_iter().filter(|v| v.iter().any(|&w| w != 0)).collect();
    let y_span =
        if nonzero_q.is_empty() { RankEngine::new(size) } else { derivative_closure(nonzero_q, na, memory_cap)? };
    let rank_y = y_span.rank();
    if rank_y == size {
        return Ok(2 * rank_y);
    }
    let mut basis = BitMatrix::zeros(rank_y, size);
    for (i, r) in y_span.pivots().iter().enumerate() {
        basis.row_mut(i).copy_from_slice(r);
    }
    let kernel = basis.kernel_basis();
    let hp = derivative_table(p, na);
    // H_P is symmetric, so H_P k is the XOR of the rows selected by k.
    let images: Vec<Vec<u64>> = kernel
        .par_iter()
        .map(|k| {
            let mut y = vec![0u64; words_for(size)];
            for a in iter_ones(k) {
                for (d, s) in y.iter_mut().zip(hp.row(a)) {
                    *d ^= *s;
                }
            }
            y
        })
        .collect();
    let d = kernel.len();
    let gram: Vec<Vec<u64>> = kernel
        .par_iter()
        .map(|ki| {
            let mut row = vec![0u64; words_for(d)];
            for (j, yj) in images.iter().enumerate() {
                if dot(ki, yj) {
                    set_bit(&mut row, j);
                }
            }
            row
        })
        .collect();
    let mut eng = RankEngine::new(d).with_memory_cap(memory_cap);
    eng.try_insert_batch(gram)?;
    Ok(2 * rank_y + eng.rank())
}

/// Development rank with the chosen engine.
pub fn development_rank(set: &PointSet, method: RankMethod, memory_cap: Option<usize>) -> Result<usize, CapExceeded> {
    match method {
        RankMethod::Streaming => streaming_rank(set, memory_cap),
        RankMethod::Derivatives => derivative_rank(set, memory_cap),
        RankMethod::Split => split_rank(set, memory_cap).unwrap_or_else(|| derivative_rank(set, memory_cap)),
        RankMethod::Auto => match split_rank(set, memory_cap) {
            Some(r) => r,
            None => derivative_rank(set, memory_cap),
        },
    }
}
