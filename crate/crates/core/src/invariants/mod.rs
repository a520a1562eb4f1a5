//! CCZ-equivalence invariants: the parity-check code `H_f`, the weight
//! distribution of its dual, Γ- and Δ-ranks, and EA transforms for testing
//! invariance.

pub mod devrank;

use std::collections::BTreeMap;
use std::fmt;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bitmatrix::{BitMatrix, CapExceeded, RankEngine};
use crate::gf2n::Elem;
use crate::vbf::{self, check_cap, fwht, merge_maps, FunctionSpec, Spectrum, SpectrumKind, VbfError};
use crate::Limits;

pub use devrank::{development_rank, PointSet, RankMethod};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InvariantError {
    #[error("{what} is capped at n <= {cap} (got n = {n}); raise the cap to override")]
    CapExceeded { what: &'static str, n: u32, cap: u32 },
    #[error("rank engine memory cap of {} bytes reached at partial rank {}", .0.cap, .0.partial_rank)]
    Memory(CapExceeded),
    #[error(transparent)]
    Function(#[from] VbfError),
}

impl From<CapExceeded> for InvariantError {
    fn from(e: CapExceeded) -> Self {
        InvariantError::Memory(e)
    }
}

/// The `(2n+1) x 2^n` parity-check matrix: an all-ones row, the coordinates
/// of `x`, then the coordinates of `f(x)`, columns in coordinate-mask order.
pub fn code_parity_matrix(f: &FunctionSpec) -> BitMatrix {
    let n = f.n() as usize;
    let size = f.table().len();
    let mut h = BitMatrix::zeros(2 * n + 1, size);
    for (x, y) in f.table().iter().enumerate() {
        h.set(0, x, true);
        for i in 0..n {
            h.set(1 + i, x, (x >> i) & 1 == 1);
            h.set(1 + n + i, x, (y.0 >> i) & 1 == 1);
        }
    }
    h
}

/// Weight distribution of the row space of `H_f` (the dual of the code with
/// parity-check matrix `H_f`).
///
/// The word `ε + a·x + b·f(x)` has weight `2^(n-1) - (-1)^ε S(a, b) / 2`
/// where `S` is the Walsh–Hadamard transform of `(-1)^(b·f(x))`. When `H_f`
/// is rank deficient each codeword appears `2^(2n+1-rank)` times among the
/// `(ε, a, b)` and the counts are divided accordingly.
pub fn dual_weight_distribution(f: &FunctionSpec) -> Result<Spectrum, InvariantError> {
    dual_weight_distribution_with(f, &Limits::default())
}

pub fn dual_weight_distribution_with(f: &FunctionSpec, limits: &Limits) -> Result<Spectrum, InvariantError> {
    check_cap(f.n(), limits.spectra_max_n)?;
    let n = f.n();
    let size = f.table().len() as i64;
    let table = f.table();
    let map = (0..size as u32)
        .into_par_iter()
        .fold(BTreeMap::new, |mut acc: BTreeMap<i64, u64>, b| {
            let mut v: Vec<i32> = table.iter().map(|y| if (y.0 & b).count_ones() & 1 == 1 { -1 } else { 1 }).collect();
            fwht(&mut v);
            for s in v {
                let s = s as i64;
                *acc.entry((size - s) / 2).or_default() += 1;
                *acc.entry((size + s) / 2).or_default() += 1;
            }
            acc
        })
        .reduce(BTreeMap::new, merge_maps);
    let rank = code_parity_matrix(f).rank() as u32;
    let repeat = 1u64 << (2 * n + 1 - rank);
    let map = map.into_iter().map(|(w, m)| (w, m / repeat)).collect();
    Ok(Spectrum::from_map(SpectrumKind::DualWeights, map))
}

/// Smallest nonzero weight of a weight distribution and its multiplicity.
pub fn min_weight_words(dist: &Spectrum) -> Option<(i64, u64)> {
    dist.counts.iter().find(|&&(w, _)| w > 0).copied()
}

/// Options for the development ranks.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub struct RankOptions {
    pub method: RankMethod,
    /// Adjoin the point `(0, 0)` (the `a = 0` derivative) to `D_f`.
    pub include_zero_row: bool,
    /// Γ-rank has its own cap: its sets are never affine in `b`, so only
    /// the generic engines apply.
    pub gamma_max_n: u32,
}

impl Default for RankOptions {
    fn default() -> Self {
        RankOptions { method: RankMethod::Auto, include_zero_row: false, gamma_max_n: 9 }
    }
}

/// `{(x, f(x))}` as a subset of `L x L`, `x` in the low coordinates.
pub fn graph_set(f: &FunctionSpec) -> PointSet {
    let n = f.n();
    let mut s = PointSet::new(2 * n, n);
    for (x, y) in f.table().iter().enumerate() {
        s.insert(x | (y.0 as usize) << n);
    }
    s
}

/// `D_f = {(a, f(x) + f(x + a)) : a != 0}`, plus `(0, 0)` if requested.
pub fn derivative_set(f: &FunctionSpec, include_zero_row: bool) -> PointSet {
    let n = f.n();
    let t = f.table();
    let mut s = PointSet::new(2 * n, n);
    for a in 1..t.len() {
        for x in 0..t.len() {
            s.insert(a | ((t[x].0 ^ t[x ^ a].0) as usize) << n);
        }
    }
    if include_zero_row {
        s.insert(0);
    }
    s
}

/// GF(2) rank of the development of the graph of `f`.
pub fn gamma_rank(f: &FunctionSpec) -> Result<u64, InvariantError> {
    gamma_rank_with(f, &Limits::default(), &RankOptions::default())
}

pub fn gamma_rank_with(f: &FunctionSpec, limits: &Limits, opts: &RankOptions) -> Result<u64, InvariantError> {
    let cap = opts.gamma_max_n;
    if f.n() > cap {
        return Err(InvariantError::CapExceeded { what: "gamma_rank", n: f.n(), cap });
    }
    Ok(development_rank(&graph_set(f), opts.method, limits.memory_cap)? as u64)
}

/// GF(2) rank of the development of `D_f`.
pub fn delta_rank(f: &FunctionSpec) -> Result<u64, InvariantError> {
    delta_rank_with(f, &Limits::default(), &RankOptions::default())
}

pub fn delta_rank_with(f: &FunctionSpec, limits: &Limits, opts: &RankOptions) -> Result<u64, InvariantError> {
    if f.n() > limits.rank_max_n {
        return Err(InvariantError::CapExceeded { what: "delta_rank", n: f.n(), cap: limits.rank_max_n });
    }
    Ok(development_rank(&derivative_set(f, opts.include_zero_row), opts.method, limits.memory_cap)? as u64)
}

/// A GF(2)-linear map on `n` bits stored as the images of the unit vectors.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LinearMap {
    pub columns: Vec<u32>,
}

impl LinearMap {
    pub fn identity(n: u32) -> Self {
        LinearMap { columns: (0..n).map(|i| 1 << i).collect() }
    }

    pub fn zero(n: u32) -> Self {
        LinearMap { columns: vec![0; n as usize] }
    }

    pub fn apply(&self, x: u32) -> u32 {
        self.columns.iter().enumerate().filter(|&(i, _)| (x >> i) & 1 == 1).fold(0, |acc, (_, &c)| acc ^ c)
    }

    pub fn is_invertible(&self) -> bool {
        let mut eng = RankEngine::new(self.columns.len().max(1));
        for &c in &self.columns {
            eng.insert(vec![c as u64]);
        }
        eng.rank() == self.columns.len()
    }

    fn random(rng: &mut ChaCha8Rng, n: u32) -> Self {
        let mask = if n == 32 { u32::MAX } else { (1u32 << n) - 1 };
        LinearMap { columns: (0..n).map(|_| rng.gen::<u32>() & mask).collect() }
    }

    fn random_invertible(rng: &mut ChaCha8Rng, n: u32) -> Self {
        loop {
            let m = Self::random(rng, n);
            if m.is_invertible() {
                return m;
            }
        }
    }
}

/// `g = A1 ∘ f ∘ A2 + A` with `A1(y) = m1 y + c1`, `A2(x) = m2 x + c2` and
/// `A(x) = m x + c`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EaTransform {
    pub m1: LinearMap,
    pub c1: u32,
    pub m2: LinearMap,
    pub c2: u32,
    pub m: LinearMap,
    pub c: u32,
}

impl EaTransform {
    pub fn identity(n: u32) -> Self {
        EaTransform {
            m1: LinearMap::identity(n),
            c1: 0,
            m2: LinearMap::identity(n),
            c2: 0,
            m: LinearMap::zero(n),
            c: 0,
        }
    }

    pub fn random(n: u32, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mask = (1u32 << n) - 1;
        EaTransform {
            m1: LinearMap::random_invertible(&mut rng, n),
            c1: rng.gen::<u32>() & mask,
            m2: LinearMap::random_invertible(&mut rng, n),
            c2: rng.gen::<u32>() & mask,
            m: LinearMap::random(&mut rng, n),
            c: rng.gen::<u32>() & mask,
        }
    }

    pub fn apply(&self, f: &FunctionSpec) -> FunctionSpec {
        let t = f.table();
        let table: Vec<Elem> = (0..t.len() as u32)
            .map(|x| {
                let y = t[(self.m2.apply(x) ^ self.c2) as usize].0;
                Elem(self.m1.apply(y) ^ self.c1 ^ self.m.apply(x) ^ self.c)
            })
            .collect();
        FunctionSpec::from_table(f.field(), table).expect("affine images stay in the field")
    }
}

/// Seeded random EA transform of `f`; the result is table-backed.
pub fn ea_transform(f: &FunctionSpec, seed: u64) -> FunctionSpec {
    EaTransform::random(f.n(), seed).apply(f)
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Level {
    Spectra,
    Ranks,
    All,
}

impl Level {
    fn spectra(self) -> bool {
        matches!(self, Level::Spectra | Level::All)
    }

    fn ranks(self) -> bool {
        matches!(self, Level::Ranks | Level::All)
    }
}

impl std::str::FromStr for Level {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "spectra" => Ok(Level::Spectra),
            "ranks" => Ok(Level::Ranks),
            "all" => Ok(Level::All),
            _ => Err(format!("unknown level {s:?} (expected spectra, ranks or all)")),
        }
    }
}

impl fmt::Display for Level {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Level::Spectra => "spectra",
            Level::Ranks => "ranks",
            Level::All => "all",
        })
    }
}

/// Everything computed about one function. Optional fields are present iff
/// computed; `notes` explains anything skipped.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InvariantReport {
    pub function: String,
    pub n: u32,
    pub level: Level,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub differential_spectrum: Option<Spectrum>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub walsh_spectrum: Option<Spectrum>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dual_weights: Option<Spectrum>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gamma_rank: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub delta_rank: Option<u64>,
    #[serde(default)]
    pub notes: Vec<String>,
    #[serde(default)]
    pub timings_ms: BTreeMap<String, u64>,
}

impl InvariantReport {
    /// The invariant values without id, notes or timings, in comparison order.
    pub fn invariants(&self) -> Vec<(&'static str, Option<String>)> {
        let spec = |s: &Option<Spectrum>| s.as_ref().map(|s| format!("{:?}", s.counts));
        vec![
            ("differential_spectrum", spec(&self.differential_spectrum)),
            ("walsh_spectrum", spec(&self.walsh_spectrum)),
            ("dual_weights", spec(&self.dual_weights)),
            ("gamma_rank", self.gamma_rank.map(|r| r.to_string())),
            ("delta_rank", self.delta_rank.map(|r| r.to_string())),
        ]
    }

    /// Whether all computed invariants coincide (ignores id and timings).
    pub fn same_invariants(&self, other: &InvariantReport) -> bool {
        self.n == other.n && self.invariants() == other.invariants()
    }

    /// One `invariant,value,multiplicity` line per spectrum entry, ranks with
    /// an empty multiplicity.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("invariant,value,multiplicity\n");
        for (name, spec) in [
            ("differential_spectrum", &self.differential_spectrum),
            ("walsh_spectrum", &self.walsh_spectrum),
            ("dual_weights", &self.dual_weights),
        ] {
            if let Some(spec) = spec {
                for (v, m) in &spec.counts {
                    s.push_str(&format!("{name},{v},{m}\n"));
                }
            }
        }
        for (name, r) in [("gamma_rank", self.gamma_rank), ("delta_rank", self.delta_rank)] {
            if let Some(r) = r {
                s.push_str(&format!("{name},{r},\n"));
            }
        }
        s
    }
}

fn timed<T>(timings: &mut BTreeMap<String, u64>, key: &str, f: impl FnOnce() -> T) -> T {
    let start = Instant::now();
    let out = f();
    timings.insert(key.to_string(), start.elapsed().as_millis() as u64);
    out
}

/// Computes the invariants selected by `level`. Rank invariants beyond
/// their caps are skipped with a note; a memory-cap hit is an error.
pub fn invariant_report(
    f: &FunctionSpec,
    id: &str,
    level: Level,
    limits: &Limits,
    opts: &RankOptions,
) -> Result<InvariantReport, InvariantError> {
    let mut r = InvariantReport {
        function: id.to_string(),
        n: f.n(),
        level,
        differential_spectrum: None,
        walsh_spectrum: None,
        dual_weights: None,
        gamma_rank: None,
        delta_rank: None,
        notes: Vec::new(),
        timings_ms: BTreeMap::new(),
    };
    let t = &mut r.timings_ms;
    if level.spectra() {
        r.differential_spectrum =
            Some(timed(t, "differential_spectrum", || vbf::differential_spectrum_with(f, limits))?);
        r.walsh_spectrum = Some(timed(t, "walsh_spectrum", || vbf::walsh_spectrum_with(f, limits))?);
        r.dual_weights = Some(timed(t, "dual_weights", || dual_weight_distribution_with(f, limits))?);
    }
    if level.ranks() {
        match timed(t, "gamma_rank", || gamma_rank_with(f, limits, opts)) {
            Ok(v) => r.gamma_rank = Some(v),
            Err(InvariantError::CapExceeded { what, n, cap }) => {
                t.remove("gamma_rank");
                r.notes.push(format!("{what} skipped: n = {n} exceeds cap {cap}"));
            }
            Err(e) => return Err(e),
        }
        match timed(t, "delta_rank", || delta_rank_with(f, limits, opts)) {
            Ok(v) => r.delta_rank = Some(v),
            Err(InvariantError::CapExceeded { what, n, cap }) => {
                t.remove("delta_rank");
                r.notes.push(format!("{what} skipped: n = {n} exceeds cap {cap}"));
            }
            Err(e) => return Err(e),
        }
        if opts.include_zero_row {
            r.notes.push("delta set includes the a = 0 point".into());
        }
    }
    Ok(r)
}

/// Outcome of an invariant comparison. Never a claim of equivalence.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum Verdict {
    Distinguished { invariant: String },
    Indistinguishable { level: Level, compared: Vec<String> },
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Distinguished { invariant } => write!(f, "DISTINGUISHED by {invariant}"),
            Verdict::Indistinguishable { level, compared } => {
                write!(f, "INDISTINGUISHABLE at level {level} (compared: {})", compared.join(", "))
            }
        }
    }
}

/// Compares two reports invariant by invariant, skipping any invariant
/// missing from either side.
pub fn compare_reports(a: &InvariantReport, b: &InvariantReport) -> Verdict {
    let mut compared = Vec::new();
    for ((name, x), (_, y)) in a.invariants().into_iter().zip(b.invariants()) {
        if let (Some(x), Some(y)) = (x, y) {
            if x != y {
                return Verdict::Distinguished { invariant: name.to_string() };
            }
            compared.push(name.to_string());
        }
    }
    Verdict::Indistinguishable { level: a.level.max(b.level), compared }
}

pub fn compare_invariants(f: &FunctionSpec, g: &FunctionSpec, level: Level) -> Result<Verdict, InvariantError> {
    compare_invariants_with(f, g, level, &Limits::default(), &RankOptions::default())
}

pub fn compare_invariants_with(
    f: &FunctionSpec,
    g: &FunctionSpec,
    level: Level,
    limits: &Limits,
    opts: &RankOptions,
) -> Result<Verdict, InvariantError> {
    if f.n() != g.n() {
        return Err(VbfError::FieldMismatch(f.n(), g.n()).into());
    }
    let a = invariant_report(f, "f", level, limits, opts)?;
    let b = invariant_report(g, "g", level, limits, opts)?;
    Ok(compare_reports(&a, &b))
}
