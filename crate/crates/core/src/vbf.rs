//! Functions `GF(2^n) -> GF(2^n)` given as sparse univariate polynomials,
//! always paired with their full truth table.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bitmatrix::BitMatrix;
use crate::gf2n::{Elem, ElemText, FieldError, FieldSpec};
use crate::Limits;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum VbfError {
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error("exponent {exp} is congruent to 0 modulo 2^{n}-1 but nonzero; x^(2^n-1) is not representable")]
    ExponentOutOfRange { exp: u64, n: u32 },
    #[error("spectra are capped at n <= {cap} (got n = {n}); raise the cap to override")]
    CapExceeded { n: u32, cap: u32 },
    #[error("function has algebraic degree {0}, the kernel method needs degree <= 2")]
    NotQuadratic(u32),
    #[error("truth table has {got} entries, expected {expected}")]
    TableSize { got: usize, expected: usize },
    #[error("table entry {value:#x} at index {index} is not an element of GF(2^{n})")]
    TableEntry { index: usize, value: u32, n: u32 },
    #[error("functions live over different fields (n = {0} vs n = {1})")]
    FieldMismatch(u32, u32),
}

/// One monomial `coeff * x^exp`.
#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Term {
    pub coeff: Elem,
    pub exp: u64,
}

/// A function on GF(2^n) with its materialized truth table.
///
/// `terms` is `None` for table-backed functions (e.g. the output of an EA
/// transform), which have no sparse form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FunctionSpec {
    field: FieldSpec,
    terms: Option<Vec<Term>>,
    table: Vec<Elem>,
}

/// Reduces a polynomial exponent, keeping nonzero exponents nonzero.
pub fn reduce_exponent(field: &FieldSpec, exp: u64) -> Result<u64, VbfError> {
    if exp == 0 {
        return Ok(0);
    }
    match exp % field.order() {
        0 => Err(VbfError::ExponentOutOfRange { exp, n: field.n() }),
        r => Ok(r),
    }
}

/// Sorts by exponent and adds coefficients of equal exponents; zero
/// coefficients are dropped.
fn canonicalize(terms: impl IntoIterator<Item = Term>) -> Vec<Term> {
    let mut acc: BTreeMap<u64, Elem> = BTreeMap::new();
    for t in terms {
        *acc.entry(t.exp).or_default() += t.coeff;
    }
    acc.into_iter().filter(|(_, c)| !c.is_zero()).map(|(exp, coeff)| Term { coeff, exp }).collect()
}

const EVAL_CHUNK: usize = 1 << 12;

fn materialize(field: &FieldSpec, terms: &[Term]) -> Vec<Elem> {
    let size = field.size();
    let order = field.order() as usize;
    let mut table = vec![Elem::ZERO; size];
    for t in terms {
        if t.exp == 0 {
            table[0] += t.coeff;
        }
    }
    // Walk x = g^i; x^e advances by a factor g^e per step.
    let g = field.generator();
    let mut contrib = vec![Elem::ZERO; order];
    contrib.par_chunks_mut(EVAL_CHUNK).enumerate().for_each(|(c, chunk)| {
        let start = (c * EVAL_CHUNK) as i64;
        let mut x = field.pow(g, start);
        let mut ys: Vec<(Elem, Elem, Elem)> =
            terms.iter().map(|t| (t.coeff, field.pow(x, t.exp as i64), field.pow(g, t.exp as i64))).collect();
        for out in chunk.iter_mut() {
            let mut v = Elem::ZERO;
            for (coeff, y, step) in ys.iter_mut() {
                v += field.mul(*coeff, *y);
                *y = field.mul(*y, *step);
            }
            *out = v;
            x = field.mul(x, g);
        }
    });
    let mut x = Elem::ONE;
    for v in contrib {
        table[x.0 as usize] += v;
        x = field.mul(x, g);
    }
    table
}

impl FunctionSpec {
    /// Canonical function from already-resolved terms. Exponents are reduced
    /// modulo `2^n - 1`; equal exponents merge.
    pub fn from_elems(field: &FieldSpec, terms: impl IntoIterator<Item = Term>) -> Result<Self, VbfError> {
        let reduced = terms
            .into_iter()
            .map(|t| Ok(Term { coeff: t.coeff, exp: reduce_exponent(field, t.exp)? }))
            .collect::<Result<Vec<_>, VbfError>>()?;
        let terms = canonicalize(reduced);
        let table = materialize(field, &terms);
        Ok(FunctionSpec { field: field.clone(), terms: Some(terms), table })
    }

    /// Parses `(element-text, exponent)` pairs.
    pub fn from_terms<S: AsRef<str>>(field: &FieldSpec, terms: &[(S, u64)]) -> Result<Self, VbfError> {
        let parsed = terms
            .iter()
            .map(|(c, e)| {
                let text: ElemText = c.as_ref().parse()?;
                Ok(Term { coeff: field.resolve(&text)?, exp: *e })
            })
            .collect::<Result<Vec<_>, VbfError>>()?;
        Self::from_elems(field, parsed)
    }

    /// A table-backed function with no sparse form.
    pub fn from_table(field: &FieldSpec, table: Vec<Elem>) -> Result<Self, VbfError> {
        if table.len() != field.size() {
            return Err(VbfError::TableSize { got: table.len(), expected: field.size() });
        }
        if let Some((index, v)) = table.iter().enumerate().find(|(_, v)| v.0 > field.mask()) {
            return Err(VbfError::TableEntry { index, value: v.0, n: field.n() });
        }
        Ok(FunctionSpec { field: field.clone(), terms: None, table })
    }

    pub fn monomial(field: &FieldSpec, exp: u64) -> Result<Self, VbfError> {
        Self::from_elems(field, [Term { coeff: Elem::ONE, exp }])
    }

    pub fn zero(field: &FieldSpec) -> Self {
        FunctionSpec { field: field.clone(), terms: Some(Vec::new()), table: vec![Elem::ZERO; field.size()] }
    }

    #[inline]
    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    #[inline]
    pub fn n(&self) -> u32 {
        self.field.n()
    }

    pub fn terms(&self) -> Option<&[Term]> {
        self.terms.as_deref()
    }

    #[inline]
    pub fn table(&self) -> &[Elem] {
        &self.table
    }

    #[inline]
    pub fn eval(&self, x: Elem) -> Elem {
        self.table[x.0 as usize]
    }

    /// Evaluates the sparse form directly (no table lookup).
    pub fn eval_sparse(&self, x: Elem) -> Option<Elem> {
        let terms = self.terms.as_ref()?;
        Some(terms.iter().fold(Elem::ZERO, |acc, t| acc + self.field.mul(t.coeff, self.field.pow(x, t.exp as i64))))
    }

    /// Drops the sparse form, keeping only the table.
    pub fn into_table_backed(self) -> Self {
        FunctionSpec { terms: None, ..self }
    }

    /// Human-readable polynomial, coefficients written as powers of `g`.
    pub fn describe(&self) -> String {
        match &self.terms {
            None => "<table-backed>".to_string(),
            Some(t) if t.is_empty() => "0".to_string(),
            Some(t) => t
                .iter()
                .map(|t| {
                    let c = self.field.format_power(t.coeff);
                    match (c.as_str(), t.exp) {
                        (c, 0) => c.to_string(),
                        ("1", e) => format!("x^{e}"),
                        (c, e) => format!("{c}*x^{e}"),
                    }
                })
                .collect::<Vec<_>>()
                .join(" + "),
        }
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SpectrumKind {
    Differential,
    WalshExtended,
    DualWeights,
}

/// A multiset of values as sorted `(value, multiplicity)` pairs.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Spectrum {
    pub kind: SpectrumKind,
    pub counts: Vec<(i64, u64)>,
}

impl Spectrum {
    pub fn from_map(kind: SpectrumKind, map: BTreeMap<i64, u64>) -> Self {
        Spectrum { kind, counts: map.into_iter().filter(|&(_, m)| m > 0).collect() }
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().map(|&(_, m)| m).sum()
    }

    pub fn max_value(&self) -> Option<i64> {
        self.counts.last().map(|&(v, _)| v)
    }

    pub fn multiplicity(&self, value: i64) -> u64 {
        self.counts.iter().find(|&&(v, _)| v == value).map_or(0, |&(_, m)| m)
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from("value,multiplicity\n");
        for (v, m) in &self.counts {
            s.push_str(&format!("{v},{m}\n"));
        }
        s
    }
}

pub(crate) fn merge_maps<K: Ord>(mut a: BTreeMap<K, u64>, b: BTreeMap<K, u64>) -> BTreeMap<K, u64> {
    for (k, v) in b {
        *a.entry(k).or_default() += v;
    }
    a
}

pub(crate) fn check_cap(n: u32, cap: u32) -> Result<(), VbfError> {
    if n > cap {
        return Err(VbfError::CapExceeded { n, cap });
    }
    Ok(())
}

/// Number of solutions of `f(x+q) + f(x) = p`, indexed by `p`.
pub fn differential_row(f: &FunctionSpec, q: Elem) -> Vec<u32> {
    let t = &f.table;
    let mut hist = vec![0u32; t.len()];
    for x in 0..t.len() {
        hist[(t[x].0 ^ t[x ^ q.0 as usize].0) as usize] += 1;
    }
    hist
}

/// Per-`q` maximum solution count (index 0 unused and set to 0).
pub fn differential_row_maxima(f: &FunctionSpec) -> Vec<u32> {
    let mut out: Vec<u32> = (0..f.table.len() as u32)
        .into_par_iter()
        .map(|q| if q == 0 { 0 } else { differential_row(f, Elem(q)).into_iter().max().unwrap_or(0) })
        .collect();
    out[0] = 0;
    out
}

/// Histogram of solution counts over all `(q != 0, p)`.
pub fn differential_spectrum(f: &FunctionSpec) -> Result<Spectrum, VbfError> {
    differential_spectrum_with(f, &Limits::default())
}

pub fn differential_spectrum_with(f: &FunctionSpec, limits: &Limits) -> Result<Spectrum, VbfError> {
    check_cap(f.n(), limits.spectra_max_n)?;
    let map = (1..f.table.len() as u32)
        .into_par_iter()
        .fold(BTreeMap::new, |mut acc: BTreeMap<i64, u64>, q| {
            for c in differential_row(f, Elem(q)) {
                debug_assert!(c % 2 == 0);
                *acc.entry(c as i64).or_default() += 1;
            }
            acc
        })
        .reduce(BTreeMap::new, merge_maps);
    Ok(Spectrum::from_map(SpectrumKind::Differential, map))
}

pub fn differential_uniformity(f: &FunctionSpec) -> Result<u32, VbfError> {
    differential_uniformity_with(f, &Limits::default())
}

pub fn differential_uniformity_with(f: &FunctionSpec, limits: &Limits) -> Result<u32, VbfError> {
    check_cap(f.n(), limits.spectra_max_n)?;
    Ok(differential_row_maxima(f).into_iter().max().unwrap_or(0))
}

/// Matrix of the linear map `x -> f(x+q) + f(x) + f(q) + f(0)` of a quadratic `f`;
/// column `i` is the image of the basis vector `x^i`.
pub fn derivative_matrix(f: &FunctionSpec, q: Elem) -> BitMatrix {
    let n = f.n() as usize;
    let t = &f.table;
    let qi = q.0 as usize;
    let base = t[qi] + t[0];
    let images: Vec<u64> = (0..n)
        .map(|i| {
            let e = 1usize << i;
            (t[e ^ qi] + t[e] + base).0 as u64
        })
        .collect();
    BitMatrix::from_columns(&images, n)
}

/// Differential uniformity of a quadratic function via kernel sizes of its
/// linear derivatives, `max_q 2^(n - rank)`.
pub fn differential_uniformity_quadratic(f: &FunctionSpec) -> Result<u32, VbfError> {
    let deg = algebraic_degree(f);
    if deg > 2 {
        return Err(VbfError::NotQuadratic(deg));
    }
    let n = f.n() as usize;
    let max_kernel = (1..f.table.len() as u32)
        .into_par_iter()
        .map(|q| 1u32 << (n - derivative_matrix(f, Elem(q)).rank()))
        .max()
        .unwrap_or(0);
    Ok(max_kernel)
}

/// In-place fast Walsh–Hadamard transform; `v.len()` must be a power of two.
pub fn fwht(v: &mut [i32]) {
    let len = v.len();
    debug_assert!(len.is_power_of_two());
    let mut h = 1;
    while h < len {
        for block in v.chunks_mut(2 * h) {
            let (lo, hi) = block.split_at_mut(h);
            for (a, b) in lo.iter_mut().zip(hi.iter_mut()) {
                let (x, y) = (*a, *b);
                *a = x + y;
                *b = x - y;
            }
        }
        h *= 2;
    }
}

/// Naive character sum `sum_x (-1)^(Tr(b f(x)) + Tr(a x))`.
pub fn walsh_value(f: &FunctionSpec, a: Elem, b: Elem) -> i64 {
    let field = &f.field;
    field
        .elements()
        .map(|x| {
            let bit = field.trace(field.mul(b, f.eval(x))) ^ field.trace(field.mul(a, x));
            if bit {
                -1
            } else {
                1
            }
        })
        .sum()
}

/// Transform of the component function `x -> Tr(b f(x))` in dot-product
/// indexing: `out[w] = sum_x (-1)^(Tr(b f(x)) + w.x)`.
pub fn component_transform(f: &FunctionSpec, b: Elem) -> Vec<i32> {
    let field = &f.field;
    let mut v: Vec<i32> = f.table.iter().map(|&y| if field.trace(field.mul(b, y)) { -1 } else { 1 }).collect();
    fwht(&mut v);
    v
}

/// Dot-product mask `w(a)` with `Tr(a x) = w(a) . x` for all `x`.
pub fn trace_dual_mask(field: &FieldSpec, a: Elem) -> u32 {
    (0..field.n()).filter(|&i| field.trace(field.mul(a, Elem(1 << i)))).fold(0, |m, i| m | (1 << i))
}

/// All Walsh values `W(a, b)` for a fixed `b`, indexed by the mask of `a`.
pub fn walsh_column(f: &FunctionSpec, b: Elem) -> Vec<i32> {
    let spectrum = component_transform(f, b);
    f.field.elements().map(|a| spectrum[trace_dual_mask(&f.field, a) as usize]).collect()
}

/// Extended Walsh spectrum: multiset of `|W(a, b)|` over all `a` and `b != 0`.
pub fn walsh_spectrum(f: &FunctionSpec) -> Result<Spectrum, VbfError> {
    walsh_spectrum_with(f, &Limits::default())
}

pub fn walsh_spectrum_with(f: &FunctionSpec, limits: &Limits) -> Result<Spectrum, VbfError> {
    check_cap(f.n(), limits.spectra_max_n)?;
    // a -> w(a) is a bijection, so the dot-product transform has the same multiset.
    let map = (1..f.table.len() as u32)
        .into_par_iter()
        .fold(BTreeMap::new, |mut acc: BTreeMap<i64, u64>, b| {
            for w in component_transform(f, Elem(b)) {
                *acc.entry(w.unsigned_abs() as i64).or_default() += 1;
            }
            acc
        })
        .reduce(BTreeMap::new, merge_maps);
    Ok(Spectrum::from_map(SpectrumKind::WalshExtended, map))
}

/// Algebraic normal form of the truth table, all coordinates at once:
/// `anf[m]` has bit `j` set iff coordinate `j` contains the monomial `m`.
pub fn anf_table(table: &[Elem]) -> Vec<u32> {
    let mut a: Vec<u32> = table.iter().map(|e| e.0).collect();
    let len = a.len();
    let mut h = 1;
    while h < len {
        for block in a.chunks_mut(2 * h) {
            let (lo, hi) = block.split_at_mut(h);
            for (x, y) in lo.iter().zip(hi.iter_mut()) {
                *y ^= *x;
            }
        }
        h *= 2;
    }
    a
}

/// Degree from the coordinate-function ANFs.
pub fn anf_degree(table: &[Elem]) -> u32 {
    anf_table(table).iter().enumerate().filter(|(_, &c)| c != 0).map(|(m, _)| m.count_ones()).max().unwrap_or(0)
}

/// Maximum binary weight of an exponent in the sparse form; falls back to
/// the ANF for table-backed functions.
pub fn algebraic_degree(f: &FunctionSpec) -> u32 {
    match &f.terms {
        Some(t) => t.iter().map(|t| t.exp.count_ones()).max().unwrap_or(0),
        None => anf_degree(&f.table),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf2n::make_field;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    /// Brute-force uniformity straight from the definition.
    fn brute_uniformity(f: &FunctionSpec) -> u32 {
        let field = f.field();
        let mut best = 0;
        for q in field.elements().skip(1) {
            for p in field.elements() {
                let c = field.elements().filter(|&x| f.eval(x + q) + f.eval(x) == p).count() as u32;
                best = best.max(c);
            }
        }
        best
    }

    #[test]
    fn monomial_evaluation() {
        let field = make_field(6).unwrap();
        let f = FunctionSpec::from_terms(&field, &[("1", 3)]).unwrap();
        let g = field.generator();
        assert_eq!(f.eval(g), field.pow(g, 3));
        assert_eq!(f.eval(Elem::ZERO), Elem::ZERO);
        for x in field.elements() {
            assert_eq!(Some(f.eval(x)), f.eval_sparse(x));
        }
    }

    #[test]
    fn canonical_forms() {
        let field = make_field(6).unwrap();
        let empty: [(&str, u64); 0] = [];
        let zero = FunctionSpec::from_terms(&field, &empty).unwrap();
        assert!(zero.table().iter().all(|v| v.is_zero()));
        let cancel = FunctionSpec::from_terms(&field, &[("1", 3), ("1", 3)]).unwrap();
        assert_eq!(cancel, zero);
        let f = FunctionSpec::from_terms(&field, &[("g^2", 66), ("0x5", 0), ("0", 9)]).unwrap();
        assert_eq!(f.terms().unwrap(), &[Term { coeff: Elem(5), exp: 0 }, Term { coeff: field.gen_pow(2), exp: 3 }]);
        assert_eq!(f.eval(Elem::ZERO), Elem(5));
        assert!(matches!(FunctionSpec::from_terms(&field, &[("1", 63)]), Err(VbfError::ExponentOutOfRange { .. })));
        assert!(FunctionSpec::from_terms(&field, &[("zz", 3)]).is_err());
    }

    #[test]
    fn linear_function_uniformity() {
        for n in [3, 5, 6] {
            let field = make_field(n).unwrap();
            let f = FunctionSpec::monomial(&field, 1).unwrap();
            assert_eq!(differential_uniformity(&f).unwrap(), 1 << n);
            assert_eq!(differential_uniformity_quadratic(&f).unwrap(), 1 << n);
        }
    }

    #[test]
    fn cube_is_apn() {
        let field = make_field(6).unwrap();
        let f = FunctionSpec::monomial(&field, 3).unwrap();
        assert_eq!(differential_uniformity(&f).unwrap(), 2);
        assert_eq!(differential_uniformity_quadratic(&f).unwrap(), 2);
        let s = differential_spectrum(&f).unwrap();
        assert_eq!(s.total(), 64 * 63);
        assert_eq!(s.counts, vec![(0, 32 * 63), (2, 32 * 63)]);
    }

    #[test]
    fn gold_exponent_with_common_factor() {
        let field = make_field(4).unwrap();
        let f = FunctionSpec::monomial(&field, 5).unwrap();
        let oracle = brute_uniformity(&f);
        assert_eq!(oracle, 4);
        assert_eq!(differential_uniformity_quadratic(&f).unwrap(), oracle);
        assert_eq!(differential_uniformity(&f).unwrap(), oracle);
    }

    #[test]
    fn kernel_method_rejects_higher_degree() {
        let field = make_field(5).unwrap();
        let f = FunctionSpec::monomial(&field, 7).unwrap();
        assert_eq!(differential_uniformity_quadratic(&f), Err(VbfError::NotQuadratic(3)));
    }

    #[test]
    fn row_sums_and_parity() {
        let field = make_field(5).unwrap();
        let f = FunctionSpec::from_terms(&field, &[("g^3", 7), ("1", 11)]).unwrap();
        for q in field.elements().skip(1) {
            let row = differential_row(&f, q);
            assert_eq!(row.iter().sum::<u32>(), 32);
            assert!(row.iter().all(|c| c % 2 == 0));
        }
    }

    #[test]
    fn spectra_cap() {
        let field = make_field(17).unwrap();
        let f = FunctionSpec::zero(&field);
        assert_eq!(differential_spectrum(&f), Err(VbfError::CapExceeded { n: 17, cap: 16 }));
        assert!(walsh_spectrum(&f).is_err());
    }

    #[test]
    fn walsh_basics() {
        let field = make_field(5).unwrap();
        let f = FunctionSpec::from_terms(&field, &[("g", 3), ("g^4", 5)]).unwrap();
        assert_eq!(walsh_value(&f, Elem::ZERO, Elem::ZERO), 32);
        for b in field.elements() {
            let col = walsh_column(&f, b);
            let energy: i64 = col.iter().map(|&w| (w as i64).pow(2)).sum();
            assert_eq!(energy, 1 << 10);
        }
    }

    #[test]
    fn walsh_transform_matches_naive_sum() {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        for n in [3u32, 5, 8] {
            let field = make_field(n).unwrap();
            let f = FunctionSpec::from_terms(&field, &[("g^5", 3), ("1", 6), ("g", 2 + 8)]).unwrap();
            for _ in 0..100 {
                let a = Elem(rng.gen_range(0..1 << n));
                let b = Elem(rng.gen_range(0..1 << n));
                assert_eq!(walsh_column(&f, b)[a.0 as usize] as i64, walsh_value(&f, a, b));
            }
        }
    }

    #[test]
    fn cube_walsh_spectrum_small_field() {
        // Double-loop oracle at n = 3.
        let field = make_field(3).unwrap();
        let f = FunctionSpec::monomial(&field, 3).unwrap();
        let mut oracle = BTreeMap::new();
        for a in field.elements() {
            for b in field.elements().skip(1) {
                *oracle.entry(walsh_value(&f, a, b).abs()).or_insert(0u64) += 1;
            }
        }
        let s = walsh_spectrum(&f).unwrap();
        assert_eq!(s, Spectrum::from_map(SpectrumKind::WalshExtended, oracle));
        assert!(s.counts.iter().all(|&(v, _)| v == 0 || v == 4));
    }

    #[test]
    fn degrees() {
        let f6 = make_field(6).unwrap();
        let f12 = make_field(12).unwrap();
        assert_eq!(algebraic_degree(&FunctionSpec::monomial(&f6, 3).unwrap()), 2);
        let f = FunctionSpec::monomial(&f12, 768).unwrap();
        assert_eq!(algebraic_degree(&f), 2);
        assert_eq!(anf_degree(f.table()), 2);
        let inv = FunctionSpec::monomial(&f6, 62).unwrap();
        assert_eq!(algebraic_degree(&inv), 5);
        assert_eq!(anf_degree(inv.table()), 5);
        assert_eq!(algebraic_degree(&FunctionSpec::zero(&f6)), 0);
    }

    #[test]
    fn table_validation() {
        let field = make_field(3).unwrap();
        assert!(matches!(FunctionSpec::from_table(&field, vec![Elem::ZERO; 7]), Err(VbfError::TableSize { .. })));
        let mut t = vec![Elem::ZERO; 8];
        t[3] = Elem(9);
        assert!(matches!(FunctionSpec::from_table(&field, t), Err(VbfError::TableEntry { index: 3, .. })));
    }

    #[test]
    fn large_field_evaluation_is_consistent() {
        let field = make_field(20).unwrap();
        let f = FunctionSpec::from_terms(&field, &[("g^7", 3), ("1", 1 << 19 | 1 << 3)]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..200 {
            let x = Elem(rng.gen_range(0..1 << 20));
            assert_eq!(Some(f.eval(x)), f.eval_sparse(x));
        }
    }
}
