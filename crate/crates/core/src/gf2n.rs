//! Arithmetic in GF(2^n) for 2 <= n <= 24.
//!
//! Elements are stored in polynomial-basis coordinates packed into a `u32`;
//! bit `i` is the coefficient of `x^i`. Each extension degree has exactly one
//! canonical model: the defining polynomial is the lexicographically smallest
//! primitive polynomial of that degree, so the residue class of `x` (the
//! canonical generator `g`) has multiplicative order `2^n - 1`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Smallest supported extension degree.
pub const MIN_DEGREE: u32 = 2;
/// Largest supported extension degree.
pub const MAX_DEGREE: u32 = 24;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("extension degree {0} outside the supported range {MIN_DEGREE}..={MAX_DEGREE}")]
    DegreeOutOfRange(u32),
    #[error("zero has no multiplicative inverse")]
    ZeroInverse,
    #[error("operation undefined for the zero element")]
    ZeroElement,
    #[error("{k} does not divide the extension degree {n}")]
    NotADivisor { k: u32, n: u32 },
    #[error("extension degree {0} is not divisible by 3")]
    DegreeNotMultipleOfThree(u32),
    #[error("malformed field element {0:?}")]
    Parse(String),
    #[error("element {value:#x} does not fit in GF(2^{n})")]
    ElementTooWide { value: u64, n: u32 },
}

/// A field element as its coordinate mask.
#[derive(Copy, Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Elem(pub u32);

impl Elem {
    pub const ZERO: Elem = Elem(0);
    pub const ONE: Elem = Elem(1);

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }

    #[inline]
    pub fn bits(self) -> u32 {
        self.0
    }
}

impl std::ops::Add for Elem {
    type Output = Elem;
    #[inline]
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn add(self, rhs: Elem) -> Elem {
        Elem(self.0 ^ rhs.0)
    }
}

impl std::ops::AddAssign for Elem {
    #[inline]
    #[allow(clippy::suspicious_op_assign_impl)]
    fn add_assign(&mut self, rhs: Elem) {
        self.0 ^= rhs.0;
    }
}

impl fmt::Display for Elem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.0 {
            0 => f.write_str("0"),
            1 => f.write_str("1"),
            v => write!(f, "{v:#x}"),
        }
    }
}

/// Textual form of an element before it is bound to a field.
///
/// Accepted syntax: `0`, `1`, `g^i` (a power of the canonical generator,
/// `i` may be negative) or a hexadecimal coordinate mask such as `0x2b`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ElemText {
    Mask(u64),
    GenPower(i64),
}

impl FromStr for ElemText {
    type Err = FieldError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim();
        let bad = || FieldError::Parse(s.to_string());
        match t {
            "0" => return Ok(ElemText::Mask(0)),
            "1" => return Ok(ElemText::Mask(1)),
            _ => {}
        }
        if let Some(e) = t.strip_prefix("g^").or_else(|| t.strip_prefix("u^")) {
            let e = e.trim().trim_start_matches('(').trim_end_matches(')');
            return e.parse::<i64>().map(ElemText::GenPower).map_err(|_| bad());
        }
        if t == "g" || t == "u" {
            return Ok(ElemText::GenPower(1));
        }
        if let Some(h) = t.strip_prefix("0x").or_else(|| t.strip_prefix("0X")) {
            return u64::from_str_radix(h, 16).map(ElemText::Mask).map_err(|_| bad());
        }
        Err(bad())
    }
}

/// A concrete model of GF(2^n).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FieldSpec {
    n: u32,
    modulus: u32,
    /// Distinct prime factors of `2^n - 1` with multiplicities.
    factors: Vec<(u64, u32)>,
    /// `trace(a) = parity(a & trace_mask)`.
    trace_mask: u32,
}

/// Prime factorization by trial division.
pub fn factorize(mut m: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2u64;
    while p * p <= m {
        if m.is_multiple_of(p) {
            let mut e = 0;
            while m.is_multiple_of(p) {
                m /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if m > 1 {
        out.push((m, 1));
    }
    out
}

#[inline]
fn clmul_reduce(mut a: u32, mut b: u32, n: u32, modulus: u32) -> u32 {
    let top = 1u32 << n;
    let mut r = 0u32;
    while b != 0 {
        if b & 1 != 0 {
            r ^= a;
        }
        b >>= 1;
        a <<= 1;
        if a & top != 0 {
            a ^= modulus;
        }
    }
    r
}

fn pow_raw(mut a: u32, mut e: u64, n: u32, modulus: u32) -> u32 {
    let mut r = 1u32;
    while e != 0 {
        if e & 1 != 0 {
            r = clmul_reduce(r, a, n, modulus);
        }
        a = clmul_reduce(a, a, n, modulus);
        e >>= 1;
    }
    r
}

fn generator_is_primitive(modulus: u32, n: u32, order: u64, factors: &[(u64, u32)]) -> bool {
    let x = 2u32;
    pow_raw(x, order, n, modulus) == 1 && factors.iter().all(|&(p, _)| pow_raw(x, order / p, n, modulus) != 1)
}

/// Builds the canonical model of GF(2^n).
pub fn make_field(n: u32) -> Result<FieldSpec, FieldError> {
    if !(MIN_DEGREE..=MAX_DEGREE).contains(&n) {
        return Err(FieldError::DegreeOutOfRange(n));
    }
    let order = (1u64 << n) - 1;
    let factors = factorize(order);
    // A primitive polynomial has nonzero constant term, so only odd masks.
    let modulus = ((1u32 << n) + 1..(1u32 << (n + 1)))
        .step_by(2)
        .find(|&m| generator_is_primitive(m, n, order, &factors))
        .expect("a primitive polynomial exists for every degree");
    let mut spec = FieldSpec { n, modulus, factors, trace_mask: 0 };
    spec.trace_mask = (0..n).filter(|&i| spec.trace_slow(Elem(1 << i))).fold(0, |m, i| m | (1 << i));
    Ok(spec)
}

impl FieldSpec {
    #[inline]
    pub fn n(&self) -> u32 {
        self.n
    }

    /// Defining polynomial as an (n+1)-bit mask.
    #[inline]
    pub fn modulus(&self) -> u32 {
        self.modulus
    }

    /// Number of field elements, `2^n`.
    #[inline]
    pub fn size(&self) -> usize {
        1usize << self.n
    }

    /// Order of the multiplicative group, `2^n - 1`.
    #[inline]
    pub fn order(&self) -> u64 {
        (1u64 << self.n) - 1
    }

    pub fn factors(&self) -> &[(u64, u32)] {
        &self.factors
    }

    /// The residue class of the indeterminate.
    #[inline]
    pub fn generator(&self) -> Elem {
        Elem(2)
    }

    #[inline]
    pub fn mask(&self) -> u32 {
        (1u32 << self.n) - 1
    }

    /// Iterates every element in coordinate-mask order.
    pub fn elements(&self) -> impl Iterator<Item = Elem> + Clone {
        (0..1u32 << self.n).map(Elem)
    }

    pub fn elem(&self, bits: u64) -> Result<Elem, FieldError> {
        if bits >> self.n != 0 {
            return Err(FieldError::ElementTooWide { value: bits, n: self.n });
        }
        Ok(Elem(bits as u32))
    }

    pub fn resolve(&self, text: &ElemText) -> Result<Elem, FieldError> {
        match *text {
            ElemText::Mask(m) => self.elem(m),
            ElemText::GenPower(e) => Ok(self.gen_pow(e)),
        }
    }

    /// Parses the canonical element syntax against this field.
    pub fn parse_elem(&self, s: &str) -> Result<Elem, FieldError> {
        self.resolve(&s.parse()?)
    }

    #[inline]
    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        a + b
    }

    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        Elem(clmul_reduce(a.0, b.0, self.n, self.modulus))
    }

    #[inline]
    pub fn square(&self, a: Elem) -> Elem {
        self.mul(a, a)
    }

    pub fn inv(&self, a: Elem) -> Result<Elem, FieldError> {
        if a.is_zero() {
            return Err(FieldError::ZeroInverse);
        }
        Ok(Elem(pow_raw(a.0, self.order() - 1, self.n, self.modulus)))
    }

    pub fn div(&self, a: Elem, b: Elem) -> Result<Elem, FieldError> {
        Ok(self.mul(a, self.inv(b)?))
    }

    /// Reduces an integer exponent into `[0, 2^n - 2]`.
    #[inline]
    pub fn reduce_exp(&self, e: i64) -> u64 {
        e.rem_euclid(self.order() as i64) as u64
    }

    /// `a^e` with the exponent reduced modulo `2^n - 1` for nonzero `a`.
    ///
    /// `0^0 = 1`, `0^e = 0` for `e > 0`, and `0^e` for negative `e` fails.
    pub fn try_pow(&self, a: Elem, e: i64) -> Result<Elem, FieldError> {
        if a.is_zero() {
            return match e {
                0 => Ok(Elem::ONE),
                e if e > 0 => Ok(Elem::ZERO),
                _ => Err(FieldError::ZeroInverse),
            };
        }
        Ok(Elem(pow_raw(a.0, self.reduce_exp(e), self.n, self.modulus)))
    }

    /// Panicking form of [`FieldSpec::try_pow`]; zero base with negative exponent panics.
    pub fn pow(&self, a: Elem, e: i64) -> Elem {
        self.try_pow(a, e).expect("negative power of zero")
    }

    /// `g^e` for the canonical generator.
    pub fn gen_pow(&self, e: i64) -> Elem {
        self.pow(self.generator(), e)
    }

    /// `a^(2^i)` with `i` taken modulo `n`, so negative `i` is the inverse Frobenius.
    pub fn frobenius(&self, a: Elem, i: i64) -> Elem {
        let r = i.rem_euclid(self.n as i64);
        (0..r).fold(a, |acc, _| self.square(acc))
    }

    /// Product of `a^(2^i)` over the listed Frobenius exponents, i.e.
    /// `a^(2^i1 + 2^i2 + ...)`.
    pub fn pow2_sum(&self, a: Elem, exps: &[i64]) -> Elem {
        exps.iter().fold(Elem::ONE, |acc, &i| self.mul(acc, self.frobenius(a, i)))
    }

    /// `2^(i mod n)`, the integer exponent realizing a Frobenius power.
    #[inline]
    pub fn pow2(&self, i: i64) -> u64 {
        1u64 << i.rem_euclid(self.n as i64)
    }

    fn trace_slow(&self, a: Elem) -> bool {
        let mut acc = Elem::ZERO;
        let mut c = a;
        for _ in 0..self.n {
            acc += c;
            c = self.square(c);
        }
        debug_assert!(acc.0 <= 1);
        acc.0 == 1
    }

    /// Absolute trace to GF(2).
    #[inline]
    pub fn trace(&self, a: Elem) -> bool {
        (a.0 & self.trace_mask).count_ones() & 1 == 1
    }

    #[inline]
    pub fn trace_mask(&self) -> u32 {
        self.trace_mask
    }

    /// Multiplicative order of a nonzero element.
    pub fn order_of(&self, a: Elem) -> Result<u64, FieldError> {
        if a.is_zero() {
            return Err(FieldError::ZeroElement);
        }
        let mut ord = self.order();
        for &(p, e) in &self.factors {
            for _ in 0..e {
                if self.pow(a, (ord / p) as i64) == Elem::ONE {
                    ord /= p;
                } else {
                    break;
                }
            }
        }
        Ok(ord)
    }

    pub fn is_primitive(&self, a: Elem) -> Result<bool, FieldError> {
        if a.is_zero() {
            return Err(FieldError::ZeroElement);
        }
        let ord = self.order();
        Ok(self.factors.iter().all(|&(p, _)| self.pow(a, (ord / p) as i64) != Elem::ONE))
    }

    /// Whether `a` lies in the subfield GF(2^k).
    pub fn in_subfield(&self, a: Elem, k: u32) -> Result<bool, FieldError> {
        if k == 0 || !self.n.is_multiple_of(k) {
            return Err(FieldError::NotADivisor { k, n: self.n });
        }
        Ok(self.frobenius(a, k as i64) == a)
    }

    /// Generator of the multiplicative group of GF(2^k), `g^((2^n-1)/(2^k-1))`.
    pub fn subfield_generator(&self, k: u32) -> Result<Elem, FieldError> {
        if k == 0 || !self.n.is_multiple_of(k) {
            return Err(FieldError::NotADivisor { k, n: self.n });
        }
        Ok(self.gen_pow((self.order() / ((1u64 << k) - 1)) as i64))
    }

    /// Whether `a` is a seventh power; needs `3 | n` so that `7 | 2^n - 1`.
    pub fn seventh_power_class(&self, a: Elem) -> Result<bool, FieldError> {
        if !self.n.is_multiple_of(3) {
            return Err(FieldError::DegreeNotMultipleOfThree(self.n));
        }
        if a.is_zero() {
            return Err(FieldError::ZeroElement);
        }
        Ok(self.pow(a, (self.order() / 7) as i64) == Elem::ONE)
    }

    /// Whether a nonzero `a` is a `d`-th power for `d | 2^n - 1`.
    pub fn is_dth_power(&self, a: Elem, d: u64) -> Result<bool, FieldError> {
        if a.is_zero() {
            return Err(FieldError::ZeroElement);
        }
        let ord = self.order();
        let g = gcd(d, ord);
        Ok(self.pow(a, (ord / g) as i64) == Elem::ONE)
    }

    /// Discrete logarithm to base `g` by a baby-step giant-step search.
    pub fn log(&self, a: Elem) -> Result<u64, FieldError> {
        if a.is_zero() {
            return Err(FieldError::ZeroElement);
        }
        let ord = self.order();
        let m = (ord as f64).sqrt().ceil() as u64;
        let mut baby = std::collections::HashMap::with_capacity(m as usize);
        let mut cur = Elem::ONE;
        for j in 0..m {
            baby.entry(cur).or_insert(j);
            cur = self.mul(cur, self.generator());
        }
        let giant = self.gen_pow(-(m as i64));
        let mut gamma = a;
        for i in 0..=m {
            if let Some(&j) = baby.get(&gamma) {
                return Ok((i * m + j) % ord);
            }
            gamma = self.mul(gamma, giant);
        }
        unreachable!("the generator is primitive")
    }

    /// Renders a nonzero element as `g^i`, or `0`.
    pub fn format_power(&self, a: Elem) -> String {
        match self.log(a) {
            Ok(0) => "1".to_string(),
            Ok(e) => format!("g^{e}"),
            Err(_) => "0".to_string(),
        }
    }
}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly_mod(mut a: u64, m: u64) -> u64 {
        let dm = 63 - m.leading_zeros();
        while a != 0 && 63 - a.leading_zeros() >= dm {
            a ^= m << (63 - a.leading_zeros() - dm);
        }
        a
    }

    fn irreducible_by_trial_division(m: u64) -> bool {
        let deg = 63 - m.leading_zeros();
        (2u64..1 << (deg / 2 + 1)).filter(|d| 63 - d.leading_zeros() <= deg / 2).all(|d| poly_mod(m, d) != 0)
    }

    fn brute_order(f: &FieldSpec, a: Elem) -> u64 {
        let mut c = a;
        let mut k = 1;
        while c != Elem::ONE {
            c = f.mul(c, a);
            k += 1;
        }
        k
    }

    #[test]
    fn quadratic_field_modulus() {
        assert_eq!(make_field(2).unwrap().modulus(), 0b111);
    }

    #[test]
    fn smallest_primitive_modulus_by_sieve() {
        for n in 2..=10u32 {
            let spec = make_field(n).unwrap();
            let expected = ((1u64 << n) + 1..1u64 << (n + 1))
                .step_by(2)
                .find(|&m| {
                    if !irreducible_by_trial_division(m) {
                        return false;
                    }
                    let f = FieldSpec { n, modulus: m as u32, factors: factorize((1 << n) - 1), trace_mask: 0 };
                    brute_order(&f, Elem(2)) == (1 << n) - 1
                })
                .unwrap();
            assert_eq!(spec.modulus() as u64, expected, "n = {n}");
        }
        assert_eq!(make_field(6).unwrap().modulus(), 0b1000011);
    }

    #[test]
    fn degree_range() {
        assert_eq!(make_field(25), Err(FieldError::DegreeOutOfRange(25)));
        assert_eq!(make_field(1), Err(FieldError::DegreeOutOfRange(1)));
        assert!(make_field(24).is_ok());
    }

    #[test]
    fn factor_list_multiplies_back() {
        for n in 2..=24 {
            let f = make_field(n).unwrap();
            let prod: u64 = f.factors().iter().map(|&(p, e)| p.pow(e)).product();
            assert_eq!(prod, f.order());
        }
    }

    #[test]
    fn small_multiplication() {
        let f = make_field(3).unwrap();
        assert_eq!(f.modulus(), 0b1011);
        assert_eq!(f.mul(Elem(0b010), Elem(0b100)), Elem(0b011));
    }

    #[test]
    fn inverse_and_lagrange() {
        let f = make_field(8).unwrap();
        for a in f.elements().skip(1) {
            assert_eq!(f.mul(a, f.inv(a).unwrap()), Elem::ONE);
            assert_eq!(f.pow(a, f.order() as i64), Elem::ONE);
        }
        assert_eq!(f.inv(Elem::ZERO), Err(FieldError::ZeroInverse));
        assert_eq!(f.pow(Elem::ZERO, 0), Elem::ONE);
        assert_eq!(f.pow(Elem::ZERO, 5), Elem::ZERO);
        assert!(f.try_pow(Elem::ZERO, -1).is_err());
    }

    #[test]
    fn negative_and_large_exponents() {
        let f = make_field(7).unwrap();
        let a = f.gen_pow(11);
        assert_eq!(f.pow(a, -1), f.inv(a).unwrap());
        assert_eq!(f.pow(a, 127 + 3), f.pow(a, 3));
    }

    #[test]
    fn frobenius_conventions() {
        let f = make_field(12).unwrap();
        for e in [1i64, 77, 1000, 4000] {
            let a = f.gen_pow(e);
            assert_eq!(f.frobenius(f.frobenius(a, -4), 4), a);
            assert_eq!(f.frobenius(a, 0), a);
            assert_eq!(f.frobenius(a, -4), f.pow(a, 256));
        }
    }

    #[test]
    fn frobenius_is_a_field_automorphism() {
        for n in 2..=8 {
            let f = make_field(n).unwrap();
            for a in f.elements() {
                assert_eq!(f.frobenius(a, n as i64), a);
                for b in f.elements().step_by(7) {
                    assert_eq!(f.frobenius(a + b, 1), f.frobenius(a, 1) + f.frobenius(b, 1));
                    assert_eq!(f.frobenius(f.mul(a, b), 1), f.mul(f.frobenius(a, 1), f.frobenius(b, 1)));
                }
            }
        }
    }

    #[test]
    fn trace_values() {
        let f6 = make_field(6).unwrap();
        assert!(!f6.trace(Elem::ZERO));
        assert!(!f6.trace(Elem::ONE));
        let f2 = make_field(2).unwrap();
        assert!(f2.trace(f2.generator()));
        let f5 = make_field(5).unwrap();
        assert!(f5.trace(Elem::ONE));
        for n in [3, 6, 9] {
            let f = make_field(n).unwrap();
            for a in f.elements() {
                assert_eq!(f.trace(a), f.trace_slow(a));
            }
        }
    }

    #[test]
    fn primitivity_matches_brute_order() {
        for n in 2..=8 {
            let f = make_field(n).unwrap();
            for a in f.elements().skip(1) {
                let ord = brute_order(&f, a);
                assert_eq!(f.is_primitive(a).unwrap(), ord == f.order());
                assert_eq!(f.order_of(a).unwrap(), ord);
            }
        }
        let f2 = make_field(2).unwrap();
        assert!(f2.is_primitive(Elem(2)).unwrap() && f2.is_primitive(Elem(3)).unwrap());
        let f6 = make_field(6).unwrap();
        assert!(!f6.is_primitive(Elem::ONE).unwrap());
        assert!(!f6.is_primitive(f6.gen_pow(7)).unwrap());
        assert_eq!(f6.is_primitive(Elem::ZERO), Err(FieldError::ZeroElement));
    }

    #[test]
    fn subfield_membership_counts() {
        for n in 2..=12u32 {
            let f = make_field(n).unwrap();
            for k in (1..=n).filter(|k| n % k == 0) {
                let count = f.elements().filter(|&a| f.in_subfield(a, k).unwrap()).count();
                assert_eq!(count, 1 << k, "n={n} k={k}");
            }
        }
        let f = make_field(12).unwrap();
        assert!(f.in_subfield(f.gen_pow(273), 4).unwrap());
        assert!(!f.in_subfield(f.generator(), 4).unwrap());
        assert!(f.in_subfield(Elem::ZERO, 3).unwrap() && f.in_subfield(Elem::ONE, 3).unwrap());
        assert_eq!(f.in_subfield(Elem::ONE, 5), Err(FieldError::NotADivisor { k: 5, n: 12 }));
        assert_eq!(f.subfield_generator(4).unwrap(), f.gen_pow(273));
    }

    #[test]
    fn seventh_power_counts() {
        for n in [3u32, 6, 9, 12] {
            let f = make_field(n).unwrap();
            let count = f.elements().skip(1).filter(|&a| f.seventh_power_class(a).unwrap()).count();
            assert_eq!(count as u64, f.order() / 7);
        }
        let f = make_field(6).unwrap();
        assert!(f.seventh_power_class(Elem::ONE).unwrap());
        assert!(!f.seventh_power_class(f.generator()).unwrap());
        for b in f.elements().skip(1) {
            assert!(f.seventh_power_class(f.pow(b, 7)).unwrap());
        }
        assert!(make_field(8).unwrap().seventh_power_class(Elem::ONE).is_err());
        assert!(f.seventh_power_class(Elem::ZERO).is_err());
    }

    #[test]
    fn element_text() {
        let f = make_field(6).unwrap();
        assert_eq!(f.parse_elem("0").unwrap(), Elem::ZERO);
        assert_eq!(f.parse_elem("1").unwrap(), Elem::ONE);
        assert_eq!(f.parse_elem("g^1").unwrap(), f.generator());
        assert_eq!(f.parse_elem("g^-1").unwrap(), f.inv(f.generator()).unwrap());
        assert_eq!(f.parse_elem("0x2b").unwrap(), Elem(0x2b));
        assert!(f.parse_elem("0x100").is_err());
        assert!(f.parse_elem("banana").is_err());
        assert_eq!(f.format_power(f.gen_pow(17)), "g^17");
        assert_eq!(f.log(f.gen_pow(62)).unwrap(), 62);
    }
}
