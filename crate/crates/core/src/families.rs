//! Validated constructors for the seven quadratic APN families.
//!
//! Families are numbered as in the usual survey list:
//!
//! 1. `x^(2^s+1) + α x^(2^(ik) + 2^(mk+s))`, n = 3k
//! 2. `x^(2^s+1) + α x^(2^(ik) + 2^(mk+s))`, n = 4k
//! 3. `α x^(2^s+1) + α^(2^k) x^(2^(k+s)+2^k) + β x^(2^k+1) + Σ γ_i x^(2^(k+i)+2^i)`, n = 2k
//! 4. `x^3 + Tr(x^9)`, any n
//! 5. `u x^(2^-k + 2^(k+s)) + u^(2^k) x^(2^s+1) + v x^(2^(k+s)+2^s)`, n = 3k
//! 6. the quadrinomial family 7 with `w = 0`
//! 7. `u^(2^k) x^(2^-k + 2^(k+s)) + u x^(2^s+1) + v x^(2^-k+1) + w u^(2^k+1) x^(2^(k+s)+2^s)`, n = 3k
//!
//! Exponents of the form `2^-k` are realized as `2^(n-k)`.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::gf2n::{gcd, make_field, Elem, FieldError, FieldSpec};
use crate::vbf::{FunctionSpec, Term, VbfError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BuildError {
    #[error("invalid parameters: {}", .0.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; "))]
    Invalid(Vec<Violation>),
    #[error("terms {first} and {second} both reduce to exponent {exp}")]
    ExponentCollision { first: usize, second: usize, exp: u64 },
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Function(#[from] VbfError),
}

/// One failed family condition.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    /// What went wrong, e.g. "k+s not divisible by 3".
    pub message: String,
    /// The family hypothesis it breaks, e.g. "3 | (k+s)".
    pub clause: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} [{}]", self.message, self.clause)
    }
}

/// Every parameter symbol used by the seven families. Unused fields stay `None`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct FamilyParams {
    pub family: u8,
    /// Extension degree; must match the family's relation to `k`.
    pub n: u32,
    pub k: Option<u32>,
    pub s: Option<u32>,
    pub i: Option<i64>,
    pub m: Option<i64>,
    pub u: Option<Elem>,
    pub t: Option<Elem>,
    pub alpha: Option<Elem>,
    pub beta: Option<Elem>,
    pub v: Option<Elem>,
    pub w: Option<Elem>,
    pub gamma: Vec<Elem>,
}

impl FamilyParams {
    pub fn family7(k: u32, s: u32, u: Elem, v: Elem, w: Elem) -> Self {
        FamilyParams {
            family: 7,
            n: 3 * k,
            k: Some(k),
            s: Some(s),
            u: Some(u),
            v: Some(v),
            w: Some(w),
            ..Default::default()
        }
    }

    pub fn family6(k: u32, s: u32, u: Elem, v: Elem) -> Self {
        FamilyParams { family: 6, n: 3 * k, k: Some(k), s: Some(s), u: Some(u), v: Some(v), ..Default::default() }
    }

    pub fn family5(k: u32, s: u32, u: Elem, v: Elem) -> Self {
        FamilyParams { family: 5, n: 3 * k, k: Some(k), s: Some(s), u: Some(u), v: Some(v), ..Default::default() }
    }

    pub fn family4(n: u32) -> Self {
        FamilyParams { family: 4, n, ..Default::default() }
    }

    pub fn family3(k: u32, s: u32, alpha: Elem, beta: Elem, gamma: Vec<Elem>) -> Self {
        FamilyParams {
            family: 3,
            n: 2 * k,
            k: Some(k),
            s: Some(s),
            alpha: Some(alpha),
            beta: Some(beta),
            gamma,
            ..Default::default()
        }
    }

    /// Family 2 with `i` and `m` derived from `s` and `k`.
    pub fn family2(k: u32, s: u32, t: Elem) -> Self {
        FamilyParams { family: 2, n: 4 * k, k: Some(k), s: Some(s), t: Some(t), ..Default::default() }
    }

    /// Family 1 with `i` and `m` derived from `s` and `k`.
    pub fn family1(k: u32, s: u32, t: Elem) -> Self {
        FamilyParams { family: 1, n: 3 * k, k: Some(k), s: Some(s), t: Some(t), ..Default::default() }
    }

    pub fn field(&self) -> Result<FieldSpec, FieldError> {
        make_field(self.n)
    }
}

struct Checker<'a> {
    field: Option<&'a FieldSpec>,
    out: Vec<Violation>,
}

impl Checker<'_> {
    fn fail(&mut self, message: impl Into<String>, clause: &str) {
        self.out.push(Violation { message: message.into(), clause: clause.to_string() });
    }

    fn require(&mut self, ok: bool, message: &str, clause: &str) {
        if !ok {
            self.fail(message, clause);
        }
    }

    fn int<T: Copy>(&mut self, v: Option<T>, name: &str) -> Option<T> {
        if v.is_none() {
            self.fail(format!("missing parameter {name}"), name);
        }
        v
    }

    fn primitive(&mut self, v: Option<Elem>, name: &str) {
        let Some(field) = self.field else { return };
        match v {
            None => self.fail(format!("missing parameter {name}"), name),
            Some(e) if e.is_zero() || !field.is_primitive(e).unwrap_or(false) => {
                self.fail(format!("{name} not primitive"), &format!("{name} primitive"))
            }
            Some(_) => {}
        }
    }

    fn subfield(&mut self, v: Option<Elem>, k: Option<u32>, name: &str) {
        let (Some(field), Some(k)) = (self.field, k) else { return };
        match v {
            None => self.fail(format!("missing parameter {name}"), name),
            Some(e) => {
                if !field.in_subfield(e, k).unwrap_or(false) {
                    self.fail(format!("{name} not in GF(2^{k})"), &format!("{name} ∈ GF(2^k)"));
                }
            }
        }
    }

    fn degree(&mut self, n: u32, expected: Option<u32>, relation: &str) {
        if let Some(e) = expected {
            if n != e {
                self.fail(format!("n = {n} but {relation} = {e}"), &format!("n = {relation}"));
            }
        }
    }
}

fn check_quadrinomial_hypotheses(c: &mut Checker<'_>, p: &FamilyParams) -> (Option<u32>, Option<u32>) {
    let k = c.int(p.k, "k");
    let s = c.int(p.s, "s");
    if let (Some(k), Some(s)) = (k, s) {
        c.require(k >= 1 && s >= 1, "k and s must be positive", "k, s > 0");
        c.degree(p.n, Some(3 * k), "3k");
        c.require((k + s) % 3 == 0, "k+s not divisible by 3", "3 | (k+s)");
        c.require(gcd(s as u64, 3 * k as u64) == 1, "gcd(s, 3k) must be 1", "(s,3k) = 1");
        c.require(k % 3 != 0, "3 must not divide k", "(3,k) = 1");
    }
    c.primitive(p.u, "u");
    (k, s)
}

/// Checks every family condition; empty iff [`build_family`] would succeed
/// (barring an exponent collision, which valid parameters never produce).
pub fn validate(p: &FamilyParams) -> Vec<Violation> {
    let field = make_field(p.n).ok();
    let mut c = Checker { field: field.as_ref(), out: Vec::new() };
    if field.is_none() {
        c.fail(format!("extension degree {} unsupported", p.n), "2 <= n <= 24");
    }
    match p.family {
        1 | 2 => {
            let (modulus, relation, two_k) = if p.family == 1 { (3i64, 3u32, "3k") } else { (4, 4, "4k") };
            let k = c.int(p.k, "k");
            let s = c.int(p.s, "s");
            if let (Some(k), Some(s)) = (k, s) {
                c.degree(p.n, Some(relation * k), two_k);
                c.require(k >= 3, "k must be at least 3", "k >= 3");
                if p.family == 1 {
                    c.require(k % 3 != 0, "3 must not divide k", "(k,3) = 1");
                    c.require(gcd(s as u64, 3 * k as u64) == 1, "gcd(s, 3k) must be 1", "(s,3k) = 1");
                } else {
                    c.require(k % 2 == 1, "k must be odd", "(k,2) = 1");
                    c.require(gcd(s as u64, 2 * k as u64) == 1, "gcd(s, 2k) must be 1", "(s,2k) = 1");
                }
                let sk = (s as i64 * k as i64).rem_euclid(modulus);
                if let Some(i) = p.i {
                    c.require(
                        i.rem_euclid(modulus) == sk,
                        &format!("i must be congruent to sk mod {modulus}"),
                        &format!("i ≡ sk mod {modulus}"),
                    );
                }
                if let (Some(m), Some(i)) = (p.m, p.i.or(Some(sk))) {
                    if p.family == 1 {
                        c.require(
                            m.rem_euclid(3) == (-i).rem_euclid(3),
                            "m must be congruent to -i mod 3",
                            "m ≡ -i mod 3",
                        );
                    } else {
                        c.require(m == 4 - i.rem_euclid(4), "m must equal 4 - i", "m = 4 - i");
                    }
                }
                if let (Some(field), Some(t), Some(alpha)) = (field.as_ref(), p.t, p.alpha) {
                    let expect = field.pow(t, (1i64 << k) - 1);
                    c.require(alpha == expect, "alpha must equal t^(2^k - 1)", "α = t^(2^k-1)");
                }
            }
            c.primitive(p.t, "t");
        }
        3 => {
            let k = c.int(p.k, "k");
            let s = c.int(p.s, "s");
            if let (Some(k), Some(s)) = (k, s) {
                c.degree(p.n, Some(2 * k), "2k");
                c.require(gcd(k as u64, s as u64) == 1, "gcd(k, s) must be 1", "(k,s) = 1");
                c.require(k % 2 == 1, "k must be odd", "k odd");
                c.require(s % 2 == 1, "s must be odd", "s odd");
                if p.gamma.len() != k.saturating_sub(1) as usize {
                    c.fail(
                        format!("expected {} gamma values, got {}", k.saturating_sub(1), p.gamma.len()),
                        "γ_1..γ_(k-1)",
                    );
                }
            }
            c.primitive(p.alpha, "alpha");
            c.primitive(p.beta, "beta");
            for (idx, g) in p.gamma.iter().enumerate() {
                c.subfield(Some(*g), k, &format!("gamma_{}", idx + 1));
            }
        }
        4 => {}
        5..=7 => {
            let (k, _) = check_quadrinomial_hypotheses(&mut c, p);
            c.subfield(p.v, k, "v");
            if p.family == 7 {
                c.subfield(p.w, k, "w");
                if let (Some(field), Some(v), Some(w)) = (field.as_ref(), p.v, p.w) {
                    c.require(field.mul(v, w) != Elem::ONE, "vw must differ from 1", "vw ≠ 1");
                }
            }
        }
        other => c.fail(format!("unknown family {other}"), "family ∈ 1..7"),
    }
    c.out
}

/// Raw `(coefficient, exponent)` list before canonicalization.
fn raw_terms(p: &FamilyParams, field: &FieldSpec) -> Vec<Term> {
    let n = field.n() as i64;
    let e2 = |i: i64| field.pow2(i);
    let sum = |a: i64, b: i64| (e2(a) + e2(b)) % field.order();
    let term = |coeff: Elem, exp: u64| Term { coeff, exp };
    match p.family {
        1 | 2 => {
            let (k, s) = (p.k.unwrap() as i64, p.s.unwrap() as i64);
            let modulus = if p.family == 1 { 3 } else { 4 };
            let i = p.i.unwrap_or(s * k).rem_euclid(modulus);
            let m = match (p.family, p.m) {
                (1, Some(m)) => m.rem_euclid(3),
                (1, None) => (-i).rem_euclid(3),
                (_, _) => 4 - i,
            };
            let t = p.t.unwrap();
            let alpha = p.alpha.unwrap_or_else(|| field.pow(t, (1i64 << k) - 1));
            vec![term(Elem::ONE, sum(s, 0)), term(alpha, sum(i * k % n, (m * k + s) % n))]
        }
        3 => {
            let (k, s) = (p.k.unwrap() as i64, p.s.unwrap() as i64);
            let alpha = p.alpha.unwrap();
            let mut out = vec![
                term(alpha, sum(s, 0)),
                term(field.frobenius(alpha, k), sum(k + s, k)),
                term(p.beta.unwrap(), sum(k, 0)),
            ];
            for (idx, &g) in p.gamma.iter().enumerate() {
                let i = idx as i64 + 1;
                out.push(term(g, sum(k + i, i)));
            }
            out
        }
        4 => {
            let mut out = vec![term(Elem::ONE, 3)];
            let order = field.order();
            out.extend((0..n).map(|i| term(Elem::ONE, (9 * e2(i)) % order)));
            out
        }
        5 => {
            let (k, s) = (p.k.unwrap() as i64, p.s.unwrap() as i64);
            let u = p.u.unwrap();
            vec![term(u, sum(-k, k + s)), term(field.frobenius(u, k), sum(s, 0)), term(p.v.unwrap(), sum(k + s, s))]
        }
        6 | 7 => {
            let (k, s) = (p.k.unwrap() as i64, p.s.unwrap() as i64);
            let u = p.u.unwrap();
            let w = if p.family == 6 { Elem::ZERO } else { p.w.unwrap() };
            let u2k = field.frobenius(u, k);
            vec![
                term(u2k, sum(-k, k + s)),
                term(u, sum(s, 0)),
                term(p.v.unwrap(), sum(-k, 0)),
                term(field.mul(w, field.mul(u2k, u)), sum(k + s, s)),
            ]
        }
        _ => unreachable!("validated"),
    }
}

fn find_collision(terms: &[Term]) -> Option<BuildError> {
    for a in 0..terms.len() {
        for b in a + 1..terms.len() {
            if terms[a].exp == terms[b].exp {
                return Some(BuildError::ExponentCollision { first: a, second: b, exp: terms[a].exp });
            }
        }
    }
    None
}

/// Builds the family member described by `p`.
///
/// Family 4 expands `Tr(x^9)` into its `n` conjugates and sums equal
/// monomials; every other family rejects two terms landing on one exponent.
pub fn build_family(p: &FamilyParams) -> Result<FunctionSpec, BuildError> {
    let violations = validate(p);
    if !violations.is_empty() {
        return Err(BuildError::Invalid(violations));
    }
    build_unchecked(p)
}

/// Builds without validating the parameter conditions. Only the structural
/// parameters need to be present; broken hypotheses (e.g. `vw = 1`) pass
/// through. Used to exhibit what goes wrong when a hypothesis fails.
pub fn build_unchecked(p: &FamilyParams) -> Result<FunctionSpec, BuildError> {
    let field = make_field(p.n)?;
    let missing = |name: &str| {
        BuildError::Invalid(vec![Violation { message: format!("missing parameter {name}"), clause: name.to_string() }])
    };
    let need = |ok: bool, name: &str| if ok { Ok(()) } else { Err(missing(name)) };
    match p.family {
        1 | 2 => {
            need(p.k.is_some(), "k")?;
            need(p.s.is_some(), "s")?;
            need(p.t.is_some(), "t")?;
        }
        3 => {
            need(p.k.is_some(), "k")?;
            need(p.s.is_some(), "s")?;
            need(p.alpha.is_some(), "alpha")?;
            need(p.beta.is_some(), "beta")?;
        }
        4 => {}
        5..=7 => {
            need(p.k.is_some(), "k")?;
            need(p.s.is_some(), "s")?;
            need(p.u.is_some(), "u")?;
            need(p.v.is_some(), "v")?;
            need(p.family != 7 || p.w.is_some(), "w")?;
        }
        other => {
            return Err(BuildError::Invalid(vec![Violation {
                message: format!("unknown family {other}"),
                clause: "family ∈ 1..7".into(),
            }]))
        }
    }
    let terms = raw_terms(p, &field);
    if p.family != 4 {
        if let Some(e) = find_collision(&terms) {
            return Err(e);
        }
    }
    Ok(FunctionSpec::from_elems(&field, terms)?)
}

/// Parses a subfield parameter: either ordinary element text, or `s^i` for
/// the `i`-th power of the canonical generator of GF(2^k).
pub fn parse_subfield_elem(field: &FieldSpec, k: u32, text: &str) -> Result<Elem, FieldError> {
    match text.trim().strip_prefix("s^") {
        Some(e) => {
            let e: i64 = e.trim().parse().map_err(|_| FieldError::Parse(text.to_string()))?;
            Ok(field.pow(field.subfield_generator(k)?, e))
        }
        None => field.parse_elem(text),
    }
}

/// The four n = 12 example functions (k = 4, s = 5, u = g), in table order:
/// quadrinomial (v = 1, w = u^273), trinomial (v = 1, w = 0),
/// trinomial (v = 0, w = u^273), binomial (v = w = 0).
pub fn example_table_n12() -> Vec<FunctionSpec> {
    let field = make_field(12).expect("n = 12 is supported");
    let u = field.generator();
    let w = field.gen_pow(273);
    [(Elem::ONE, w), (Elem::ONE, Elem::ZERO), (Elem::ZERO, w), (Elem::ZERO, Elem::ZERO)]
        .into_iter()
        .map(|(v, w)| build_family(&FamilyParams::family7(4, 5, u, v, w)).expect("table parameters are valid"))
        .collect()
}

/// The four n = 6 shapes (k = 2, s = 1) for a primitive `u` and `v, w` in GF(4):
/// `u x^3 + w u^5 x^10 + v x^17 + u^4 x^24`, then with `w = 0`, with `v = 0`,
/// and with `v = w = 0`.
pub fn quadrinomial_forms_n6(u: Elem, v: Elem, w: Elem) -> Result<Vec<FunctionSpec>, BuildError> {
    [(v, w), (v, Elem::ZERO), (Elem::ZERO, w), (Elem::ZERO, Elem::ZERO)]
        .into_iter()
        .map(|(v, w)| build_family(&FamilyParams::family7(2, 1, u, v, w)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::vbf::{algebraic_degree, differential_uniformity, differential_uniformity_quadratic};

    fn terms_of(f: &FunctionSpec) -> Vec<(Elem, u64)> {
        f.terms().unwrap().iter().map(|t| (t.coeff, t.exp)).collect()
    }

    #[test]
    fn quadrinomial_n12_matches_table_row() {
        let field = make_field(12).unwrap();
        let u = field.generator();
        let f = build_family(&FamilyParams::family7(4, 5, u, Elem::ONE, field.gen_pow(273))).unwrap();
        let mut expected = vec![(field.gen_pow(16), 768), (u, 33), (Elem::ONE, 257), (field.gen_pow(290), 544)];
        expected.sort_by_key(|&(_, e)| e);
        assert_eq!(terms_of(&f), expected);
    }

    #[test]
    fn quadrinomial_n6_exponents() {
        let field = make_field(6).unwrap();
        let u = field.gen_pow(5);
        let v = field.subfield_generator(2).unwrap();
        let w = field.mul(v, v);
        // v * w = v^3 = 1 is forbidden, so use w = v instead.
        let f = build_family(&FamilyParams::family7(2, 1, u, v, v)).unwrap();
        let expected = vec![(u, 3), (field.mul(v, field.pow(u, 5)), 10), (v, 17), (field.pow(u, 4), 24)];
        assert_eq!(terms_of(&f), expected);
        assert!(matches!(
            build_family(&FamilyParams::family7(2, 1, u, v, w)),
            Err(BuildError::Invalid(ref v)) if v[0].message == "vw must differ from 1"
        ));
    }

    #[test]
    fn condition_messages() {
        let field = make_field(12).unwrap();
        let u = field.generator();
        let bad = FamilyParams::family7(4, 1, u, Elem::ONE, Elem::ZERO);
        let msgs: Vec<_> = validate(&bad).into_iter().map(|v| v.message).collect();
        assert_eq!(msgs, vec!["k+s not divisible by 3"]);

        let vw = FamilyParams::family7(4, 5, u, Elem::ONE, Elem::ONE);
        assert_eq!(validate(&vw).into_iter().map(|v| v.message).collect::<Vec<_>>(), vec!["vw must differ from 1"]);

        let not_prim = FamilyParams::family7(4, 5, field.gen_pow(3), Elem::ZERO, Elem::ZERO);
        assert_eq!(validate(&not_prim)[0].message, "u not primitive");

        let not_sub = FamilyParams::family7(4, 5, u, u, Elem::ZERO);
        assert_eq!(validate(&not_sub)[0].message, "v not in GF(2^4)");

        assert!(validate(&FamilyParams::family1(4, 1, u)).is_empty());

        let f6 = make_field(6).unwrap();
        let even_k = FamilyParams::family3(2, 1, f6.generator(), f6.generator(), vec![Elem::ONE]);
        let msgs: Vec<_> = validate(&FamilyParams { n: 4, ..even_k }).into_iter().map(|v| v.message).collect();
        assert!(msgs.contains(&"k must be odd".to_string()), "{msgs:?}");
    }

    #[test]
    fn family6_is_family7_with_zero_w() {
        let field = make_field(12).unwrap();
        let u = field.gen_pow(11);
        let v = field.gen_pow(273 * 3);
        let f6 = build_family(&FamilyParams::family6(4, 5, u, v)).unwrap();
        let f7 = build_family(&FamilyParams::family7(4, 5, u, v, Elem::ZERO)).unwrap();
        assert_eq!(f6, f7);
    }

    #[test]
    fn family4_trace_expansion() {
        for n in [5u32, 7, 8, 9, 10, 12] {
            let f = build_family(&FamilyParams::family4(n)).unwrap();
            assert_eq!(f.terms().unwrap().len(), n as usize + 1, "n = {n}");
            assert_eq!(algebraic_degree(&f), 2);
            let field = f.field();
            for x in field.elements().step_by(37) {
                let tr = field.trace(field.pow(x, 9));
                let expect = field.pow(x, 3) + if tr { Elem::ONE } else { Elem::ZERO };
                assert_eq!(f.eval(x), expect);
            }
        }
        // At n = 6 the conjugates of x^9 pair up and cancel.
        let f = build_family(&FamilyParams::family4(6)).unwrap();
        assert_eq!(f.terms().unwrap(), &[Term { coeff: Elem::ONE, exp: 3 }]);
    }

    #[test]
    fn family1_and_2_at_n12_are_apn() {
        let field = make_field(12).unwrap();
        let t = field.generator();
        for s in [1u32, 5, 7, 11] {
            let f = build_family(&FamilyParams::family1(4, s, t)).unwrap();
            assert_eq!(differential_uniformity_quadratic(&f).unwrap(), 2, "family 1, s = {s}");
        }
        for s in [1u32, 5] {
            let f = build_family(&FamilyParams::family2(3, s, t)).unwrap();
            assert_eq!(differential_uniformity_quadratic(&f).unwrap(), 2, "family 2, s = {s}");
        }
    }

    #[test]
    fn family3_builds_with_expected_shape() {
        let field = make_field(6).unwrap();
        let a = field.generator();
        let gamma = vec![field.subfield_generator(3).unwrap(), Elem::ONE];
        let f = build_family(&FamilyParams::family3(3, 1, a, field.gen_pow(5), gamma)).unwrap();
        let exps: Vec<u64> = f.terms().unwrap().iter().map(|t| t.exp).collect();
        // 2^1+1, 2^4+2^3, 2^3+1, 2^4+2, 2^5+4
        assert_eq!(exps, vec![3, 9, 18, 24, 36]);
        assert_eq!(algebraic_degree(&f), 2);
    }

    #[test]
    fn table_and_forms() {
        let rows = example_table_n12();
        assert_eq!(rows.iter().map(|f| f.terms().unwrap().len()).collect::<Vec<_>>(), vec![4, 3, 3, 2]);
        for f in &rows {
            assert_eq!(differential_uniformity_quadratic(f).unwrap(), 2);
        }
        let field = make_field(6).unwrap();
        let u = field.generator();
        let v = field.subfield_generator(2).unwrap();
        let forms = quadrinomial_forms_n6(u, v, v).unwrap();
        assert_eq!(forms[3].terms().unwrap(), &[Term { coeff: u, exp: 3 }, Term { coeff: field.pow(u, 4), exp: 24 }]);
        assert_eq!(forms[1].terms().unwrap().iter().map(|t| t.exp).collect::<Vec<_>>(), vec![3, 17, 24]);
        assert_eq!(forms[2].terms().unwrap()[1], Term { coeff: field.mul(v, field.pow(u, 5)), exp: 10 });
        for f in &forms {
            assert_eq!(differential_uniformity(f).unwrap(), 2);
        }
    }

    #[test]
    fn subfield_text() {
        let field = make_field(12).unwrap();
        assert_eq!(parse_subfield_elem(&field, 4, "s^1").unwrap(), field.gen_pow(273));
        assert_eq!(parse_subfield_elem(&field, 4, "g^273").unwrap(), field.gen_pow(273));
    }
}
