//! Numeric verification, at concrete parameters, of each step of the APN
//! argument for the quadrinomial family 7
//! `F(x) = u^(2^k) x^(2^-k + 2^(k+s)) + u x^(2^s+1) + v x^(2^-k+1) + w u^(2^k+1) x^(2^(k+s)+2^s)`.
//!
//! For `q != 0` the substitution `x -> xq` turns `F(x+q) + F(x) + F(q)` into
//! the linearized polynomial
//! `Δ(x) = A x + B x^(2^-k) + C x^(2^s) + D x^(2^(k+s))`, and the argument
//! shows its roots are exactly `{0, 1}`. Every identity used on the way is
//! checked here as an equation between field elements. Identities that are
//! GF(2)-linear in `x` are checked on a basis, which covers every `x`.
//!
//! Exponents printed as `x^(-k)`, `x^(k+s)`, `x^k`, `A^(-k)` and `a^(-s)` in
//! the usual display of the argument are read as the Frobenius powers
//! `x^(2^-k)`, `x^(2^(k+s))`, `x^(2^k)`, `A^(2^-k)` and `a^(2^-s)`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bitmatrix::{get_bit, BitMatrix};
use crate::families::{build_unchecked, validate, BuildError, FamilyParams, Violation};
use crate::gf2n::{make_field, Elem, FieldError, FieldSpec};
use crate::vbf::{differential_row, FunctionSpec};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ProofError {
    #[error("the proof suite covers family 7 (and family 6 as w = 0), got family {0}")]
    WrongFamily(u8),
    #[error("q must be nonzero")]
    ZeroQ,
    #[error("theta must be a nonzero (2^k-1)-th power")]
    NotAPower,
    #[error("degree n = {n} is not 3k for k = {k}")]
    BadDegree { n: u32, k: u32 },
    #[error("invalid parameters: {}", .0.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; "))]
    Invalid(Vec<Violation>),
    #[error("context invariant violated at q = {q}: {what}")]
    Invariant { q: Elem, what: String },
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Build(#[from] BuildError),
}

/// Family-7 parameters unpacked for arithmetic.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadParams {
    pub k: u32,
    pub s: u32,
    pub u: Elem,
    pub v: Elem,
    pub w: Elem,
}

impl QuadParams {
    pub fn from_family(p: &FamilyParams) -> Result<Self, ProofError> {
        if p.family != 7 && p.family != 6 {
            return Err(ProofError::WrongFamily(p.family));
        }
        let missing = |name: &str| {
            ProofError::Invalid(vec![Violation { message: format!("missing parameter {name}"), clause: name.into() }])
        };
        Ok(QuadParams {
            k: p.k.ok_or_else(|| missing("k"))?,
            s: p.s.ok_or_else(|| missing("s"))?,
            u: p.u.ok_or_else(|| missing("u"))?,
            v: p.v.ok_or_else(|| missing("v"))?,
            w: if p.family == 6 { Elem::ZERO } else { p.w.ok_or_else(|| missing("w"))? },
        })
    }
}

/// The coefficients of `Δ` for one `q`, plus `a = u^(2^k-1) q^(2^-k + 2^(k+s) - 2^s - 1)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProofContext {
    pub params: FamilyParams,
    pub q: Elem,
    pub a: Elem,
    pub b: Elem,
    pub c: Elem,
    pub d: Elem,
    pub a_value: Elem,
}

/// Frobenius-exponent helper bound to one field and `(k, s)`.
struct Ex<'a> {
    f: &'a FieldSpec,
}

impl Ex<'_> {
    fn p2(&self, i: i64) -> i64 {
        self.f.pow2(i) as i64
    }

    fn pw(&self, x: Elem, e: i64) -> Elem {
        self.f.pow(x, e)
    }

    fn fr(&self, x: Elem, i: i64) -> Elem {
        self.f.frobenius(x, i)
    }

    fn mul(&self, x: Elem, y: Elem) -> Elem {
        self.f.mul(x, y)
    }

    fn mul3(&self, x: Elem, y: Elem, z: Elem) -> Elem {
        self.f.mul(self.f.mul(x, y), z)
    }

    fn div(&self, x: Elem, y: Elem) -> Option<Elem> {
        self.f.div(x, y).ok()
    }
}

fn coefficients(field: &FieldSpec, p: &QuadParams, q: Elem) -> [Elem; 5] {
    let e = Ex { f: field };
    let (k, s) = (p.k as i64, p.s as i64);
    let vq = e.mul(p.v, e.pw(q, e.p2(-k) + 1));
    let uq = e.mul(p.u, e.pw(q, e.p2(s) + 1));
    let ukq = e.mul(e.fr(p.u, k), e.pw(q, e.p2(-k) + e.p2(k + s)));
    let wq = e.mul3(p.w, e.pw(p.u, e.p2(k) + 1), e.pw(q, e.p2(k + s) + e.p2(s)));
    let a_value = e.mul(e.pw(p.u, e.p2(k) - 1), e.pw(q, e.p2(-k) + e.p2(k + s) - e.p2(s) - 1));
    [vq + uq, vq + ukq, wq + uq, wq + ukq, a_value]
}

/// Computes `A, B, C, D` and `a` without checking anything.
pub fn make_context_unchecked(params: &FamilyParams, q: Elem) -> Result<ProofContext, ProofError> {
    if q.is_zero() {
        return Err(ProofError::ZeroQ);
    }
    let qp = QuadParams::from_family(params)?;
    let field = params.field()?;
    let [a, b, c, d, a_value] = coefficients(&field, &qp, q);
    Ok(ProofContext { params: params.clone(), q, a, b, c, d, a_value })
}

impl ProofContext {
    /// Names of the context invariants that fail.
    pub fn invariant_failures(&self, field: &FieldSpec) -> Vec<&'static str> {
        let mut out = Vec::new();
        if self.a + self.b + self.c + self.d != Elem::ZERO {
            out.push("A+B+C+D = 0");
        }
        if [self.a, self.b, self.c, self.d].iter().any(|x| x.is_zero()) {
            out.push("A, B, C, D nonzero");
        }
        if self.a_value.is_zero() || field.seventh_power_class(self.a_value).unwrap_or(true) {
            out.push("a not a seventh power");
        }
        out
    }

    /// `Δ(x)` evaluated directly from the coefficients.
    pub fn delta(&self, field: &FieldSpec, x: Elem) -> Elem {
        let (k, s) = (self.k() as i64, self.s() as i64);
        field.mul(self.a, x)
            + field.mul(self.b, field.frobenius(x, -k))
            + field.mul(self.c, field.frobenius(x, s))
            + field.mul(self.d, field.frobenius(x, k + s))
    }

    fn k(&self) -> u32 {
        self.params.k.expect("context built from family 7")
    }

    fn s(&self) -> u32 {
        self.params.s.expect("context built from family 7")
    }
}

/// Validated context; the invariants are checked and any failure is an error.
pub fn make_context(params: &FamilyParams, q: Elem) -> Result<ProofContext, ProofError> {
    let violations = validate(params);
    if !violations.is_empty() {
        return Err(ProofError::Invalid(violations));
    }
    let ctx = make_context_unchecked(params, q)?;
    let field = params.field()?;
    if let Some(what) = ctx.invariant_failures(&field).first() {
        return Err(ProofError::Invariant { q, what: what.to_string() });
    }
    Ok(ctx)
}

/// Every element of the GF(2)-span of the given kernel vectors.
fn span_elems(basis: &[Vec<u64>], n: u32) -> Vec<Elem> {
    let vecs: Vec<u32> =
        basis.iter().map(|v| (0..n as usize).filter(|&i| get_bit(v, i)).fold(0u32, |acc, i| acc | 1 << i)).collect();
    let mut out: Vec<Elem> = (0..1u32 << vecs.len())
        .map(|sel| Elem(vecs.iter().enumerate().filter(|&(i, _)| sel >> i & 1 == 1).fold(0, |acc, (_, &v)| acc ^ v)))
        .collect();
    out.sort();
    out
}

/// Root set of `Δ`, as the kernel of its `n x n` GF(2) matrix; sorted.
pub fn delta_roots(field: &FieldSpec, ctx: &ProofContext) -> Vec<Elem> {
    let n = field.n();
    let images: Vec<u64> = (0..n).map(|i| ctx.delta(field, Elem(1 << i)).0 as u64).collect();
    let m = BitMatrix::from_columns(&images, n as usize);
    span_elems(&m.kernel_basis(), n)
}

/// `L_θ(T) = T + θ T^(2^k) + θ^(2^k+1) T^(2^-k)`.
pub fn annihilator(field: &FieldSpec, k: u32, theta: Elem, t: Elem) -> Elem {
    let k = k as i64;
    t + field.mul(theta, field.frobenius(t, k))
        + field.mul(field.pow(theta, field.pow2(k) as i64 + 1), field.frobenius(t, -k))
}

/// Whether `L_θ(θx + x^(2^-k)) = 0` for every `x` in `sample`. Requires
/// `n = 3k` and `θ` a nonzero `(2^k-1)`-th power.
pub fn check_annihilator(field: &FieldSpec, k: u32, theta: Elem, sample: &[Elem]) -> Result<bool, ProofError> {
    if k == 0 || field.n() != 3 * k {
        return Err(ProofError::BadDegree { n: field.n(), k });
    }
    if theta.is_zero() || !field.is_dth_power(theta, (1u64 << k) - 1)? {
        return Err(ProofError::NotAPower);
    }
    Ok(sample.iter().all(|&x| {
        let t = field.mul(theta, x) + field.frobenius(x, -(k as i64));
        annihilator(field, k, theta, t).is_zero()
    }))
}

/// `a` is neither 1 nor a seventh power, and agrees with its factored form
/// `u^(2^k-1) q^((2^(k+s)-1)(1-2^-k))`.
pub fn check_seventh_power_obstruction(field: &FieldSpec, ctx: &ProofContext) -> bool {
    let Ok(p) = QuadParams::from_family(&ctx.params) else { return false };
    let e = Ex { f: field };
    let (k, s) = (p.k as i64, p.s as i64);
    let order = field.order() as i128;
    let exp = ((e.p2(k + s) as i128 - 1) * (1 - e.p2(-k) as i128)).rem_euclid(order) as i64;
    let factored = e.mul(e.pw(p.u, e.p2(k) - 1), e.pw(ctx.q, exp));
    ctx.a_value == factored
        && ctx.a_value != Elem::ONE
        && !ctx.a_value.is_zero()
        && field.seventh_power_class(ctx.a_value).is_ok_and(|b| !b)
}

/// Left sides of the two derived equations at `x`:
/// `(1 + a^(-2^(k-s))) x + (a^(2^-s) + a^(-2^(k-s))) x^(2^k) + (1 + a^(2^-s)) x^(2^-k)` and
/// `(1 + a^(-2^-k)) x + (1 + a) x^(2^k) + (a + a^(-2^-k)) x^(2^-k)`.
pub fn derived_equation_residuals(field: &FieldSpec, ctx: &ProofContext, x: Elem) -> (Elem, Elem) {
    let [c1, c2] = derived_equation_coefficients(field, ctx);
    let k = ctx.k() as i64;
    let mons = [x, field.frobenius(x, k), field.frobenius(x, -k)];
    let eval = |c: [Elem; 3]| (0..3).fold(Elem::ZERO, |acc, i| acc + field.mul(c[i], mons[i]));
    (eval(c1), eval(c2))
}

fn derived_equation_coefficients(field: &FieldSpec, ctx: &ProofContext) -> [[Elem; 3]; 2] {
    let e = Ex { f: field };
    let (k, s) = (ctx.k() as i64, ctx.s() as i64);
    let a = ctx.a_value;
    let ia = field.inv(a).unwrap_or(Elem::ZERO);
    let one = Elem::ONE;
    [
        [one + e.fr(ia, k - s), e.fr(a, -s) + e.fr(ia, k - s), one + e.fr(a, -s)],
        [one + e.fr(ia, -k), one + a, a + e.fr(ia, -k)],
    ]
}

/// The combination coefficient
/// `(1 + a^(-2^(k-s)))(a + a^(-2^-k)) + (1 + a^(-2^-k))(1 + a^(2^-s))`.
pub fn combination_coefficient(field: &FieldSpec, ctx: &ProofContext) -> Elem {
    let [c1, c2] = derived_equation_coefficients(field, ctx);
    field.mul(c1[0], c2[2]) + field.mul(c2[0], c1[2])
}

/// One named check in the suite.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Step {
    /// `F(xq) + F(xq + q) + F(q) = Δ(x)`.
    Substitution,
    CoefficientSum,
    CoefficientsNonzero,
    /// `A/B = (v + u q^(2^s - 2^-k))^(1-2^k)`.
    PowerFormAb,
    /// `C/D = (w + u^-1 q^(2^-k - 2^s))^(2^k-1)`.
    PowerFormCd,
    AnnihilatorAb,
    /// For both `θ = C/D` and `θ = D/C`.
    AnnihilatorCd,
    /// Coefficients of `B^(2^-k+2^k+1) L_(A/B)(C/B x^(2^s) + D/B x^(2^(k+s)))`.
    ExpansionAb,
    /// The same coefficients in their `(vw+1)`-factored form.
    FactoredExpansion,
    /// The first derived equation is proportional to the `2^-s` power of the expansion.
    DerivedAb,
    /// The second derived equation is proportional to `L_(D/C)(A/C x + B/C x^(2^-k))`.
    DerivedCd,
    /// Both coefficients of the combined equation agree and are nonzero.
    Combination,
    SeventhPower,
    /// `Δ(x) = (u q^(2^s+1) + u^(2^k) q^(2^-k+2^(k+s)))(x + x^(2^s))` on GF(2^k).
    SubfieldIdentity,
    /// Root set of `Δ` is `{0, 1}`; both derived equations vanish on it.
    DeltaRoots,
    /// Largest solution count of `F(x+q) + F(x) = p` equals `|roots|`.
    PerQUniformity,
}

impl Step {
    pub const ALL: [Step; 16] = [
        Step::Substitution,
        Step::CoefficientSum,
        Step::CoefficientsNonzero,
        Step::PowerFormAb,
        Step::PowerFormCd,
        Step::AnnihilatorAb,
        Step::AnnihilatorCd,
        Step::ExpansionAb,
        Step::FactoredExpansion,
        Step::DerivedAb,
        Step::DerivedCd,
        Step::Combination,
        Step::SeventhPower,
        Step::SubfieldIdentity,
        Step::DeltaRoots,
        Step::PerQUniformity,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Step::Substitution => "substitution",
            Step::CoefficientSum => "coefficient_sum",
            Step::CoefficientsNonzero => "coefficients_nonzero",
            Step::PowerFormAb => "power_form_ab",
            Step::PowerFormCd => "power_form_cd",
            Step::AnnihilatorAb => "annihilator_ab",
            Step::AnnihilatorCd => "annihilator_cd",
            Step::ExpansionAb => "expansion_ab",
            Step::FactoredExpansion => "factored_expansion",
            Step::DerivedAb => "derived_ab",
            Step::DerivedCd => "derived_cd",
            Step::Combination => "combination",
            Step::SeventhPower => "seventh_power",
            Step::SubfieldIdentity => "subfield_identity",
            Step::DeltaRoots => "delta_roots",
            Step::PerQUniformity => "per_q_uniformity",
        }
    }
}

/// Cross-multiplied proportionality of two nonzero coefficient triples.
fn proportional(f: &FieldSpec, x: [Elem; 3], y: [Elem; 3]) -> bool {
    let nonzero = |t: [Elem; 3]| t.iter().any(|e| !e.is_zero());
    nonzero(x) && nonzero(y) && (0..3).all(|i| (0..3).all(|j| f.mul(x[i], y[j]) == f.mul(x[j], y[i])))
}

/// Outcome of every step for one `q`, in [`Step::ALL`] order.
pub fn check_q(field: &FieldSpec, f: &FunctionSpec, p: &QuadParams, params: &FamilyParams, q: Elem) -> [bool; 16] {
    let ctx = make_context_unchecked(params, q).expect("q nonzero and params unpacked");
    let e = Ex { f: field };
    let (k, s) = (p.k as i64, p.s as i64);
    let n = field.n();
    let basis: Vec<Elem> = (0..n).map(|i| Elem(1 << i)).collect();
    let (a, b, c, d) = (ctx.a, ctx.b, ctx.c, ctx.d);
    let t = f.table();
    let mut out = [false; 16];
    let mut put = |step: Step, ok: bool| out[Step::ALL.iter().position(|&s| s == step).unwrap()] = ok;

    put(
        Step::Substitution,
        basis.iter().all(|&x| {
            let xq = e.mul(x, q);
            t[xq.0 as usize] + t[(xq + q).0 as usize] + t[q.0 as usize] + t[0] == ctx.delta(field, x)
        }),
    );
    put(Step::CoefficientSum, a + b + c + d == Elem::ZERO);
    put(Step::CoefficientsNonzero, [a, b, c, d].iter().all(|x| !x.is_zero()));

    let x_ab = p.v + e.mul(p.u, e.pw(q, e.p2(s) - e.p2(-k)));
    let y_cd = p.w + e.mul(field.inv(p.u).unwrap_or(Elem::ZERO), e.pw(q, e.p2(-k) - e.p2(s)));
    let theta_ab = e.div(a, b);
    let theta_cd = e.div(c, d);
    put(Step::PowerFormAb, !x_ab.is_zero() && theta_ab == Some(e.pw(x_ab, 1 - e.p2(k))));
    put(Step::PowerFormCd, !y_cd.is_zero() && theta_cd == Some(e.pw(y_cd, e.p2(k) - 1)));
    let annih = |theta: Option<Elem>| match theta {
        Some(th) if !th.is_zero() => check_annihilator(field, p.k, th, &basis).unwrap_or(false),
        _ => false,
    };
    put(Step::AnnihilatorAb, annih(theta_ab));
    put(Step::AnnihilatorCd, annih(theta_cd) && annih(e.div(d, c)));

    // Expansion of B^(2^-k+2^k+1) L_θ(C/B x^(2^s) + D/B x^(2^(k+s))) on the
    // monomials x^(2^s), x^(2^(k+s)), x^(2^(s-k)).
    let bk = e.pw(b, e.p2(-k) + e.p2(k));
    let ak1 = e.pw(a, e.p2(k) + 1);
    let stated_expansion = [
        e.mul(bk, c) + e.mul(e.fr(d, -k), ak1),
        e.mul(bk, d) + e.mul3(e.fr(b, -k), a, e.fr(c, k)),
        e.mul3(e.fr(b, -k), a, e.fr(d, k)) + e.mul(ak1, e.fr(c, -k)),
    ];
    let expansion_ok = theta_ab.is_some_and(|th| {
        let bscale = e.pw(b, e.p2(-k) + e.p2(k) + 1);
        let (cb, db) = (e.div(c, b).unwrap(), e.div(d, b).unwrap());
        let via_l = |x: Elem| annihilator(field, p.k, th, e.mul(cb, e.fr(x, s)) + e.mul(db, e.fr(x, k + s)));
        basis.iter().all(|&x| {
            let direct = e.mul(bscale, via_l(x));
            let mons = [e.fr(x, s), e.fr(x, k + s), e.fr(x, s - k)];
            let claimed = (0..3).fold(Elem::ZERO, |acc, i| acc + e.mul(stated_expansion[i], mons[i]));
            direct == claimed
        })
    });
    put(Step::ExpansionAb, expansion_ok);

    let vw1 = e.mul(p.v, p.w) + Elem::ONE;
    let common = e.mul(p.v, e.fr(q, -k)) + e.mul(p.u, e.fr(q, s));
    let uk = e.fr(p.u, k);
    let umk = e.fr(p.u, -k);
    let factored = [
        e.mul3(
            e.mul3(vw1, p.u, e.pw(q, e.p2(k) + 1 + e.p2(s))),
            common,
            e.mul(uk, e.pw(q, e.p2(k + s) + e.p2(k))) + e.mul(umk, e.pw(q, e.p2(s - k) + 1)),
        ),
        e.mul3(
            e.mul3(vw1, uk, e.pw(q, e.p2(k) + 1 + e.p2(k + s))),
            common,
            e.mul(p.u, e.pw(q, e.p2(k) + e.p2(s))) + e.mul(umk, e.pw(q, e.p2(s - k) + e.p2(-k))),
        ),
        e.mul3(
            e.mul3(vw1, umk, e.pw(q, e.p2(k) + 1 + e.p2(s - k))),
            common,
            e.mul(uk, e.pw(q, e.p2(k + s) + e.p2(-k))) + e.mul(p.u, e.pw(q, e.p2(s) + 1)),
        ),
    ];
    put(Step::FactoredExpansion, factored == stated_expansion);

    let [c1, c2] = derived_equation_coefficients(field, &ctx);
    let eq1_target = stated_expansion.map(|x| e.fr(x, -s));
    put(Step::DerivedAb, !ctx.a_value.is_zero() && proportional(field, c1, eq1_target));
    // The C, D part of Δ/C is D/C x^(2^(k+s)) + x^(2^s), which L_(D/C) kills,
    // so the second derived equation comes from L_(D/C)(A/C x + B/C x^(2^-k)).
    let eq2_ok = match (e.div(d, c), e.div(a, c), e.div(b, c)) {
        (Some(th), Some(al), Some(be)) => {
            let thk1 = e.pw(th, e.p2(k) + 1);
            let h = [
                al + e.mul(th, e.fr(be, k)),
                e.mul(th, e.fr(al, k)) + e.mul(thk1, e.fr(be, -k)),
                be + e.mul(thk1, e.fr(al, -k)),
            ];
            !ctx.a_value.is_zero() && proportional(field, c2, h)
        }
        _ => false,
    };
    put(Step::DerivedCd, eq2_ok);
    let k_coeff = combination_coefficient(field, &ctx);
    let k_other = e.mul(c1[1], c2[2]) + e.mul(c2[1], c1[2]);
    put(Step::Combination, !k_coeff.is_zero() && k_coeff == k_other);
    put(Step::SeventhPower, check_seventh_power_obstruction(field, &ctx));

    let lead = e.mul(p.u, e.pw(q, e.p2(s) + 1)) + e.mul(uk, e.pw(q, e.p2(-k) + e.p2(k + s)));
    let subfield_ok = match field.subfield_generator(p.k) {
        Ok(gk) => {
            let mut x = Elem::ONE;
            let mut ok = ctx.delta(field, Elem::ZERO).is_zero();
            for _ in 0..(1u64 << p.k) - 1 {
                ok &= ctx.delta(field, x) == e.mul(lead, x + e.fr(x, s));
                x = e.mul(x, gk);
            }
            ok
        }
        Err(_) => false,
    };
    put(Step::SubfieldIdentity, subfield_ok);

    let roots = delta_roots(field, &ctx);
    let residuals_vanish = roots.iter().all(|&x| {
        let (r1, r2) = derived_equation_residuals(field, &ctx, x);
        r1.is_zero() && r2.is_zero()
    });
    put(Step::DeltaRoots, roots == [Elem::ZERO, Elem::ONE] && residuals_vanish);
    let row_max = differential_row(f, q).into_iter().max().unwrap_or(0) as usize;
    put(Step::PerQUniformity, row_max == roots.len());
    out
}

/// How the nonzero `q` are chosen.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum QMode {
    Exhaustive,
    Sampled { count: u64, seed: u64 },
}

impl QMode {
    /// Exhaustive up to `n = 9`, otherwise `count` seeded samples.
    pub fn default_for(n: u32, count: u64, seed: u64) -> Self {
        if n <= 9 {
            QMode::Exhaustive
        } else {
            QMode::Sampled { count, seed }
        }
    }

    pub fn qs(&self, field: &FieldSpec) -> Vec<Elem> {
        match *self {
            QMode::Exhaustive => field.elements().skip(1).collect(),
            QMode::Sampled { count, seed } => {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                (0..count).map(|_| Elem(rng.gen_range(1..field.size() as u32))).collect()
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StepResult {
    pub step: Step,
    pub checked: u64,
    pub failures: u64,
    /// Smallest failing `q`, as element text.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness_q: Option<String>,
}

impl StepResult {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProofReport {
    pub function: String,
    pub n: u32,
    pub k: u32,
    pub s: u32,
    pub q_mode: QMode,
    /// Set when the parameters were not validated (broken-hypothesis runs).
    pub unchecked: bool,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub violations: Vec<Violation>,
    pub steps: Vec<StepResult>,
    pub passed: bool,
}

/// Runs every step for every `q` of the chosen mode. With
/// `bypass_validation` the parameters are used even if they break the family
/// hypotheses; the report is then flagged and lists the violations.
pub fn run_suite(params: &FamilyParams, mode: QMode, bypass_validation: bool) -> Result<ProofReport, ProofError> {
    let violations = validate(params);
    if !violations.is_empty() && !bypass_validation {
        return Err(ProofError::Invalid(violations));
    }
    let p = QuadParams::from_family(params)?;
    let field = make_field(params.n)?;
    let f = build_unchecked(params)?;
    let qs = mode.qs(&field);
    let results: Vec<(Elem, [bool; 16])> = qs.par_iter().map(|&q| (q, check_q(&field, &f, &p, params, q))).collect();
    let steps: Vec<StepResult> = Step::ALL
        .iter()
        .enumerate()
        .map(|(i, &step)| {
            let failing: Vec<Elem> = results.iter().filter(|(_, r)| !r[i]).map(|&(q, _)| q).collect();
            StepResult {
                step,
                checked: results.len() as u64,
                failures: failing.len() as u64,
                witness_q: failing.iter().min().map(|&q| field.format_power(q)),
            }
        })
        .collect();
    let passed = steps.iter().all(StepResult::passed);
    Ok(ProofReport {
        function: f.describe(),
        n: params.n,
        k: p.k,
        s: p.s,
        q_mode: mode,
        unchecked: bypass_validation,
        violations,
        steps,
        passed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::example_table_n12;

    fn gf4(field: &FieldSpec) -> Vec<Elem> {
        let g = field.subfield_generator(2).unwrap();
        vec![Elem::ZERO, Elem::ONE, g, field.mul(g, g)]
    }

    fn n6_params() -> Vec<FamilyParams> {
        let field = make_field(6).unwrap();
        let us: Vec<Elem> = field.elements().filter(|&e| !e.is_zero() && field.is_primitive(e).unwrap()).collect();
        let mut out = Vec::new();
        for &u in &us {
            for &v in &gf4(&field) {
                for &w in &gf4(&field) {
                    if field.mul(v, w) != Elem::ONE {
                        out.push(FamilyParams::family7(2, 1, u, v, w));
                    }
                }
            }
        }
        out
    }

    #[test]
    fn q_equal_one_gives_plain_coefficients() {
        let field = make_field(6).unwrap();
        let u = field.generator();
        let v = Elem::ONE;
        let w = field.subfield_generator(2).unwrap();
        let ctx = make_context(&FamilyParams::family7(2, 1, u, v, w), Elem::ONE).unwrap();
        let u4 = field.frobenius(u, 2);
        let wu = field.mul(w, field.pow(u, 5));
        assert_eq!((ctx.a, ctx.b, ctx.c, ctx.d), (v + u, v + u4, wu + u, wu + u4));
    }

    #[test]
    fn zero_q_rejected() {
        let field = make_field(6).unwrap();
        let p = FamilyParams::family7(2, 1, field.generator(), Elem::ONE, Elem::ZERO);
        assert_eq!(make_context(&p, Elem::ZERO), Err(ProofError::ZeroQ));
    }

    #[test]
    fn every_step_passes_exhaustively_at_n6() {
        let params = n6_params();
        assert_eq!(params.len(), 36 * 13);
        for p in &params {
            let r = run_suite(p, QMode::Exhaustive, false).unwrap();
            assert!(r.passed, "{:?}", r.steps.iter().filter(|s| !s.passed()).collect::<Vec<_>>());
        }
    }

    #[test]
    fn annihilator_with_theta_one() {
        for k in [1u32, 2, 4] {
            let field = make_field(3 * k).unwrap();
            let all: Vec<Elem> = field.elements().collect();
            assert!(check_annihilator(&field, k, Elem::ONE, &all).unwrap());
        }
    }

    #[test]
    fn annihilator_rejects_non_powers() {
        let field = make_field(6).unwrap();
        // g is not a cube in GF(64), and 2^2 - 1 = 3.
        assert_eq!(check_annihilator(&field, 2, field.generator(), &[]), Err(ProofError::NotAPower));
        assert_eq!(check_annihilator(&field, 2, Elem::ZERO, &[]), Err(ProofError::NotAPower));
        assert!(matches!(
            check_annihilator(&make_field(8).unwrap(), 2, Elem::ONE, &[]),
            Err(ProofError::BadDegree { .. })
        ));
        // A cube passes exhaustively.
        let cube = field.pow(field.generator(), 3);
        assert!(check_annihilator(&field, 2, cube, &field.elements().collect::<Vec<_>>()).unwrap());
    }

    #[test]
    fn residuals_vanish_at_zero_and_one() {
        let field = make_field(6).unwrap();
        for p in n6_params().iter().step_by(7) {
            for q in field.elements().skip(1) {
                let ctx = make_context(p, q).unwrap();
                assert_eq!(derived_equation_residuals(&field, &ctx, Elem::ZERO), (Elem::ZERO, Elem::ZERO));
                let (c1, c2) = {
                    let [c1, c2] = derived_equation_coefficients(&field, &ctx);
                    (c1[0] + c1[1] + c1[2], c2[0] + c2[1] + c2[2])
                };
                assert_eq!(derived_equation_residuals(&field, &ctx, Elem::ONE), (c1, c2));
                assert_eq!((c1, c2), (Elem::ZERO, Elem::ZERO));
            }
        }
    }

    #[test]
    fn broken_vw_has_a_larger_kernel_somewhere() {
        let field = make_field(6).unwrap();
        let g = field.subfield_generator(2).unwrap();
        let v = g;
        let w = field.inv(g).unwrap();
        let p = FamilyParams::family7(2, 1, field.generator(), v, w);
        assert!(run_suite(&p, QMode::Exhaustive, false).is_err());
        let r = run_suite(&p, QMode::Exhaustive, true).unwrap();
        assert!(r.unchecked && !r.passed);
        let roots = r.steps.iter().find(|s| s.step == Step::DeltaRoots).unwrap();
        assert!(roots.failures > 0 && roots.witness_q.is_some());
        let eq1 = r.steps.iter().find(|s| s.step == Step::DerivedAb).unwrap();
        assert!(eq1.failures > 0);
        let q = field.parse_elem(roots.witness_q.as_deref().unwrap()).unwrap();
        let ctx = make_context_unchecked(&p, q).unwrap();
        assert!(delta_roots(&field, &ctx).len() > 2);
    }

    #[test]
    fn n12_table_sampled() {
        let field = make_field(12).unwrap();
        let u = field.generator();
        let w = field.gen_pow(273);
        for (v, w) in [(Elem::ONE, w), (Elem::ONE, Elem::ZERO), (Elem::ZERO, w), (Elem::ZERO, Elem::ZERO)] {
            let p = FamilyParams::family7(4, 5, u, v, w);
            let r = run_suite(&p, QMode::Sampled { count: 200, seed: 7 }, false).unwrap();
            assert!(r.passed, "{:?}", r.steps);
        }
        assert_eq!(example_table_n12().len(), 4);
    }

    #[test]
    fn sampling_is_deterministic() {
        let field = make_field(12).unwrap();
        let m = QMode::Sampled { count: 50, seed: 3 };
        assert_eq!(m.qs(&field), m.qs(&field));
        assert!(m.qs(&field).iter().all(|q| !q.is_zero()));
    }

    #[test]
    fn family6_runs_as_w_zero() {
        let field = make_field(6).unwrap();
        let p = FamilyParams::family6(2, 1, field.generator(), Elem::ONE);
        assert!(run_suite(&p, QMode::Exhaustive, false).unwrap().passed);
        let p5 = FamilyParams::family5(2, 1, field.generator(), Elem::ONE);
        assert_eq!(run_suite(&p5, QMode::Exhaustive, false), Err(ProofError::WrongFamily(5)));
    }
}
