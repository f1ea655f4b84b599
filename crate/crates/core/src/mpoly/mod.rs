//! Sparse multivariate polynomials over GF(2) and GF(8).
//!
//! The variable set is fixed: `x, y, z, a, b, g, u, xi`, standing for the
//! unknowns, the difference triple (alpha, beta, gamma), the family
//! parameter and its formal seventh root. Terms are kept sorted by the
//! lexicographic order on exponent vectors in that variable order, so every
//! polynomial has one canonical representation.

mod gf8;
mod resultant;
mod text;

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::gf2m::{FieldCtx, FieldError, Fq};

pub use gf8::Gf8;
pub use resultant::{determinant, determinant_bareiss, determinant_cofactor, sylvester_matrix};
pub use text::ParseError;

pub const NVARS: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Var {
    X,
    Y,
    Z,
    A,
    B,
    G,
    U,
    Xi,
}

impl Var {
    pub const ALL: [Var; NVARS] = [
        Var::X,
        Var::Y,
        Var::Z,
        Var::A,
        Var::B,
        Var::G,
        Var::U,
        Var::Xi,
    ];

    #[inline]
    pub fn index(self) -> usize {
        self as usize
    }

    pub fn name(self) -> &'static str {
        match self {
            Var::X => "x",
            Var::Y => "y",
            Var::Z => "z",
            Var::A => "a",
            Var::B => "b",
            Var::G => "g",
            Var::U => "u",
            Var::Xi => "xi",
        }
    }

    pub fn from_name(s: &str) -> Option<Var> {
        Var::ALL.into_iter().find(|v| v.name() == s)
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

pub type Exponents = [u16; NVARS];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Domain {
    Gf2,
    Gf8,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("coefficient domains differ ({0:?} vs {1:?})")]
    DomainMismatch(Domain, Domain),
    #[error("coefficient {0} is not in GF(2)")]
    NotInGf2(Gf8),
    #[error("division is not exact; remainder has {} terms", .remainder.term_count())]
    NotDivisible { remainder: Box<MPoly> },
    #[error("division by the zero polynomial")]
    DivisionByZero,
    #[error("polynomial has degree 0 in {0}")]
    ZeroDegree(Var),
    #[error("variable {0} has no assigned value")]
    Unassigned(Var),
    #[error("GF(8) coefficients do not embed in GF(2^{0})")]
    NoGf8Embedding(u32),
    #[error("exponent overflow")]
    ExponentOverflow,
    #[error(transparent)]
    Field(#[from] FieldError),
}

/// A sparse polynomial with canonically ordered, nonzero terms.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct MPoly {
    domain: Domain,
    terms: Vec<(Exponents, Gf8)>,
}

fn mono_mul(a: &Exponents, b: &Exponents) -> Exponents {
    let mut out = [0u16; NVARS];
    for i in 0..NVARS {
        out[i] = a[i]
            .checked_add(b[i])
            .expect("exponent overflow in polynomial product");
    }
    out
}

fn mono_div(a: &Exponents, b: &Exponents) -> Option<Exponents> {
    let mut out = [0u16; NVARS];
    for i in 0..NVARS {
        out[i] = a[i].checked_sub(b[i])?;
    }
    Some(out)
}

impl MPoly {
    pub fn zero(domain: Domain) -> MPoly {
        MPoly {
            domain,
            terms: Vec::new(),
        }
    }

    pub fn one(domain: Domain) -> MPoly {
        MPoly::constant(domain, Gf8::ONE)
    }

    pub fn constant(domain: Domain, c: Gf8) -> MPoly {
        MPoly::monomial(domain, c, [0; NVARS])
    }

    pub fn var(domain: Domain, v: Var) -> MPoly {
        MPoly::var_pow(domain, v, 1)
    }

    pub fn var_pow(domain: Domain, v: Var, e: u16) -> MPoly {
        let mut exps = [0; NVARS];
        exps[v.index()] = e;
        MPoly::monomial(domain, Gf8::ONE, exps)
    }

    /// Panics if `c` lies outside `domain`.
    pub fn monomial(domain: Domain, c: Gf8, exps: Exponents) -> MPoly {
        assert!(
            domain == Domain::Gf8 || c.in_gf2(),
            "coefficient {c} outside GF(2)"
        );
        let terms = if c.is_zero() { vec![] } else { vec![(exps, c)] };
        MPoly { domain, terms }
    }

    /// Builds a polynomial from arbitrary terms, merging duplicates.
    pub fn from_terms(
        domain: Domain,
        terms: impl IntoIterator<Item = (Exponents, Gf8)>,
    ) -> Result<MPoly, PolyError> {
        let mut acc: BTreeMap<Exponents, Gf8> = BTreeMap::new();
        for (e, c) in terms {
            if domain == Domain::Gf2 && !c.in_gf2() {
                return Err(PolyError::NotInGf2(c));
            }
            *acc.entry(e).or_default() += c;
        }
        Ok(MPoly::from_map(domain, acc))
    }

    fn from_map(domain: Domain, map: BTreeMap<Exponents, Gf8>) -> MPoly {
        MPoly {
            domain,
            terms: map.into_iter().filter(|(_, c)| !c.is_zero()).collect(),
        }
    }

    fn from_hash(domain: Domain, map: HashMap<Exponents, Gf8>) -> MPoly {
        let mut terms: Vec<_> = map.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        terms.sort_unstable_by_key(|a| a.0);
        MPoly { domain, terms }
    }

    #[inline]
    pub fn domain(&self) -> Domain {
        self.domain
    }

    #[inline]
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    #[inline]
    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    /// Terms in ascending lexicographic order.
    pub fn terms(&self) -> &[(Exponents, Gf8)] {
        &self.terms
    }

    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms[0] == ([0; NVARS], Gf8::ONE)
    }

    /// Lexicographically greatest term.
    pub fn leading_term(&self) -> Option<(Exponents, Gf8)> {
        self.terms.last().copied()
    }

    pub fn degree_in(&self, v: Var) -> u16 {
        self.terms.iter().map(|(e, _)| e[v.index()]).max().unwrap_or(0)
    }

    pub fn total_degree(&self) -> u32 {
        self.terms
            .iter()
            .map(|(e, _)| e.iter().map(|&k| k as u32).sum())
            .max()
            .unwrap_or(0)
    }

    pub fn uses(&self, v: Var) -> bool {
        self.degree_in(v) > 0
    }

    /// Reinterprets a GF(2) polynomial over GF(8); a no-op for GF(8).
    pub fn to_gf8(&self) -> MPoly {
        MPoly {
            domain: Domain::Gf8,
            terms: self.terms.clone(),
        }
    }

    /// Narrows to GF(2), failing if any coefficient lies outside it.
    pub fn to_gf2(&self) -> Result<MPoly, PolyError> {
        if let Some((_, c)) = self.terms.iter().find(|(_, c)| !c.in_gf2()) {
            return Err(PolyError::NotInGf2(*c));
        }
        Ok(MPoly {
            domain: Domain::Gf2,
            terms: self.terms.clone(),
        })
    }

    fn check_domain(&self, other: &MPoly) -> Result<(), PolyError> {
        if self.domain != other.domain {
            return Err(PolyError::DomainMismatch(self.domain, other.domain));
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &MPoly) -> Result<MPoly, PolyError> {
        self.check_domain(other)?;
        let (a, b) = (&self.terms, &other.terms);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                std::cmp::Ordering::Less => {
                    out.push(a[i]);
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    out.push(b[j]);
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    let c = a[i].1 + b[j].1;
                    if !c.is_zero() {
                        out.push((a[i].0, c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        Ok(MPoly {
            domain: self.domain,
            terms: out,
        })
    }

    pub fn checked_mul(&self, other: &MPoly) -> Result<MPoly, PolyError> {
        self.check_domain(other)?;
        if self.is_zero() || other.is_zero() {
            return Ok(MPoly::zero(self.domain));
        }
        if other.is_monomial() {
            let (e, c) = other.terms[0];
            return Ok(self.mul_term(&e, c));
        }
        if self.is_monomial() {
            let (e, c) = self.terms[0];
            return Ok(other.mul_term(&e, c));
        }
        let mut acc: HashMap<Exponents, Gf8> =
            HashMap::with_capacity(self.terms.len() * other.terms.len());
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                *acc.entry(mono_mul(ea, eb)).or_default() += *ca * *cb;
            }
        }
        Ok(MPoly::from_hash(self.domain, acc))
    }

    /// Multiplies by `c * mono`. Order is preserved since monomial
    /// multiplication is compatible with lex order.
    pub fn mul_term(&self, mono: &Exponents, c: Gf8) -> MPoly {
        if c.is_zero() {
            return MPoly::zero(self.domain);
        }
        MPoly {
            domain: self.domain,
            terms: self
                .terms
                .iter()
                .map(|(e, k)| (mono_mul(e, mono), *k * c))
                .filter(|(_, k)| !k.is_zero())
                .collect(),
        }
    }

    /// Frobenius: squares every coefficient and doubles every exponent.
    pub fn square(&self) -> MPoly {
        MPoly {
            domain: self.domain,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| {
                    let mut d = *e;
                    for k in d.iter_mut() {
                        *k = k.checked_mul(2).expect("exponent overflow in square");
                    }
                    (d, c.square())
                })
                .collect(),
        }
    }

    pub fn pow(&self, mut n: u32) -> MPoly {
        let mut base = self.clone();
        let mut acc = MPoly::one(self.domain);
        while n > 0 {
            if n & 1 == 1 {
                acc = &acc * &base;
            }
            n >>= 1;
            if n > 0 {
                base = base.square();
            }
        }
        acc
    }

    /// Coefficient of `v^k`, as a polynomial free of `v`.
    pub fn coeff_in(&self, v: Var, k: u16) -> MPoly {
        let i = v.index();
        MPoly {
            domain: self.domain,
            terms: self
                .terms
                .iter()
                .filter(|(e, _)| e[i] == k)
                .map(|(e, c)| {
                    let mut d = *e;
                    d[i] = 0;
                    (d, *c)
                })
                .collect(),
        }
    }

    /// Coefficients in `v`, lowest degree first.
    pub fn coefficients_in(&self, v: Var) -> Vec<MPoly> {
        let i = v.index();
        let deg = self.degree_in(v) as usize;
        let mut buckets: Vec<Vec<(Exponents, Gf8)>> = vec![Vec::new(); deg + 1];
        for (e, c) in &self.terms {
            let mut d = *e;
            d[i] = 0;
            buckets[e[i] as usize].push((d, *c));
        }
        buckets
            .into_iter()
            .map(|mut t| {
                t.sort_unstable_by_key(|a| a.0);
                MPoly {
                    domain: self.domain,
                    terms: t,
                }
            })
            .collect()
    }

    /// Inverse of [`MPoly::coefficients_in`].
    pub fn from_coefficients(domain: Domain, v: Var, coeffs: &[MPoly]) -> MPoly {
        let mut acc = MPoly::zero(domain);
        for (k, c) in coeffs.iter().enumerate() {
            let mut e = [0; NVARS];
            e[v.index()] = k as u16;
            acc = &acc + &c.mul_term(&e, Gf8::ONE);
        }
        acc
    }

    /// Replaces `v` by `replacement` everywhere.
    pub fn substitute(&self, v: Var, replacement: &MPoly) -> Result<MPoly, PolyError> {
        self.check_domain(replacement)?;
        if !self.uses(v) {
            return Ok(self.clone());
        }
        let coeffs = self.coefficients_in(v);
        // Horner in the replacement
        let mut acc = MPoly::zero(self.domain);
        for c in coeffs.iter().rev() {
            acc = &(&acc * replacement) + c;
        }
        Ok(acc)
    }

    /// Substitutes `v <- num/den` and clears the denominator:
    /// returns `den^d * p(num/den)` where `d` is the degree of `p` in `v`.
    pub fn substitute_fraction(
        &self,
        v: Var,
        num: &MPoly,
        den: &MPoly,
    ) -> Result<MPoly, PolyError> {
        self.check_domain(num)?;
        self.check_domain(den)?;
        let coeffs = self.coefficients_in(v);
        let d = coeffs.len() - 1;
        let mut num_pows = vec![MPoly::one(self.domain)];
        let mut den_pows = vec![MPoly::one(self.domain)];
        for k in 1..=d {
            num_pows.push(&num_pows[k - 1] * num);
            den_pows.push(&den_pows[k - 1] * den);
        }
        let mut acc = MPoly::zero(self.domain);
        for (k, c) in coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            acc = &acc + &(&(c * &num_pows[k]) * &den_pows[d - k]);
        }
        Ok(acc)
    }

    /// Exact quotient `self / d`, or the remainder when `d` does not divide.
    pub fn divide_exact(&self, d: &MPoly) -> Result<MPoly, PolyError> {
        self.check_domain(d)?;
        let (lead_e, lead_c) = d.leading_term().ok_or(PolyError::DivisionByZero)?;
        let lead_inv = lead_c.inv().expect("nonzero leading coefficient");
        if d.is_monomial() {
            let mut q = Vec::with_capacity(self.terms.len());
            for (e, c) in &self.terms {
                match mono_div(e, &lead_e) {
                    Some(qe) => q.push((qe, *c * lead_inv)),
                    None => {
                        return Err(PolyError::NotDivisible {
                            remainder: Box::new(self.clone()),
                        })
                    }
                }
            }
            return Ok(MPoly {
                domain: self.domain,
                terms: q,
            });
        }
        let mut rem: BTreeMap<Exponents, Gf8> = self.terms.iter().copied().collect();
        let mut quot: Vec<(Exponents, Gf8)> = Vec::new();
        while let Some((&e, &c)) = rem.iter().next_back() {
            let qe = match mono_div(&e, &lead_e) {
                Some(qe) => qe,
                None => {
                    return Err(PolyError::NotDivisible {
                        remainder: Box::new(MPoly::from_map(self.domain, rem)),
                    })
                }
            };
            let qc = c * lead_inv;
            quot.push((qe, qc));
            for (de, dc) in &d.terms {
                let key = mono_mul(de, &qe);
                let entry = rem.entry(key).or_default();
                *entry += *dc * qc;
                if entry.is_zero() {
                    rem.remove(&key);
                }
            }
        }
        quot.sort_unstable_by_key(|a| a.0);
        Ok(MPoly {
            domain: self.domain,
            terms: quot,
        })
    }

    pub fn divides(&self, p: &MPoly) -> bool {
        p.divide_exact(self).is_ok()
    }

    /// Greatest monomial dividing every term (the monomial content).
    pub fn monomial_content(&self) -> Exponents {
        let mut out = match self.terms.first() {
            Some((e, _)) => *e,
            None => return [0; NVARS],
        };
        for (e, _) in &self.terms {
            for i in 0..NVARS {
                out[i] = out[i].min(e[i]);
            }
        }
        out
    }

    /// Maps every coefficient through `f`.
    pub fn map_coefficients(&self, f: impl Fn(Gf8) -> Gf8) -> MPoly {
        let terms = self
            .terms
            .iter()
            .map(|(e, c)| (*e, f(*c)))
            .filter(|(_, c)| !c.is_zero())
            .collect();
        MPoly {
            domain: self.domain,
            terms,
        }
    }

    /// Maps exponent vectors through `f`; the map need not preserve order.
    pub fn map_exponents(&self, f: impl Fn(Exponents) -> Exponents) -> MPoly {
        MPoly::from_terms(self.domain, self.terms.iter().map(|(e, c)| (f(*e), *c)))
            .expect("coefficients stay in domain")
    }

    pub fn resultant(&self, other: &MPoly, v: Var) -> Result<MPoly, PolyError> {
        resultant::resultant(self, other, v)
    }

    /// Evaluates at a point of GF(2^m). GF(8) coefficients are embedded via
    /// the smallest-encoding root of `e^3 + e + 1` in the field.
    pub fn eval(&self, point: &Assignment, ctx: &FieldCtx) -> Result<Fq, PolyError> {
        Evaluator::new(self, ctx)?.eval(point)
    }
}

/// Values for some of the variables.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Assignment([Option<Fq>; NVARS]);

impl Assignment {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with(mut self, v: Var, value: Fq) -> Self {
        self.0[v.index()] = Some(value);
        self
    }

    pub fn set(&mut self, v: Var, value: Fq) {
        self.0[v.index()] = Some(value);
    }

    pub fn get(&self, v: Var) -> Option<Fq> {
        self.0[v.index()]
    }
}

/// A polynomial prepared for repeated evaluation in one field.
#[derive(Debug, Clone)]
pub struct Evaluator<'a> {
    ctx: &'a FieldCtx,
    terms: Vec<(Exponents, Fq)>,
    max_exp: [u16; NVARS],
}

impl<'a> Evaluator<'a> {
    pub fn new(p: &MPoly, ctx: &'a FieldCtx) -> Result<Self, PolyError> {
        let needs_gf8 = p.terms.iter().any(|(_, c)| !c.in_gf2());
        let eta = if needs_gf8 || p.domain == Domain::Gf8 {
            Some(ctx.gf8_generator().ok_or(PolyError::NoGf8Embedding(ctx.m()))?)
        } else {
            None
        };
        let embed = |c: Gf8| -> Fq {
            match eta {
                None => Fq::ONE,
                Some(e) => {
                    let mut acc = Fq::ZERO;
                    let mut pw = Fq::ONE;
                    for i in 0..3 {
                        if c.bits() >> i & 1 == 1 {
                            acc += pw;
                        }
                        pw = ctx.mul(pw, e);
                    }
                    acc
                }
            }
        };
        let mut max_exp = [0u16; NVARS];
        for (e, _) in &p.terms {
            for i in 0..NVARS {
                max_exp[i] = max_exp[i].max(e[i]);
            }
        }
        Ok(Evaluator {
            ctx,
            terms: p.terms.iter().map(|(e, c)| (*e, embed(*c))).collect(),
            max_exp,
        })
    }

    pub fn eval(&self, point: &Assignment) -> Result<Fq, PolyError> {
        let ctx = self.ctx;
        let mut tables: Vec<Vec<Fq>> = Vec::with_capacity(NVARS);
        for v in Var::ALL {
            let n = self.max_exp[v.index()] as usize;
            if n == 0 {
                tables.push(Vec::new());
                continue;
            }
            let base = point.get(v).ok_or(PolyError::Unassigned(v))?;
            let mut t = Vec::with_capacity(n + 1);
            t.push(Fq::ONE);
            for k in 1..=n {
                t.push(ctx.mul(t[k - 1], base));
            }
            tables.push(t);
        }
        let mut acc = Fq::ZERO;
        for (e, c) in &self.terms {
            let mut term = *c;
            for i in 0..NVARS {
                if e[i] > 0 {
                    term = ctx.mul(term, tables[i][e[i] as usize]);
                }
            }
            acc += term;
        }
        Ok(acc)
    }
}

impl Add for &MPoly {
    type Output = MPoly;

    /// Panics on mismatched domains; use [`MPoly::checked_add`] to recover.
    fn add(self, rhs: &MPoly) -> MPoly {
        self.checked_add(rhs).expect("polynomial domains must match")
    }
}

impl Add for MPoly {
    type Output = MPoly;
    fn add(self, rhs: MPoly) -> MPoly {
        &self + &rhs
    }
}

impl Mul for &MPoly {
    type Output = MPoly;

    /// Panics on mismatched domains; use [`MPoly::checked_mul`] to recover.
    fn mul(self, rhs: &MPoly) -> MPoly {
        self.checked_mul(rhs).expect("polynomial domains must match")
    }
}

impl Mul for MPoly {
    type Output = MPoly;
    fn mul(self, rhs: MPoly) -> MPoly {
        &self * &rhs
    }
}

impl fmt::Debug for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MPoly[{:?}]({})", self.domain, self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(s: &str) -> MPoly {
        MPoly::parse(s, Domain::Gf2).unwrap()
    }

    fn p8(s: &str) -> MPoly {
        MPoly::parse(s, Domain::Gf8).unwrap()
    }

    #[test]
    fn char_two_basics() {
        let s = p("x + y");
        assert!((&s + &s).is_zero());
        assert_eq!(&s * &s, p("x^2 + y^2"));
        assert_eq!(s.square(), p("x^2 + y^2"));
        assert_eq!(&(&p("a") * &p("x^2")) * &p("a"), p("a^2*x^2"));
    }

    #[test]
    fn domains_do_not_mix() {
        let err = p("x").checked_add(&p8("x")).unwrap_err();
        assert_eq!(err, PolyError::DomainMismatch(Domain::Gf2, Domain::Gf8));
        assert!(p("x").checked_mul(&p8("e3*x")).is_err());
        assert!(MPoly::from_terms(Domain::Gf2, [([0; NVARS], Gf8::ETA)]).is_err());
        assert!(p8("e3*x + e3*x").is_zero());
    }

    #[test]
    fn substitution() {
        assert_eq!(p("z^2").substitute(Var::Z, &p("x + y")).unwrap(), p("x^2 + y^2"));
        assert_eq!(p("x").substitute(Var::Y, &p("a*b + u")).unwrap(), p("x"));
        // x^2 + x at x = a/b, cleared by b^2
        assert_eq!(
            p("x^2 + x").substitute_fraction(Var::X, &p("a"), &p("b")).unwrap(),
            p("a^2 + a*b")
        );
    }

    #[test]
    fn exact_division() {
        assert_eq!(p("u*x + u*y").divide_exact(&p("u")).unwrap(), p("x + y"));
        assert_eq!(p("x^2 + y^2").divide_exact(&p("x + y")).unwrap(), p("x + y"));
        match p("x + y").divide_exact(&p("u")) {
            Err(PolyError::NotDivisible { remainder }) => assert!(!remainder.is_zero()),
            other => panic!("expected non-exact division, got {other:?}"),
        }
        assert_eq!(
            p("x^3 + y").divide_exact(&p("x + 1")).unwrap_err(),
            PolyError::NotDivisible {
                remainder: Box::new(p("y + 1"))
            }
        );
        assert_eq!(p("x").divide_exact(&MPoly::zero(Domain::Gf2)), Err(PolyError::DivisionByZero));
    }

    #[test]
    fn coefficient_round_trip() {
        let f = p("a*x^2 + a^2*x + u*g*y^2 + u*b^2*z");
        let cs = f.coefficients_in(Var::X);
        assert_eq!(cs.len(), 3);
        assert_eq!(cs[2], p("a"));
        assert_eq!(cs[0], p("u*g*y^2 + u*b^2*z"));
        assert_eq!(MPoly::from_coefficients(Domain::Gf2, Var::X, &cs), f);
        assert_eq!(f.coeff_in(Var::Z, 1), p("u*b^2"));
    }

    #[test]
    fn evaluation() {
        let k = FieldCtx::new(6, None).unwrap();
        let c = k.elem(0b101101).unwrap();
        let pt = Assignment::new().with(Var::X, c).with(Var::Y, c);
        assert_eq!(p("x + y").eval(&pt, &k).unwrap(), Fq::ZERO);
        assert_eq!(
            p("x + z").eval(&pt, &k).unwrap_err(),
            PolyError::Unassigned(Var::Z)
        );
        // e^3 + e + 1 = 0 for the embedded generator
        let pt = Assignment::new();
        assert_eq!(p8("e3 + e1 + 1").eval(&pt, &k).unwrap(), Fq::ZERO);
        let k4 = FieldCtx::new(4, None).unwrap();
        assert_eq!(
            p8("e1*x").eval(&Assignment::new().with(Var::X, Fq::ONE), &k4),
            Err(PolyError::NoGf8Embedding(4))
        );
    }

    fn small_poly(vars: usize) -> impl Strategy<Value = MPoly> {
        prop::collection::vec(prop::collection::vec(0u16..=4, vars), 0..6).prop_map(move |ts| {
            MPoly::from_terms(
                Domain::Gf2,
                ts.into_iter().map(|v| {
                    let mut e = [0u16; NVARS];
                    e[..v.len()].copy_from_slice(&v);
                    (e, Gf8::ONE)
                }),
            )
            .unwrap()
        })
    }

    proptest! {
        #[test]
        fn ring_axioms(a in small_poly(4), b in small_poly(4), c in small_poly(4)) {
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert!((&a + &a).is_zero());
            prop_assert_eq!((&a + &b).square(), &a.square() + &b.square());
            prop_assert_eq!(a.pow(3), &(&a * &a) * &a);
        }

        #[test]
        fn divide_undoes_multiply(a in small_poly(4), d in small_poly(4)) {
            prop_assume!(!d.is_zero());
            prop_assert_eq!((&a * &d).divide_exact(&d).unwrap(), a);
        }
    }
}
