//! Arithmetic in GF(2^m) with a polynomial-basis representation.
//!
//! Elements are stored as the bit pattern of their residue polynomial, bit `i`
//! holding the coefficient of `t^i`. The modulus is kept with its leading bit,
//! so a field of degree 64 needs a 65-bit pattern and is held in a `u128`.

use std::fmt;
use std::ops::{Add, AddAssign};

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub const MAX_DEGREE: u32 = 64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("extension degree {0} is not supported (need 2 <= m <= {MAX_DEGREE})")]
    BadDegree(u32),
    #[error("modulus {modulus:#x} does not have degree {m}")]
    WrongModulusDegree { m: u32, modulus: u128 },
    #[error("modulus {0:#x} has no constant term")]
    NoConstantTerm(u128),
    #[error("modulus {0:#x} is reducible over GF(2)")]
    Reducible(u128),
    #[error("element {bits:#x} does not fit in {m} bits")]
    ElementOutOfRange { m: u32, bits: u64 },
    #[error("zero has no multiplicative inverse")]
    InverseOfZero,
    #[error("the seventh-power test is undefined for zero")]
    SeventhPowerOfZero,
    #[error("cannot parse {0:?} as a hexadecimal field element")]
    BadHex(String),
}

/// A field element: the `m`-bit coefficient vector of its residue polynomial.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Fq(u64);

impl Fq {
    pub const ZERO: Fq = Fq(0);
    pub const ONE: Fq = Fq(1);

    #[inline]
    pub const fn bits(self) -> u64 {
        self.0
    }

    #[inline]
    pub const fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl Add for Fq {
    type Output = Fq;

    // addition in characteristic 2 is xor
    #[inline]
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn add(self, rhs: Fq) -> Fq {
        Fq(self.0 ^ rhs.0)
    }
}

impl AddAssign for Fq {
    #[inline]
    #[allow(clippy::suspicious_op_assign_impl)]
    fn add_assign(&mut self, rhs: Fq) {
        self.0 ^= rhs.0;
    }
}

/// Serialized as a `0x`-prefixed hex string.
impl Serialize for Fq {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Fq {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        parse_hex_u64(&s)
            .map(Fq)
            .ok_or_else(|| serde::de::Error::custom(FieldError::BadHex(s)))
    }
}

impl fmt::LowerHex for Fq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::LowerHex::fmt(&self.0, f)
    }
}

impl fmt::Display for Fq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:#x}", self.0)
    }
}

/// Outcome of the seventh-power residue test.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeventhPower {
    pub is_seventh_power: bool,
    /// Set when 7 does not divide q - 1: every element is then a seventh
    /// power and the answer carries no information.
    pub degenerate: bool,
}

/// Field parameters as they appear in reports.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldSummary {
    pub m: u32,
    pub modulus: String,
}

/// A concrete model of GF(2^m). Immutable once built.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FieldCtx {
    m: u32,
    modulus: u128,
    // modulus without its leading term, used for reduction
    tail: u64,
    mask: u64,
}

impl FieldCtx {
    /// Builds GF(2^m). Without an explicit modulus, the irreducible
    /// polynomial of degree `m` with the smallest encoding is used.
    pub fn new(m: u32, modulus: Option<u128>) -> Result<Self, FieldError> {
        if !(2..=MAX_DEGREE).contains(&m) {
            return Err(FieldError::BadDegree(m));
        }
        let modulus = match modulus {
            Some(f) => {
                if poly_degree(f) != Some(m) {
                    return Err(FieldError::WrongModulusDegree { m, modulus: f });
                }
                if f & 1 == 0 {
                    return Err(FieldError::NoConstantTerm(f));
                }
                if !is_irreducible(f) {
                    return Err(FieldError::Reducible(f));
                }
                f
            }
            None => default_modulus(m),
        };
        Ok(Self::from_parts(m, modulus))
    }

    fn from_parts(m: u32, modulus: u128) -> Self {
        let mask = if m == 64 { u64::MAX } else { (1u64 << m) - 1 };
        FieldCtx {
            m,
            modulus,
            tail: (modulus as u64) & mask,
            mask,
        }
    }

    #[inline]
    pub fn summary(&self) -> FieldSummary {
        FieldSummary {
            m: self.m,
            modulus: format!("{:#x}", self.modulus),
        }
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    #[inline]
    pub fn modulus(&self) -> u128 {
        self.modulus
    }

    /// Field order q = 2^m.
    #[inline]
    pub fn order(&self) -> u128 {
        1u128 << self.m
    }

    #[inline]
    pub fn mask(&self) -> u64 {
        self.mask
    }

    /// Whether 7 divides q - 1, i.e. the seventh-power condition is meaningful.
    #[inline]
    pub fn supports_cu(&self) -> bool {
        self.m.is_multiple_of(3)
    }

    pub fn elem(&self, bits: u64) -> Result<Fq, FieldError> {
        if bits & !self.mask != 0 {
            return Err(FieldError::ElementOutOfRange { m: self.m, bits });
        }
        Ok(Fq(bits))
    }

    /// Parses `0x…` or bare hexadecimal.
    pub fn parse_elem(&self, s: &str) -> Result<Fq, FieldError> {
        let bits = parse_hex_u64(s).ok_or_else(|| FieldError::BadHex(s.to_string()))?;
        self.elem(bits)
    }

    /// The class of `t`, the polynomial-basis generator.
    #[inline]
    pub fn t(&self) -> Fq {
        Fq(2)
    }

    /// Multiplication by `t` followed by reduction.
    #[inline]
    pub(crate) fn xtime(&self, a: u64) -> u64 {
        let carry = (a >> (self.m - 1)) & 1;
        let shifted = (a << 1) & self.mask;
        shifted ^ (self.tail & carry.wrapping_neg())
    }

    #[inline]
    pub fn mul(&self, a: Fq, b: Fq) -> Fq {
        let (mut a, mut b) = (a.0, b.0);
        let mut acc = 0u64;
        while b != 0 {
            acc ^= a & (b & 1).wrapping_neg();
            b >>= 1;
            a = self.xtime(a);
        }
        Fq(acc)
    }

    #[inline]
    pub fn square(&self, a: Fq) -> Fq {
        self.mul(a, a)
    }

    pub fn pow(&self, a: Fq, mut e: u128) -> Fq {
        let mut base = a;
        let mut acc = Fq::ONE;
        while e != 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.square(base);
            e >>= 1;
        }
        acc
    }

    /// Inverse via a^(q-2).
    pub fn inv(&self, a: Fq) -> Result<Fq, FieldError> {
        if a.is_zero() {
            return Err(FieldError::InverseOfZero);
        }
        Ok(self.pow(a, self.order() - 2))
    }

    pub fn div(&self, a: Fq, b: Fq) -> Result<Fq, FieldError> {
        Ok(self.mul(a, self.inv(b)?))
    }

    /// Tests whether `u` is a seventh power, i.e. u^((q-1)/7) = 1.
    pub fn is_seventh_power(&self, u: Fq) -> Result<SeventhPower, FieldError> {
        if u.is_zero() {
            return Err(FieldError::SeventhPowerOfZero);
        }
        if !self.supports_cu() {
            return Ok(SeventhPower {
                is_seventh_power: true,
                degenerate: true,
            });
        }
        let e = (self.order() - 1) / 7;
        Ok(SeventhPower {
            is_seventh_power: self.pow(u, e) == Fq::ONE,
            degenerate: false,
        })
    }

    /// Smallest-encoding non-seventh-power, if the test is meaningful.
    pub fn smallest_non_seventh_power(&self) -> Option<Fq> {
        if !self.supports_cu() {
            return None;
        }
        self.enumerate()
            .skip(1)
            .find(|&u| !self.is_seventh_power(u).map(|r| r.is_seventh_power).unwrap_or(true))
    }

    /// All q elements in increasing encoding order.
    pub fn enumerate(&self) -> impl Iterator<Item = Fq> + Clone {
        (0..=self.mask).map(Fq)
    }

    /// Root of `e^3 + e + 1` with the smallest encoding, when GF(8) embeds.
    pub fn gf8_generator(&self) -> Option<Fq> {
        if !self.supports_cu() {
            return None;
        }
        self.enumerate().find(|&e| {
            let e3 = self.mul(self.square(e), e);
            e3 + e + Fq::ONE == Fq::ZERO
        })
    }
}

pub(crate) fn parse_hex_u64(s: &str) -> Option<u64> {
    let t = s.trim();
    let t = t
        .strip_prefix("0x")
        .or_else(|| t.strip_prefix("0X"))
        .unwrap_or(t);
    if t.is_empty() {
        return None;
    }
    u64::from_str_radix(t, 16).ok()
}

pub fn parse_hex_u128(s: &str) -> Option<u128> {
    let t = s.trim();
    let t = t
        .strip_prefix("0x")
        .or_else(|| t.strip_prefix("0X"))
        .unwrap_or(t);
    if t.is_empty() {
        return None;
    }
    u128::from_str_radix(t, 16).ok()
}

fn poly_degree(f: u128) -> Option<u32> {
    if f == 0 {
        None
    } else {
        Some(127 - f.leading_zeros())
    }
}

fn poly_mod(mut a: u128, f: u128) -> u128 {
    let df = poly_degree(f).expect("nonzero modulus");
    while let Some(da) = poly_degree(a) {
        if da < df {
            break;
        }
        a ^= f << (da - df);
    }
    a
}

fn poly_gcd(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        let r = poly_mod(a, b);
        a = b;
        b = r;
    }
    a
}

/// Ben-Or test: f of degree n is irreducible iff gcd(x^(2^k) - x, f) = 1
/// for every k <= n/2.
pub fn is_irreducible(f: u128) -> bool {
    let n = match poly_degree(f) {
        Some(n) if n >= 1 => n,
        _ => return false,
    };
    if n == 1 {
        return true;
    }
    if f & 1 == 0 {
        return false;
    }
    // Arithmetic modulo f, irreducible or not, is what the test needs.
    let ring = FieldCtx::from_parts(n, f);
    let x = Fq(2);
    let mut power = x;
    for _ in 1..=n / 2 {
        power = ring.square(power);
        let diff = (power + x).0 as u128;
        if poly_gcd(f, diff) != 1 {
            return false;
        }
    }
    true
}

pub fn default_modulus(m: u32) -> u128 {
    let lead = 1u128 << m;
    (0..lead)
        .step_by(2)
        .map(|low| lead | low | 1)
        .find(|&f| is_irreducible(f))
        .expect("an irreducible polynomial exists in every degree")
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn f8() -> FieldCtx {
        FieldCtx::new(3, None).unwrap()
    }

    // Exhaustive factor check over GF(2): no divisor of degree 1..=deg/2.
    fn irreducible_by_trial_division(f: u128) -> bool {
        let n = poly_degree(f).unwrap();
        for d in 1..=n / 2 {
            for g in (1u128 << d)..(1u128 << (d + 1)) {
                if poly_mod(f, g) == 0 {
                    return false;
                }
            }
        }
        true
    }

    #[test]
    fn default_moduli_match_trial_division() {
        assert_eq!(default_modulus(3), 0b1011);
        for m in 2..=12u32 {
            let expected = ((1u128 << m)..(1u128 << (m + 1)))
                .find(|&f| f & 1 == 1 && irreducible_by_trial_division(f))
                .unwrap();
            assert_eq!(default_modulus(m), expected, "m = {m}");
        }
    }

    #[test]
    fn ben_or_agrees_with_trial_division() {
        for f in 2u128..(1 << 11) {
            assert_eq!(is_irreducible(f), irreducible_by_trial_division(f), "{f:#b}");
        }
    }

    #[test]
    fn modulus_validation() {
        assert!(FieldCtx::new(3, Some(0b1101)).is_ok());
        assert_eq!(
            FieldCtx::new(4, Some(0b10101)),
            Err(FieldError::Reducible(0b10101))
        );
        assert!(matches!(
            FieldCtx::new(4, Some(0b1011)),
            Err(FieldError::WrongModulusDegree { .. })
        ));
        assert!(matches!(FieldCtx::new(1, None), Err(FieldError::BadDegree(1))));
        assert!(matches!(FieldCtx::new(65, None), Err(FieldError::BadDegree(65))));
        assert!(FieldCtx::new(64, None).is_ok());
    }

    #[test]
    fn small_products() {
        let k = f8();
        let t = k.t();
        let t2 = k.elem(0b100).unwrap();
        assert_eq!(t + t, Fq::ZERO);
        assert_eq!(k.mul(t, t2), k.elem(0b011).unwrap());
        let inv = k.inv(t).unwrap();
        let brute = k.enumerate().find(|&b| k.mul(t, b) == Fq::ONE).unwrap();
        assert_eq!(inv, brute);
        assert_eq!(inv, k.elem(0b101).unwrap());
        assert_eq!(k.inv(Fq::ZERO), Err(FieldError::InverseOfZero));
    }

    #[test]
    fn enumeration() {
        let k2 = FieldCtx::new(2, None).unwrap();
        let all: Vec<_> = k2.enumerate().collect();
        assert_eq!(all.len(), 4);
        assert_eq!(&all[..2], &[Fq::ZERO, Fq::ONE]);
        let k3 = f8();
        assert_eq!(k3.enumerate().count(), 8);
        assert_eq!(k3.enumerate().fold(Fq::ZERO, |s, a| s + a), Fq::ZERO);
    }

    #[test]
    fn seventh_powers_in_small_fields() {
        let k = f8();
        assert!(k.is_seventh_power(Fq::ONE).unwrap().is_seventh_power);
        assert!(!k.is_seventh_power(k.t()).unwrap().is_seventh_power);
        assert!(k.is_seventh_power(Fq::ZERO).is_err());

        let k6 = FieldCtx::new(6, None).unwrap();
        // a generator has multiplicative order 63
        let generator = k6
            .enumerate()
            .skip(2)
            .find(|&g| {
                let mut x = g;
                let mut order = 1;
                while x != Fq::ONE {
                    x = k6.mul(x, g);
                    order += 1;
                }
                order == 63
            })
            .unwrap();
        assert_ne!(k6.pow(generator, 9), Fq::ONE);
        assert!(!k6.is_seventh_power(generator).unwrap().is_seventh_power);

        let k4 = FieldCtx::new(4, None).unwrap();
        let r = k4.is_seventh_power(k4.t()).unwrap();
        assert!(r.is_seventh_power && r.degenerate);
    }

    #[test]
    fn seventh_power_counts_are_modulus_independent() {
        for m in [3u32, 6, 9] {
            let k = FieldCtx::new(m, None).unwrap();
            let q = k.order();
            let count = k
                .enumerate()
                .skip(1)
                .filter(|&u| k.is_seventh_power(u).unwrap().is_seventh_power)
                .count() as u128;
            assert_eq!(count, (q - 1) / 7, "m = {m}");
        }
        let non7 = |k: &FieldCtx| {
            k.enumerate()
                .skip(1)
                .filter(|&u| !k.is_seventh_power(u).unwrap().is_seventh_power)
                .count()
        };
        let a = FieldCtx::new(3, Some(0b1011)).unwrap();
        let b = FieldCtx::new(3, Some(0b1101)).unwrap();
        assert_eq!(non7(&a), non7(&b));
    }

    #[test]
    fn gf8_embedding() {
        for m in [3u32, 6, 9, 12] {
            let k = FieldCtx::new(m, None).unwrap();
            let e = k.gf8_generator().unwrap();
            assert_eq!(k.pow(e, 7), Fq::ONE);
            assert_ne!(e, Fq::ONE);
        }
        assert!(FieldCtx::new(4, None).unwrap().gf8_generator().is_none());
    }

    #[test]
    fn degree_64_field() {
        let k = FieldCtx::new(64, None).unwrap();
        let a = k.elem(0xdead_beef_1234_5678).unwrap();
        assert_eq!(k.mul(a, k.inv(a).unwrap()), Fq::ONE);
        assert_eq!(k.pow(a, k.order()), a);
    }

    fn field_and_elems(m: u32) -> impl Strategy<Value = (u32, u64, u64, u64)> {
        let mask = (1u64 << m) - 1;
        (Just(m), any::<u64>(), any::<u64>(), any::<u64>())
            .prop_map(move |(m, a, b, c)| (m, a & mask, b & mask, c & mask))
    }

    proptest! {
        #[test]
        fn field_axioms((m, a, b, c) in (2u32..=20).prop_flat_map(field_and_elems)) {
            let k = FieldCtx::new(m, None).unwrap();
            let (a, b, c) = (Fq(a), Fq(b), Fq(c));
            prop_assert_eq!(k.mul(a, b + c), k.mul(a, b) + k.mul(a, c));
            prop_assert_eq!(k.mul(a, b), k.mul(b, a));
            prop_assert_eq!(k.mul(k.mul(a, b), c), k.mul(a, k.mul(b, c)));
            prop_assert_eq!(k.square(a + b), k.square(a) + k.square(b));
            prop_assert_eq!(k.pow(a, k.order()), a);
            if !a.is_zero() {
                prop_assert_eq!(k.mul(a, k.inv(a).unwrap()), Fq::ONE);
                prop_assert_eq!(k.pow(a, k.order() - 1), Fq::ONE);
            }
        }
    }
}
