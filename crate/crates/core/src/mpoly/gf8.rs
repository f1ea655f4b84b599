//! GF(8) = GF(2)[eta]/(eta^3 + eta + 1), the coefficient field for
//! factorizations that need the seventh roots of unity.

use std::fmt;
use std::ops::{Add, AddAssign, Mul};

/// Bit `i` is the coefficient of `eta^i`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Gf8(u8);

// EXP[k] = eta^k
const EXP: [u8; 7] = [0b001, 0b010, 0b100, 0b011, 0b110, 0b111, 0b101];

impl Gf8 {
    pub const ZERO: Gf8 = Gf8(0);
    pub const ONE: Gf8 = Gf8(1);
    pub const ETA: Gf8 = Gf8(2);

    pub fn from_bits(bits: u8) -> Option<Gf8> {
        (bits < 8).then_some(Gf8(bits))
    }

    #[inline]
    pub fn bits(self) -> u8 {
        self.0
    }

    /// eta^k for any k (taken mod 7).
    pub fn eta_pow(k: u32) -> Gf8 {
        Gf8(EXP[(k % 7) as usize])
    }

    /// Discrete log base eta, `None` for zero.
    pub fn log(self) -> Option<u32> {
        EXP.iter().position(|&e| e == self.0).map(|k| k as u32)
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }

    /// Whether the element lies in the prime field.
    #[inline]
    pub fn in_gf2(self) -> bool {
        self.0 <= 1
    }

    pub fn inv(self) -> Option<Gf8> {
        self.log().map(|k| Gf8::eta_pow(7 - k))
    }

    pub fn square(self) -> Gf8 {
        self * self
    }

    /// Rewrites eta^l as eta^(l*k). For k coprime to 7 this is the
    /// coefficient map induced by choosing eta^k as the generator instead.
    pub fn reindex_generator(self, k: u32) -> Gf8 {
        match self.log() {
            None => Gf8::ZERO,
            Some(l) => Gf8::eta_pow(l * k),
        }
    }
}

impl Add for Gf8 {
    type Output = Gf8;
    // addition in characteristic 2 is xor
    #[inline]
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn add(self, rhs: Gf8) -> Gf8 {
        Gf8(self.0 ^ rhs.0)
    }
}

impl AddAssign for Gf8 {
    #[inline]
    #[allow(clippy::suspicious_op_assign_impl)]
    fn add_assign(&mut self, rhs: Gf8) {
        self.0 ^= rhs.0;
    }
}

impl Mul for Gf8 {
    type Output = Gf8;
    fn mul(self, rhs: Gf8) -> Gf8 {
        let mut acc = 0u8;
        for i in 0..3 {
            if rhs.0 >> i & 1 == 1 {
                acc ^= self.0 << i;
            }
        }
        // eta^4 = eta^2 + eta, eta^3 = eta + 1
        if acc & 0b10000 != 0 {
            acc ^= 0b10110;
        }
        if acc & 0b1000 != 0 {
            acc ^= 0b1011;
        }
        Gf8(acc)
    }
}

impl fmt::Display for Gf8 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.log() {
            None => write!(f, "0"),
            Some(k) => write!(f, "e{k}"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exp_table_is_the_power_sequence() {
        let mut x = Gf8::ONE;
        for k in 0..7 {
            assert_eq!(Gf8::eta_pow(k), x);
            x = x * Gf8::ETA;
        }
        assert_eq!(x, Gf8::ONE);
    }

    #[test]
    fn eta_is_a_root_of_the_modulus() {
        let e = Gf8::ETA;
        assert_eq!(e * e * e + e + Gf8::ONE, Gf8::ZERO);
    }

    #[test]
    fn field_axioms_exhaustive() {
        let all: Vec<Gf8> = (0..8).map(Gf8).collect();
        for &a in &all {
            for &b in &all {
                assert_eq!(a * b, b * a);
                for &c in &all {
                    assert_eq!(a * (b + c), a * b + a * c);
                    assert_eq!((a * b) * c, a * (b * c));
                }
            }
            if let Some(i) = a.inv() {
                assert_eq!(a * i, Gf8::ONE);
            }
        }
    }
}
