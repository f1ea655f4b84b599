//! Text form of polynomials.
//!
//! Printing always yields an expanded sum of terms, highest term first:
//! `e3*a^2*b + x + 1`. A coefficient `eK` stands for eta^K and is omitted
//! when it equals 1. The parser accepts that form and, for convenience when
//! writing down factored expressions, also parentheses, integer literals
//! (read mod 2) and powers of parenthesized groups.

use std::fmt;

use thiserror::Error;

use super::{Domain, Gf8, MPoly, Var, NVARS};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("parse error at byte {pos}: {msg}")]
pub struct ParseError {
    pub pos: usize,
    pub msg: String,
}

impl fmt::Display for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (e, c)) in self.terms.iter().rev().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            let mut factors: Vec<String> = Vec::new();
            if *c != Gf8::ONE {
                factors.push(c.to_string());
            }
            for v in Var::ALL {
                match e[v.index()] {
                    0 => {}
                    1 => factors.push(v.name().to_string()),
                    k => factors.push(format!("{}^{k}", v.name())),
                }
            }
            if factors.is_empty() {
                f.write_str("1")?;
            } else {
                f.write_str(&factors.join("*"))?;
            }
        }
        Ok(())
    }
}

impl MPoly {
    pub fn parse(s: &str, domain: Domain) -> Result<MPoly, ParseError> {
        let mut p = Parser {
            src: s.as_bytes(),
            pos: 0,
            domain,
        };
        let out = p.expr()?;
        p.skip_ws();
        if p.pos != p.src.len() {
            return Err(p.error("unexpected trailing input"));
        }
        Ok(out)
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    domain: Domain,
}

impl Parser<'_> {
    fn error(&self, msg: &str) -> ParseError {
        ParseError {
            pos: self.pos,
            msg: msg.to_string(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn expr(&mut self) -> Result<MPoly, ParseError> {
        let mut acc = self.product()?;
        while self.peek() == Some(b'+') {
            self.pos += 1;
            acc = &acc + &self.product()?;
        }
        Ok(acc)
    }

    fn product(&mut self) -> Result<MPoly, ParseError> {
        let mut acc = self.power()?;
        while self.peek() == Some(b'*') {
            self.pos += 1;
            acc = &acc * &self.power()?;
        }
        Ok(acc)
    }

    fn power(&mut self) -> Result<MPoly, ParseError> {
        let base = self.atom()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            self.skip_ws();
            let e = self.integer()?;
            let e = u32::try_from(e).map_err(|_| self.error("exponent too large"))?;
            return Ok(base.pow(e));
        }
        Ok(base)
    }

    fn integer(&mut self) -> Result<u64, ParseError> {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error("expected an integer"));
        }
        std::str::from_utf8(&self.src[start..self.pos])
            .unwrap()
            .parse()
            .map_err(|_| self.error("integer out of range"))
    }

    fn atom(&mut self) -> Result<MPoly, ParseError> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let inner = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.error("expected ')'"));
                }
                self.pos += 1;
                Ok(inner)
            }
            Some(c) if c.is_ascii_digit() => {
                let n = self.integer()?;
                Ok(if n % 2 == 1 {
                    MPoly::one(self.domain)
                } else {
                    MPoly::zero(self.domain)
                })
            }
            Some(c) if c.is_ascii_alphabetic() => {
                let start = self.pos;
                while self.pos < self.src.len() && self.src[self.pos].is_ascii_alphabetic() {
                    self.pos += 1;
                }
                let word = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
                if word == "e" {
                    if self.domain != Domain::Gf8 {
                        self.pos = start;
                        return Err(self.error("GF(8) coefficient in a GF(2) polynomial"));
                    }
                    let k = self.integer()?;
                    return Ok(MPoly::constant(Domain::Gf8, Gf8::eta_pow((k % 7) as u32)));
                }
                match Var::from_name(word) {
                    Some(v) => {
                        let mut e = [0u16; NVARS];
                        e[v.index()] = 1;
                        Ok(MPoly::monomial(self.domain, Gf8::ONE, e))
                    }
                    None => {
                        self.pos = start;
                        Err(self.error(&format!("unknown symbol {word:?}")))
                    }
                }
            }
            Some(_) => Err(self.error("unexpected character")),
            None => Err(self.error("unexpected end of input")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn prints_canonically() {
        let p = MPoly::parse("y + x + 1", Domain::Gf2).unwrap();
        assert_eq!(p.to_string(), "x + y + 1");
        let q = MPoly::parse("a*e3*b*a", Domain::Gf8).unwrap();
        assert_eq!(q.to_string(), "e3*a^2*b");
        assert_eq!(MPoly::zero(Domain::Gf2).to_string(), "0");
        assert_eq!(MPoly::parse("xi^5*b", Domain::Gf8).unwrap().to_string(), "b*xi^5");
    }

    #[test]
    fn factored_input() {
        let p = MPoly::parse("(u + 1)^2*a", Domain::Gf2).unwrap();
        assert_eq!(p.to_string(), "a*u^2 + a");
        let lit = MPoly::parse("u^8*b^14*u^8", Domain::Gf2).unwrap();
        assert_eq!(lit.to_string(), "b^14*u^16");
        assert!(MPoly::parse("3*x + x", Domain::Gf2).unwrap().is_zero());
    }

    #[test]
    fn rejects_bad_input() {
        assert!(MPoly::parse("x +", Domain::Gf2).is_err());
        assert!(MPoly::parse("w", Domain::Gf2).is_err());
        assert!(MPoly::parse("e3*x", Domain::Gf2).is_err());
        assert!(MPoly::parse("(x + y", Domain::Gf2).is_err());
        assert!(MPoly::parse("x y", Domain::Gf2).is_err());
    }

    fn any_poly() -> impl Strategy<Value = MPoly> {
        let term = (prop::collection::vec(0u16..=5, NVARS), 1u8..8);
        (prop::bool::ANY, prop::collection::vec(term, 0..8)).prop_map(|(gf8, ts)| {
            let domain = if gf8 { Domain::Gf8 } else { Domain::Gf2 };
            MPoly::from_terms(
                domain,
                ts.into_iter().map(|(v, c)| {
                    let mut e = [0u16; NVARS];
                    e.copy_from_slice(&v);
                    let c = if gf8 { Gf8::from_bits(c).unwrap() } else { Gf8::ONE };
                    (e, c)
                }),
            )
            .unwrap()
        })
    }

    proptest! {
        #[test]
        fn print_parse_round_trip(p in any_poly()) {
            let text = p.to_string();
            let back = MPoly::parse(&text, p.domain()).unwrap();
            prop_assert_eq!(back.to_string(), text);
            prop_assert_eq!(back, p);
        }
    }
}
