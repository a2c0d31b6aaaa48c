use std::str::FromStr;

use num_bigint::BigUint;

use super::Ordinal;
use crate::error::{Error, Result};

/// Grammar (whitespace ignored):
///
/// ```text
/// sum     := product ('+' product)*
/// product := power ('*' nat)*
/// power   := 'w' ('^' power)? | atom
/// atom    := nat | '(' sum ')'
/// ```
///
/// `+` is ordinary ordinal addition, so strict-form text parses to itself.
struct Parser<'a> {
    s: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn peek(&mut self) -> Option<u8> {
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
        self.s.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn err<T>(&self, msg: &str) -> Result<T> {
        Err(Error::Parse(format!("{msg} at offset {} in ordinal", self.pos)))
    }

    fn nat(&mut self) -> Result<BigUint> {
        self.peek();
        let start = self.pos;
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return self.err("expected a natural number");
        }
        let text = std::str::from_utf8(&self.s[start..self.pos]).unwrap();
        Ok(text.parse().unwrap())
    }

    fn sum(&mut self) -> Result<Ordinal> {
        let mut acc = self.product()?;
        while self.eat(b'+') {
            let rhs = self.product()?;
            acc = acc.add(&rhs);
        }
        Ok(acc)
    }

    fn product(&mut self) -> Result<Ordinal> {
        let mut acc = self.power()?;
        while self.eat(b'*') {
            let c = self.nat()?;
            acc = acc.mul_nat(&c);
        }
        Ok(acc)
    }

    fn power(&mut self) -> Result<Ordinal> {
        match self.peek() {
            Some(b'w') => {
                self.pos += 1;
                if self.eat(b'^') {
                    let e = self.power()?;
                    Ok(Ordinal::omega_pow(e))
                } else {
                    Ok(Ordinal::omega())
                }
            }
            Some(b'(') => {
                self.pos += 1;
                let inner = self.sum()?;
                if !self.eat(b')') {
                    return self.err("expected ')'");
                }
                if self.peek() == Some(b'^') {
                    return self.err("only w may be raised to a power");
                }
                Ok(inner)
            }
            Some(c) if c.is_ascii_digit() => {
                let n = self.nat()?;
                if self.peek() == Some(b'^') {
                    return self.err("only w may be raised to a power");
                }
                Ok(Ordinal::finite(n))
            }
            _ => self.err("expected an ordinal"),
        }
    }
}

impl FromStr for Ordinal {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut p = Parser { s: s.as_bytes(), pos: 0 };
        let v = p.sum()?;
        if p.peek().is_some() {
            return p.err("trailing input");
        }
        Ok(v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trips() {
        for s in ["0", "7", "w", "w*2 + 1", "w^2", "w^w", "w^(w^2)*3 + w*2 + 5", "w^(w + 1)", "w^(w^w)"] {
            let v: Ordinal = s.parse().unwrap();
            assert_eq!(v.to_string(), s);
            assert_eq!(v.to_string().parse::<Ordinal>().unwrap(), v);
        }
    }

    #[test]
    fn right_associative_powers() {
        assert_eq!("w^w^2".parse::<Ordinal>().unwrap().to_string(), "w^(w^2)");
        assert_eq!("w^w*2+3".parse::<Ordinal>().unwrap().to_string(), "w^w*2 + 3");
        assert_eq!("(w+1)*2".parse::<Ordinal>().unwrap().to_string(), "w*2 + 1");
        assert_eq!("1 + w".parse::<Ordinal>().unwrap().to_string(), "w");
    }

    #[test]
    fn rejects_garbage() {
        for s in ["", "x", "w^", "2^w", "(w", "w**2", "w 2"] {
            assert!(s.parse::<Ordinal>().is_err(), "{s}");
        }
    }
}
