use std::str::FromStr;

use super::NwqoTerm;
use crate::error::{Error, Result};
use crate::ordinal::Ordinal;

// sum  := prod ('+' sum)?
// prod := atom ('*' prod)?
// atom := G(k) | N | N^d | PMaj(sum) | PMin(d) | CNF(ordinal) | '(' sum ')'
struct Parser<'a> {
    s: &'a str,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn skip_ws(&mut self) {
        while self.s[self.pos..].starts_with(char::is_whitespace) {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.s[self.pos..].chars().next()
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    fn err<T>(&self, msg: &str) -> Result<T> {
        Err(Error::Parse(format!("{msg} at offset {} in term '{}'", self.pos, self.s)))
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            self.err(&format!("expected '{c}'"))
        }
    }

    fn nat(&mut self) -> Result<u64> {
        self.skip_ws();
        let len = self.s[self.pos..].bytes().take_while(u8::is_ascii_digit).count();
        if len == 0 {
            return self.err("expected a number");
        }
        let v = self.s[self.pos..self.pos + len].parse().map_err(|_| Error::Parse("number too large".into()))?;
        self.pos += len;
        Ok(v)
    }

    fn sum(&mut self) -> Result<NwqoTerm> {
        let a = self.prod()?;
        if self.eat('+') {
            Ok(NwqoTerm::sum(a, self.sum()?))
        } else {
            Ok(a)
        }
    }

    fn prod(&mut self) -> Result<NwqoTerm> {
        let a = self.atom()?;
        if self.eat('*') {
            Ok(NwqoTerm::product(a, self.prod()?))
        } else {
            Ok(a)
        }
    }

    fn atom(&mut self) -> Result<NwqoTerm> {
        if self.eat('(') {
            let t = self.sum()?;
            self.expect(')')?;
            return Ok(t);
        }
        self.skip_ws();
        let len = self.s[self.pos..].bytes().take_while(u8::is_ascii_alphabetic).count();
        let id = &self.s[self.pos..self.pos + len];
        self.pos += len;
        match id {
            "G" => {
                self.expect('(')?;
                let k = self.nat()?;
                self.expect(')')?;
                Ok(NwqoTerm::Gamma(k))
            }
            "N" => {
                if self.eat('^') {
                    let d = self.nat()?;
                    if d == 0 {
                        return self.err("N^0 is not supported");
                    }
                    Ok(NwqoTerm::nat_pow(d as usize))
                } else {
                    Ok(NwqoTerm::Nat)
                }
            }
            "PMaj" => {
                self.expect('(')?;
                let t = self.sum()?;
                self.expect(')')?;
                Ok(NwqoTerm::maj(t))
            }
            "PMin" => {
                self.expect('(')?;
                let d = self.nat()?;
                self.expect(')')?;
                if d == 0 {
                    return self.err("PMin needs d ≥ 1");
                }
                Ok(NwqoTerm::MinPow(d as usize))
            }
            "CNF" => {
                self.expect('(')?;
                let start = self.pos;
                let mut depth = 1usize;
                for (i, c) in self.s[start..].char_indices() {
                    match c {
                        '(' => depth += 1,
                        ')' => {
                            depth -= 1;
                            if depth == 0 {
                                let a: Ordinal = self.s[start..start + i].parse()?;
                                self.pos = start + i + 1;
                                return Ok(NwqoTerm::Ord(a));
                            }
                        }
                        _ => {}
                    }
                }
                self.err("unbalanced CNF(...)")
            }
            "" => self.err("expected a term"),
            other => self.err(&format!("unknown constructor '{other}'")),
        }
    }
}

impl FromStr for NwqoTerm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut p = Parser { s, pos: 0 };
        let t = p.sum()?;
        if p.peek().is_some() {
            return p.err("trailing input");
        }
        Ok(t)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trips() {
        for s in [
            "G(3)",
            "N",
            "N^2",
            "G(2) + G(2)",
            "G(2) * N",
            "PMaj(N^3)",
            "PMin(2)",
            "CNF(w^2*3 + w + 1)",
            "(G(1) + N) * PMaj(N)",
            "N^2 * N",
            "(G(1) + G(2)) + N",
        ] {
            let t: NwqoTerm = s.parse().unwrap();
            assert_eq!(t.to_string(), s);
        }
        assert_eq!("N*N".parse::<NwqoTerm>().unwrap(), NwqoTerm::nat_pow(2));
        for bad in ["", "G()", "N^0", "PMin(0)", "Q(1)", "CNF(w", "N +"] {
            assert!(bad.parse::<NwqoTerm>().is_err(), "{bad}");
        }
    }
}
