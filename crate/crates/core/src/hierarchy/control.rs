use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};

/// A strictly increasing inflationary function on the naturals.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum ControlFunction {
    Successor,
    Identity,
    /// `a·x + b`
    Affine { a: u64, b: u64 },
    /// `c₀ + c₁x + c₂x² + …`
    Polynomial(Vec<u64>),
    /// `x(x+1)^d`
    Phi(u32),
    /// `d(x+1)`
    LinearP(u32),
    /// `(x+1)^d`
    PowerQ(u32),
    /// `4x·g(x)`
    FourXTimes(Box<ControlFunction>),
    /// `4kx·q(g(x))` with `q(x) = (x+1)^d`
    TBound { k: u64, d: u32, g: Box<ControlFunction> },
    /// `k·f(x)`
    Scaled(u64, Box<ControlFunction>),
    /// `outer(inner(x))`
    Compose(Box<ControlFunction>, Box<ControlFunction>),
    /// `f(x) + g(x)`
    Add(Box<ControlFunction>, Box<ControlFunction>),
}

impl ControlFunction {
    pub fn compose(outer: ControlFunction, inner: ControlFunction) -> Self {
        match (outer, inner) {
            (ControlFunction::Identity, f) | (f, ControlFunction::Identity) => f,
            (o, i) => ControlFunction::Compose(Box::new(o), Box::new(i)),
        }
    }

    pub fn apply(&self, x: &BigUint) -> BigUint {
        use ControlFunction::*;
        match self {
            Successor => x + 1u32,
            Identity => x.clone(),
            Affine { a, b } => x * *a + *b,
            Polynomial(cs) => {
                let mut acc = BigUint::zero();
                for c in cs.iter().rev() {
                    acc = acc * x + *c;
                }
                acc
            }
            Phi(d) => x * (x + 1u32).pow(*d),
            LinearP(d) => (x + 1u32) * *d,
            PowerQ(d) => (x + 1u32).pow(*d),
            FourXTimes(g) => x * 4u32 * g.apply(x),
            TBound { k, d, g } => x * 4u32 * *k * (g.apply(x) + 1u32).pow(*d),
            Scaled(k, f) => f.apply(x) * *k,
            Compose(o, i) => o.apply(&i.apply(x)),
            Add(f, g) => f.apply(x) + g.apply(x),
        }
    }

    pub fn apply_u64(&self, x: u64) -> Option<u64> {
        self.apply(&BigUint::from(x)).to_u64()
    }

    /// `f^i(x)`.
    pub fn iterate(&self, x: &BigUint, i: u64) -> BigUint {
        let mut v = x.clone();
        for _ in 0..i {
            v = self.apply(&v);
        }
        v
    }

    /// Checks the parameter conditions and samples monotonicity on `[0, 64]`.
    pub fn validate(&self) -> Result<()> {
        use ControlFunction::*;
        let bad = |m: &str| Err(Error::InvalidControl(format!("{self}: {m}")));
        match self {
            Affine { a, b } if *a == 0 || *b == 0 => return bad("needs a ≥ 1 and b ≥ 1"),
            Polynomial(cs) if cs.len() < 2 || cs.last() == Some(&0) => return bad("degree must be at least 1"),
            Phi(d) | LinearP(d) | PowerQ(d) if *d == 0 => return bad("needs d ≥ 1"),
            TBound { k, d, .. } if *k == 0 || *d == 0 => return bad("needs k, d ≥ 1"),
            Scaled(k, _) if *k == 0 => return bad("needs k ≥ 1"),
            _ => {}
        }
        match self {
            FourXTimes(g) | TBound { g, .. } | Scaled(_, g) => g.validate()?,
            Compose(f, g) | Add(f, g) => {
                f.validate()?;
                g.validate()?;
            }
            _ => {}
        }
        let mut prev: Option<BigUint> = None;
        for x in 0u32..=64 {
            let xb = BigUint::from(x);
            let v = self.apply(&xb);
            if v < xb {
                return bad(&format!("not inflationary at {x}"));
            }
            if prev.as_ref().is_some_and(|p| v <= *p) {
                return bad(&format!("not strictly increasing at {x}"));
            }
            prev = Some(v);
        }
        Ok(())
    }
}

impl fmt::Display for ControlFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use ControlFunction::*;
        match self {
            Successor => write!(f, "succ"),
            Identity => write!(f, "id"),
            Affine { a: 1, b } => write!(f, "x+{b}"),
            Affine { a, b } => write!(f, "{a}x+{b}"),
            Polynomial(cs) => {
                let parts: Vec<String> = cs.iter().map(|c| c.to_string()).collect();
                write!(f, "poly({})", parts.join(","))
            }
            Phi(d) => write!(f, "phi({d})"),
            LinearP(d) => write!(f, "p({d})"),
            PowerQ(d) => write!(f, "q({d})"),
            FourXTimes(g) => write!(f, "h({g})"),
            TBound { k, d, g } => write!(f, "t({k},{d},{g})"),
            Scaled(k, g) => write!(f, "scale({k},{g})"),
            Compose(o, i) => write!(f, "comp({o},{i})"),
            Add(a, b) => write!(f, "add({a},{b})"),
        }
    }
}

struct Cursor<'a> {
    s: &'a str,
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn rest(&self) -> &'a str {
        &self.s[self.pos..]
    }

    fn skip_ws(&mut self) {
        while self.rest().starts_with(char::is_whitespace) {
            self.pos += 1;
        }
    }

    fn eat(&mut self, t: &str) -> bool {
        self.skip_ws();
        if self.rest().starts_with(t) {
            self.pos += t.len();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, t: &str) -> Result<()> {
        if self.eat(t) {
            Ok(())
        } else {
            Err(Error::Parse(format!("expected '{t}' at offset {} in control '{}'", self.pos, self.s)))
        }
    }

    fn nat(&mut self) -> Result<u64> {
        self.skip_ws();
        let len = self.rest().bytes().take_while(u8::is_ascii_digit).count();
        if len == 0 {
            return Err(Error::Parse(format!("expected a number at offset {} in control '{}'", self.pos, self.s)));
        }
        let v = self.rest()[..len].parse().map_err(|_| Error::Parse("number too large".into()))?;
        self.pos += len;
        Ok(v)
    }

    fn ident(&mut self) -> &'a str {
        self.skip_ws();
        let len = self.rest().bytes().take_while(|b| b.is_ascii_alphabetic()).count();
        let id = &self.rest()[..len];
        self.pos += len;
        id
    }

    fn control(&mut self) -> Result<ControlFunction> {
        use ControlFunction::*;
        self.skip_ws();
        if self.rest().starts_with(|c: char| c.is_ascii_digit()) {
            // `<a>x+<b>`
            let a = self.nat()?;
            self.expect("x")?;
            self.expect("+")?;
            let b = self.nat()?;
            return Ok(Affine { a, b });
        }
        let id = self.ident();
        let small = |v: u64| u32::try_from(v).map_err(|_| Error::Parse("exponent too large".into()));
        let cf = match id {
            "succ" | "S" => Successor,
            "id" => Identity,
            "x" => {
                self.expect("+")?;
                Affine { a: 1, b: self.nat()? }
            }
            "affine" => {
                self.expect("(")?;
                let a = self.nat()?;
                self.expect(",")?;
                let b = self.nat()?;
                self.expect(")")?;
                Affine { a, b }
            }
            "poly" => {
                self.expect("(")?;
                let mut cs = vec![self.nat()?];
                while self.eat(",") {
                    cs.push(self.nat()?);
                }
                self.expect(")")?;
                Polynomial(cs)
            }
            "phi" | "p" | "q" => {
                self.expect("(")?;
                let d = small(self.nat()?)?;
                self.expect(")")?;
                match id {
                    "phi" => Phi(d),
                    "p" => LinearP(d),
                    _ => PowerQ(d),
                }
            }
            "h" => {
                self.expect("(")?;
                let g = self.control()?;
                self.expect(")")?;
                FourXTimes(Box::new(g))
            }
            "t" => {
                self.expect("(")?;
                let k = self.nat()?;
                self.expect(",")?;
                let d = small(self.nat()?)?;
                self.expect(",")?;
                let g = self.control()?;
                self.expect(")")?;
                TBound { k, d, g: Box::new(g) }
            }
            "scale" => {
                self.expect("(")?;
                let k = self.nat()?;
                self.expect(",")?;
                let g = self.control()?;
                self.expect(")")?;
                Scaled(k, Box::new(g))
            }
            "comp" | "add" => {
                self.expect("(")?;
                let a = self.control()?;
                self.expect(",")?;
                let b = self.control()?;
                self.expect(")")?;
                if id == "comp" {
                    Compose(Box::new(a), Box::new(b))
                } else {
                    Add(Box::new(a), Box::new(b))
                }
            }
            other => return Err(Error::Parse(format!("unknown control function '{other}'"))),
        };
        Ok(cf)
    }
}

impl FromStr for ControlFunction {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut c = Cursor { s, pos: 0 };
        let cf = c.control()?;
        c.skip_ws();
        if !c.rest().is_empty() {
            return Err(Error::Parse(format!("trailing input in control '{s}'")));
        }
        Ok(cf)
    }
}

impl Default for ControlFunction {
    fn default() -> Self {
        ControlFunction::Successor
    }
}

/// `f^i(x)` for small arguments, or `None` past a machine word.
pub fn iterate_u64(f: &ControlFunction, x: u64, i: u64) -> Option<u64> {
    let mut v = BigUint::from(x);
    for _ in 0..i {
        v = f.apply(&v);
        if v.bits() > 64 {
            return None;
        }
    }
    v.to_u64()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_print() {
        for s in ["succ", "id", "x+2", "3x+1", "poly(1,2,3)", "phi(2)", "p(3)", "q(2)", "h(succ)", "t(1,2,x+2)", "comp(q(2),succ)", "add(p(1),succ)", "scale(2,q(1))"] {
            let c: ControlFunction = s.parse().unwrap();
            assert_eq!(c.to_string(), s);
        }
        assert_eq!("affine(1,2)".parse::<ControlFunction>().unwrap(), ControlFunction::Affine { a: 1, b: 2 });
        assert!("foo".parse::<ControlFunction>().is_err());
        assert!("h(succ".parse::<ControlFunction>().is_err());
    }

    #[test]
    fn values() {
        let x = BigUint::from(3u32);
        let v = |s: &str| s.parse::<ControlFunction>().unwrap().apply(&x);
        assert_eq!(v("succ"), BigUint::from(4u32));
        assert_eq!(v("phi(2)"), BigUint::from(48u32));
        assert_eq!(v("p(2)"), BigUint::from(8u32));
        assert_eq!(v("q(2)"), BigUint::from(16u32));
        assert_eq!(v("h(succ)"), BigUint::from(48u32));
        assert_eq!(v("t(1,1,succ)"), BigUint::from(60u32));
        assert_eq!(v("poly(1,0,2)"), BigUint::from(19u32));
    }

    #[test]
    fn validation() {
        for s in ["succ", "id", "x+2", "phi(1)", "p(1)", "p(3)", "q(2)", "h(succ)", "t(1,2,succ)", "poly(0,1,1)"] {
            s.parse::<ControlFunction>().unwrap().validate().unwrap();
        }
        assert!(ControlFunction::Affine { a: 1, b: 0 }.validate().is_err());
        assert!(ControlFunction::Polynomial(vec![5]).validate().is_err());
        assert!(ControlFunction::Phi(0).validate().is_err());
    }
}
