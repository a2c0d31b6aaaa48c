//! Ordinals below epsilon-zero in Cantor normal form.
//!
//! An ordinal is stored in strict form: a list of `(exponent, coefficient)`
//! terms with strictly decreasing exponents and coefficients at least one.
//! Zero is the empty list. Equality is structural because the form is unique.

mod enumerate;
mod parse;

pub use enumerate::{enumerate_below, for_each_below, max_below};

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Ordinal {
    terms: Vec<Term>,
}

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Term {
    pub exp: Ordinal,
    pub coef: BigUint,
}

impl Ordinal {
    pub fn zero() -> Self {
        Ordinal { terms: Vec::new() }
    }

    pub fn one() -> Self {
        Ordinal::from_u64(1)
    }

    pub fn from_u64(n: u64) -> Self {
        Ordinal::finite(BigUint::from(n))
    }

    pub fn finite(n: BigUint) -> Self {
        if n.is_zero() {
            Ordinal::zero()
        } else {
            Ordinal { terms: vec![Term { exp: Ordinal::zero(), coef: n }] }
        }
    }

    pub fn omega() -> Self {
        Ordinal::omega_pow(Ordinal::one())
    }

    /// `ω^e`.
    pub fn omega_pow(e: Ordinal) -> Self {
        Ordinal::monomial(e, BigUint::one())
    }

    /// `ω^e · c`; `c = 0` gives zero.
    pub fn monomial(e: Ordinal, c: BigUint) -> Self {
        if c.is_zero() {
            Ordinal::zero()
        } else {
            Ordinal { terms: vec![Term { exp: e, coef: c }] }
        }
    }

    /// Builds an ordinal from terms already in strict form.
    pub fn from_terms(terms: Vec<Term>) -> Result<Self> {
        for w in terms.windows(2) {
            if w[0].exp <= w[1].exp {
                return Err(Error::Parse("exponents must strictly decrease".into()));
            }
        }
        if terms.iter().any(|t| t.coef.is_zero()) {
            return Err(Error::Parse("coefficients must be positive".into()));
        }
        Ok(Ordinal { terms })
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// The value if the ordinal is finite.
    pub fn as_finite(&self) -> Option<BigUint> {
        match self.terms.as_slice() {
            [] => Some(BigUint::zero()),
            [t] if t.exp.is_zero() => Some(t.coef.clone()),
            _ => None,
        }
    }

    pub fn as_u64(&self) -> Option<u64> {
        self.as_finite().and_then(|v| v.to_u64())
    }

    pub fn is_finite(&self) -> bool {
        self.as_finite().is_some()
    }

    pub fn is_successor(&self) -> bool {
        self.terms.last().is_some_and(|t| t.exp.is_zero())
    }

    pub fn is_limit(&self) -> bool {
        self.terms.last().is_some_and(|t| !t.exp.is_zero())
    }

    pub fn leading_exponent(&self) -> Option<&Ordinal> {
        self.terms.first().map(|t| &t.exp)
    }

    /// `α` for `α + 1`; `None` on zero and limits.
    pub fn pred_successor(&self) -> Option<Ordinal> {
        if !self.is_successor() {
            return None;
        }
        let mut terms = self.terms.clone();
        let last = terms.last_mut().unwrap();
        if last.coef.is_one() {
            terms.pop();
        } else {
            last.coef -= 1u32;
        }
        Some(Ordinal { terms })
    }

    pub fn succ(&self) -> Ordinal {
        self.add(&Ordinal::one())
    }

    /// Ordinary (non-commutative) ordinal addition.
    pub fn add(&self, other: &Ordinal) -> Ordinal {
        let Some(lead) = other.terms.first() else {
            return self.clone();
        };
        let mut terms: Vec<Term> = self.terms.iter().take_while(|t| t.exp > lead.exp).cloned().collect();
        let mut rest = other.terms.iter();
        if let Some(t) = self.terms.iter().find(|t| t.exp == lead.exp) {
            let first = rest.next().unwrap();
            terms.push(Term { exp: first.exp.clone(), coef: &t.coef + &first.coef });
        }
        terms.extend(rest.cloned());
        Ordinal { terms }
    }

    /// `α · c` for a natural `c`.
    pub fn mul_nat(&self, c: &BigUint) -> Ordinal {
        if c.is_zero() || self.is_zero() {
            return Ordinal::zero();
        }
        let mut terms = self.terms.clone();
        terms[0].coef *= c;
        Ordinal { terms }
    }

    /// Natural (Hessenberg) sum.
    pub fn nat_sum(&self, other: &Ordinal) -> Ordinal {
        let (mut a, mut b) = (self.terms.iter().peekable(), other.terms.iter().peekable());
        let mut terms = Vec::with_capacity(self.terms.len() + other.terms.len());
        loop {
            let t = match (a.peek(), b.peek()) {
                (None, None) => break,
                (Some(_), None) => a.next().unwrap().clone(),
                (None, Some(_)) => b.next().unwrap().clone(),
                (Some(x), Some(y)) => match x.exp.cmp(&y.exp) {
                    Ordering::Greater => a.next().unwrap().clone(),
                    Ordering::Less => b.next().unwrap().clone(),
                    Ordering::Equal => {
                        let (x, y) = (a.next().unwrap(), b.next().unwrap());
                        Term { exp: x.exp.clone(), coef: &x.coef + &y.coef }
                    }
                },
            };
            terms.push(t);
        }
        Ordinal { terms }
    }

    /// Natural (Hessenberg) product.
    pub fn nat_product(&self, other: &Ordinal) -> Ordinal {
        let mut acc = Ordinal::zero();
        for x in &self.terms {
            for y in &other.terms {
                let m = Ordinal::monomial(x.exp.nat_sum(&y.exp), &x.coef * &y.coef);
                acc = acc.nat_sum(&m);
            }
        }
        acc
    }

    /// `N α`: the largest coefficient appearing anywhere in the term tree.
    pub fn norm(&self) -> BigUint {
        let mut best = BigUint::zero();
        for t in &self.terms {
            best = best.max(t.coef.clone()).max(t.exp.norm());
        }
        best
    }

    /// Norm saturated into a machine word.
    pub fn norm_u64(&self) -> u64 {
        self.norm().to_u64().unwrap_or(u64::MAX)
    }

    pub fn is_k_lean(&self, k: u64) -> bool {
        self.norm() <= BigUint::from(k)
    }

    /// `λ(x)` for a limit `λ`.
    pub fn fundamental(&self, x: u64) -> Result<Ordinal> {
        if !self.is_limit() {
            return Err(Error::NotALimit(self.to_string()));
        }
        // Split λ = γ + ω^e, peeling one copy of the last summand.
        let mut gamma = self.terms.clone();
        let last = gamma.last_mut().unwrap();
        let e = last.exp.clone();
        if last.coef.is_one() {
            gamma.pop();
        } else {
            last.coef -= 1u32;
        }
        let gamma = Ordinal { terms: gamma };
        let tail = match e.pred_successor() {
            Some(p) => Ordinal::monomial(p, BigUint::from(x) + 1u32),
            None => Ordinal::omega_pow(e.fundamental(x)?),
        };
        Ok(gamma.add(&tail))
    }

    /// `P_x(α)` for `α > 0`.
    pub fn predecessor(&self, x: u64) -> Result<Ordinal> {
        if self.is_zero() {
            return Err(Error::ZeroArgument);
        }
        let mut cur = self.clone();
        loop {
            match cur.pred_successor() {
                Some(p) => return Ok(p),
                None => cur = cur.fundamental(x)?,
            }
        }
    }

    /// `self ⪯ₓ b`: whether `self` is reached from `b` by repeatedly taking
    /// predecessors and `x`-th fundamental-sequence elements.
    pub fn pointwise_le(&self, b: &Ordinal, x: u64) -> bool {
        let mut cur = b.clone();
        loop {
            match cur.cmp(self) {
                Ordering::Equal => return true,
                Ordering::Less => return false,
                Ordering::Greater => {}
            }
            // Every ordinal on the path from δ + ω^e down to δ is at least δ,
            // and δ itself is on the path, so skip straight there when possible.
            let mut delta = cur.terms.clone();
            let last = delta.last_mut().unwrap();
            if last.coef.is_one() {
                delta.pop();
            } else {
                last.coef -= 1u32;
            }
            let delta = Ordinal { terms: delta };
            if *self <= delta {
                cur = delta;
                continue;
            }
            cur = match cur.pred_successor() {
                Some(p) => p,
                None => cur.fundamental(x).expect("limit checked"),
            };
        }
    }

    /// Non-strict expansion: every exponent repeated by its coefficient.
    pub fn expand(&self) -> Result<Vec<Ordinal>> {
        let mut out = Vec::new();
        for t in &self.terms {
            let c = t.coef.to_usize().filter(|c| *c <= 1 << 24).ok_or_else(|| {
                Error::OutOfRange(format!("coefficient {} too large to expand", t.coef))
            })?;
            out.extend(std::iter::repeat_n(t.exp.clone(), c));
        }
        Ok(out)
    }

    /// Coefficient of `ω^e` (zero if absent).
    pub fn coefficient_of(&self, e: &Ordinal) -> BigUint {
        self.terms.iter().find(|t| &t.exp == e).map(|t| t.coef.clone()).unwrap_or_default()
    }

    /// `ω^(ω^d)` as an ordinal.
    pub fn omega_tower2(d: u64) -> Ordinal {
        Ordinal::omega_pow(Ordinal::omega_pow(Ordinal::from_u64(d)))
    }
}

impl Ord for Ordinal {
    fn cmp(&self, other: &Self) -> Ordering {
        for (a, b) in self.terms.iter().zip(&other.terms) {
            match a.exp.cmp(&b.exp).then_with(|| a.coef.cmp(&b.coef)) {
                Ordering::Equal => {}
                o => return o,
            }
        }
        self.terms.len().cmp(&other.terms.len())
    }
}

impl PartialOrd for Ordinal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Ordinal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, t) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            if t.exp.is_zero() {
                write!(f, "{}", t.coef)?;
                continue;
            }
            write!(f, "w")?;
            if !t.exp.is_one_ord() {
                if t.exp.is_finite() || t.exp == Ordinal::omega() {
                    write!(f, "^{}", t.exp)?;
                } else {
                    write!(f, "^({})", t.exp)?;
                }
            }
            if !t.coef.is_one() {
                write!(f, "*{}", t.coef)?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Ordinal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl Ordinal {
    fn is_one_ord(&self) -> bool {
        matches!(self.terms.as_slice(), [t] if t.exp.is_zero() && t.coef.is_one())
    }
}

impl From<u64> for Ordinal {
    fn from(n: u64) -> Self {
        Ordinal::from_u64(n)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn o(s: &str) -> Ordinal {
        s.parse().unwrap()
    }

    #[test]
    fn cmp_examples() {
        assert_eq!(o("0").cmp(&o("0")), Ordering::Equal);
        assert_eq!(o("w").cmp(&o("w^w")), Ordering::Less);
        assert_eq!(o("w^2+1").cmp(&o("w*3")), Ordering::Greater);
    }

    #[test]
    fn sums_and_products() {
        assert_eq!(o("w+1").nat_sum(&o("w")), o("w*2+1"));
        assert_eq!(o("w").nat_product(&o("w")), o("w^2"));
        assert_eq!(o("w^w").nat_product(&o("w")), o("w^(w+1)"));
        assert_eq!(o("w^3*2 + 5").nat_product(&o("1")), o("w^3*2 + 5"));
        assert_eq!(o("w+1").add(&o("w")), o("w*2"));
        assert_eq!(o("w").add(&o("3")), o("w+3"));
    }

    #[test]
    fn norms() {
        assert_eq!(o("0").norm(), BigUint::zero());
        assert_eq!(o("7").norm(), BigUint::from(7u32));
        assert_eq!(o("w^w*2 + 3").norm(), BigUint::from(3u32));
        assert!(!o("w^w*2+3").is_k_lean(2));
        assert!(Ordinal::zero().is_k_lean(0));
        for d in 1..=6 {
            assert!(Ordinal::omega_pow(Ordinal::omega_pow(Ordinal::from_u64(d - 1))).is_k_lean(d));
        }
    }

    #[test]
    fn fundamental_examples() {
        for x in 0..5 {
            assert_eq!(o("w").fundamental(x).unwrap(), Ordinal::from_u64(x + 1));
        }
        assert_eq!(o("w^w").fundamental(2).unwrap(), o("w^3"));
        assert_eq!(o("w^(w^2)").fundamental(1).unwrap(), o("w^(w*2)"));
        assert_eq!(o("w*2").fundamental(3).unwrap(), o("w+4"));
        assert!(matches!(o("w+1").fundamental(0), Err(Error::NotALimit(_))));
        assert!(o("0").fundamental(0).is_err());
    }

    #[test]
    fn predecessor_examples() {
        assert_eq!(o("5").predecessor(9).unwrap(), o("4"));
        assert_eq!(o("w").predecessor(4).unwrap(), o("4"));
        assert_eq!(o("w^2").predecessor(2).unwrap(), o("w*2+2"));
        assert_eq!(o("0").predecessor(1), Err(Error::ZeroArgument));
    }

    #[test]
    fn pointwise_examples() {
        let a = o("w^2+w");
        assert!(a.pointwise_le(&a, 3));
        for n in 0..6 {
            assert!(!Ordinal::from_u64(n + 2).pointwise_le(&o("w"), n));
            assert!(Ordinal::from_u64(n + 1).pointwise_le(&o("w"), n));
        }
        assert!(o("w*2+2").pointwise_le(&o("w^2"), 2));
        assert!(!o("w*3+1").pointwise_le(&o("w^2"), 2));
    }
}
