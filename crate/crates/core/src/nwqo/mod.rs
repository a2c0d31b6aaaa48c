//! Normed well-quasi-orders built from finite antichains, ℕ, ordinal
//! segments, sums, products, majoring and minoring powersets, and residuals.

mod enumerate;
mod json;
mod parse;

pub(crate) use enumerate::maximal_ball;
pub use enumerate::{enumerate_residual, maximal_elements, subsets_up_to, DEFAULT_LIMIT};

use std::fmt;

use num_bigint::BigUint;

use crate::error::{Error, Result};
use crate::hierarchy::ControlFunction;
use crate::ordinal::Ordinal;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum NwqoTerm {
    /// `k` pairwise incomparable elements of norm 0.
    Gamma(u64),
    Nat,
    /// Ordinals below `a`, ordered by `≤`, normed by `N`.
    Ord(Ordinal),
    Sum(Box<NwqoTerm>, Box<NwqoTerm>),
    Product(Box<NwqoTerm>, Box<NwqoTerm>),
    MajPow(Box<NwqoTerm>),
    /// Finite subsets of `ℕ^d` under the minoring order.
    MinPow(usize),
    Residual(Box<NwqoTerm>, Vec<Element>),
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Element {
    Gamma(u64),
    Nat(u64),
    Ord(Ordinal),
    Left(Box<Element>),
    Right(Box<Element>),
    Pair(Box<Element>, Box<Element>),
    /// Sorted, duplicate free.
    Set(Vec<Element>),
}

impl Element {
    pub fn left(e: Element) -> Self {
        Element::Left(Box::new(e))
    }

    pub fn right(e: Element) -> Self {
        Element::Right(Box::new(e))
    }

    pub fn pair(a: Element, b: Element) -> Self {
        Element::Pair(Box::new(a), Box::new(b))
    }

    pub fn set(mut items: Vec<Element>) -> Self {
        items.sort();
        items.dedup();
        Element::Set(items)
    }

    /// A point of `ℕ^d` as right-nested pairs.
    pub fn vector(v: &[u64]) -> Self {
        match v {
            [] => panic!("vectors have at least one coordinate"),
            [x] => Element::Nat(*x),
            [x, rest @ ..] => Element::pair(Element::Nat(*x), Element::vector(rest)),
        }
    }

    pub fn vector_set<I: IntoIterator<Item = Vec<u64>>>(pts: I) -> Self {
        Element::set(pts.into_iter().map(|p| Element::vector(&p)).collect())
    }

    pub fn as_vector(&self) -> Option<Vec<u64>> {
        let mut out = Vec::new();
        let mut cur = self;
        loop {
            match cur {
                Element::Nat(x) => {
                    out.push(*x);
                    return Some(out);
                }
                Element::Pair(a, b) => {
                    let Element::Nat(x) = **a else { return None };
                    out.push(x);
                    cur = b;
                }
                _ => return None,
            }
        }
    }

    pub fn set_items(&self) -> Option<&[Element]> {
        match self {
            Element::Set(v) => Some(v),
            _ => None,
        }
    }

    /// The points of a set of vectors.
    pub fn as_vector_set(&self) -> Option<Vec<Vec<u64>>> {
        self.set_items()?.iter().map(Element::as_vector).collect()
    }
}

impl NwqoTerm {
    pub fn sum(a: NwqoTerm, b: NwqoTerm) -> Self {
        NwqoTerm::Sum(Box::new(a), Box::new(b))
    }

    pub fn product(a: NwqoTerm, b: NwqoTerm) -> Self {
        NwqoTerm::Product(Box::new(a), Box::new(b))
    }

    pub fn maj(a: NwqoTerm) -> Self {
        NwqoTerm::MajPow(Box::new(a))
    }

    /// `ℕ^d`, right nested.
    pub fn nat_pow(d: usize) -> Self {
        assert!(d >= 1, "ℕ^0 is not supported");
        if d == 1 {
            NwqoTerm::Nat
        } else {
            NwqoTerm::product(NwqoTerm::Nat, NwqoTerm::nat_pow(d - 1))
        }
    }

    /// `P_f(ℕ^d)` with the majoring order.
    pub fn maj_nat(d: usize) -> Self {
        NwqoTerm::maj(NwqoTerm::nat_pow(d))
    }

    /// `d` when the term is exactly `ℕ^d`.
    pub fn nat_pow_dim(&self) -> Option<usize> {
        match self {
            NwqoTerm::Nat => Some(1),
            NwqoTerm::Product(a, b) if **a == NwqoTerm::Nat => b.nat_pow_dim().map(|d| d + 1),
            _ => None,
        }
    }

    /// Strips residuals, returning the base term and the accumulated forbidden list.
    pub fn split_residual(&self) -> (&NwqoTerm, Vec<Element>) {
        match self {
            NwqoTerm::Residual(b, f) => {
                let (base, mut inner) = b.split_residual();
                inner.extend(f.iter().cloned());
                (base, inner)
            }
            t => (t, Vec::new()),
        }
    }

    fn mismatch(&self, e: &Element) -> Error {
        Error::DomainMismatch { term: self.to_string(), element: e.to_string() }
    }

    /// Domain membership.
    pub fn contains(&self, e: &Element) -> bool {
        use NwqoTerm as T;
        match (self, e) {
            (T::Gamma(k), Element::Gamma(i)) => i < k,
            (T::Nat, Element::Nat(_)) => true,
            (T::Ord(a), Element::Ord(b)) => b < a,
            (T::Sum(a, _), Element::Left(x)) => a.contains(x),
            (T::Sum(_, b), Element::Right(y)) => b.contains(y),
            (T::Product(a, b), Element::Pair(x, y)) => a.contains(x) && b.contains(y),
            (T::MajPow(a), Element::Set(xs)) => canonical_set(xs) && xs.iter().all(|x| a.contains(x)),
            (T::MinPow(d), Element::Set(xs)) => {
                canonical_set(xs) && xs.iter().all(|x| x.as_vector().is_some_and(|v| v.len() == *d))
            }
            (T::Residual(base, forb), e) => base.contains(e) && forb.iter().all(|z| !base.le(z, e)),
            _ => false,
        }
    }

    fn check(&self, e: &Element) -> Result<()> {
        if self.contains(e) {
            Ok(())
        } else {
            Err(self.mismatch(e))
        }
    }

    /// The order, with domain checks.
    pub fn leq(&self, x: &Element, y: &Element) -> Result<bool> {
        self.check(x)?;
        self.check(y)?;
        Ok(self.le(x, y))
    }

    /// The order, assuming both arguments lie in the domain.
    pub fn le(&self, x: &Element, y: &Element) -> bool {
        use NwqoTerm as T;
        match (self, x, y) {
            (T::Gamma(_), Element::Gamma(i), Element::Gamma(j)) => i == j,
            (T::Nat, Element::Nat(a), Element::Nat(b)) => a <= b,
            (T::Ord(_), Element::Ord(a), Element::Ord(b)) => a <= b,
            (T::Sum(a, _), Element::Left(p), Element::Left(q)) => a.le(p, q),
            (T::Sum(_, b), Element::Right(p), Element::Right(q)) => b.le(p, q),
            (T::Sum(..), _, _) => false,
            (T::Product(a, b), Element::Pair(x1, x2), Element::Pair(y1, y2)) => a.le(x1, y1) && b.le(x2, y2),
            (T::MajPow(a), Element::Set(xs), Element::Set(ys)) => xs.iter().all(|p| ys.iter().any(|q| a.le(p, q))),
            (T::MinPow(_), Element::Set(xs), Element::Set(ys)) => ys.iter().all(|q| xs.iter().any(|p| vec_le(p, q))),
            (T::Residual(base, _), x, y) => base.le(x, y),
            _ => false,
        }
    }

    pub fn norm_of(&self, e: &Element) -> Result<u64> {
        self.check(e)?;
        Ok(self.norm(e))
    }

    /// The norm, assuming membership.
    pub fn norm(&self, e: &Element) -> u64 {
        use NwqoTerm as T;
        match (self, e) {
            (T::Gamma(_), _) => 0,
            (T::Nat, Element::Nat(n)) => *n,
            (T::Ord(_), Element::Ord(b)) => b.norm_u64(),
            (T::Sum(a, _), Element::Left(x)) => a.norm(x),
            (T::Sum(_, b), Element::Right(y)) => b.norm(y),
            (T::Product(a, b), Element::Pair(x, y)) => a.norm(x).max(b.norm(y)),
            (T::MajPow(a), Element::Set(xs)) => xs.iter().map(|x| a.norm(x)).fold(xs.len() as u64, u64::max),
            (T::MinPow(d), Element::Set(xs)) => {
                let inner = NwqoTerm::nat_pow(*d);
                xs.iter().map(|x| inner.norm(x)).fold(xs.len() as u64, u64::max)
            }
            (T::Residual(base, _), e) => base.norm(e),
            _ => 0,
        }
    }

    /// `A/x`, flattening nested residuals.
    pub fn residual(&self, x: &Element) -> Result<NwqoTerm> {
        self.check(x)?;
        let (base, mut forb) = self.split_residual();
        forb.push(x.clone());
        Ok(NwqoTerm::Residual(Box::new(base.clone()), forb))
    }

    /// Elements of norm at most `n`, by ascending norm then structurally.
    pub fn enumerate_up_to(&self, n: u64) -> Result<Vec<Element>> {
        self.enumerate_up_to_limit(n, DEFAULT_LIMIT)
    }

    pub fn enumerate_up_to_limit(&self, n: u64, limit: usize) -> Result<Vec<Element>> {
        let (base, forb) = self.split_residual();
        let mut v = enumerate_residual(base, &forb, n, limit)?;
        v.sort_by_cached_key(|e| (base.norm(e), e.clone()));
        Ok(v)
    }

    pub fn is_bad(&self, seq: &[Element]) -> Result<bool> {
        for e in seq {
            self.check(e)?;
        }
        Ok(is_bad_unchecked(self, seq))
    }

    /// `|xᵢ| ≤ gⁱ(n)` for every position `i`.
    pub fn is_controlled(&self, seq: &[Element], g: &ControlFunction, n: u64) -> Result<bool> {
        let mut bound = BigUint::from(n);
        let cap = BigUint::from(u64::MAX);
        for e in seq {
            if BigUint::from(self.norm_of(e)?) > bound {
                return Ok(false);
            }
            // norms fit a machine word and inflationary bounds never shrink
            if bound >= cap {
                break;
            }
            bound = g.apply(&bound);
        }
        Ok(true)
    }

    /// Forbidden elements reduced to a sorted antichain of minimal ones. Two
    /// forbidden lists with the same key define the same residual.
    pub fn canonical_forbidden(&self, forb: &[Element]) -> Vec<Element> {
        let mut v: Vec<Element> = forb.to_vec();
        v.sort();
        v.dedup();
        let keep: Vec<bool> = (0..v.len())
            .map(|i| {
                !(0..v.len()).any(|j| j != i && self.le(&v[j], &v[i]) && (!self.le(&v[i], &v[j]) || j < i))
            })
            .collect();
        v.into_iter().zip(keep).filter_map(|(e, k)| k.then_some(e)).collect()
    }
}

fn is_bad_unchecked(t: &NwqoTerm, seq: &[Element]) -> bool {
    for j in 0..seq.len() {
        for i in 0..j {
            if t.le(&seq[i], &seq[j]) {
                return false;
            }
        }
    }
    true
}

fn canonical_set(xs: &[Element]) -> bool {
    xs.windows(2).all(|w| w[0] < w[1])
}

/// Coordinatewise order on right-nested vectors.
pub(crate) fn vec_le(x: &Element, y: &Element) -> bool {
    match (x, y) {
        (Element::Nat(a), Element::Nat(b)) => a <= b,
        (Element::Pair(a1, a2), Element::Pair(b1, b2)) => vec_le(a1, b1) && vec_le(a2, b2),
        _ => false,
    }
}

impl fmt::Display for NwqoTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use NwqoTerm as T;
        if let Some(d) = self.nat_pow_dim() {
            return if d == 1 { write!(f, "N") } else { write!(f, "N^{d}") };
        }
        match self {
            T::Gamma(k) => write!(f, "G({k})"),
            T::Nat => write!(f, "N"),
            T::Ord(a) => write!(f, "CNF({a})"),
            T::Sum(a, b) => {
                if matches!(**a, T::Sum(..)) {
                    write!(f, "({a}) + {b}")
                } else {
                    write!(f, "{a} + {b}")
                }
            }
            T::Product(a, b) => {
                let wrap_a = matches!(**a, T::Sum(..) | T::Product(..)) && a.nat_pow_dim().is_none();
                let wrap_b = matches!(**b, T::Sum(..));
                match (wrap_a, wrap_b) {
                    (false, false) => write!(f, "{a} * {b}"),
                    (true, false) => write!(f, "({a}) * {b}"),
                    (false, true) => write!(f, "{a} * ({b})"),
                    (true, true) => write!(f, "({a}) * ({b})"),
                }
            }
            T::MajPow(a) => write!(f, "PMaj({a})"),
            T::MinPow(d) => write!(f, "PMin({d})"),
            T::Residual(b, forb) => {
                let items: Vec<String> = forb.iter().map(|e| e.to_string()).collect();
                write!(f, "({b}) / [{}]", items.join(", "))
            }
        }
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Element::Gamma(i) => write!(f, "a{i}"),
            Element::Nat(n) => write!(f, "{n}"),
            Element::Ord(o) => write!(f, "{o}"),
            Element::Left(e) => write!(f, "L({e})"),
            Element::Right(e) => write!(f, "R({e})"),
            Element::Pair(..) => {
                if let Some(v) = self.as_vector() {
                    let parts: Vec<String> = v.iter().map(u64::to_string).collect();
                    write!(f, "({})", parts.join(","))
                } else if let Element::Pair(a, b) = self {
                    write!(f, "<{a}, {b}>")
                } else {
                    unreachable!()
                }
            }
            Element::Set(xs) => {
                let parts: Vec<String> = xs.iter().map(|e| e.to_string()).collect();
                write!(f, "{{{}}}", parts.join(", "))
            }
        }
    }
}

impl fmt::Debug for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(s: &str) -> NwqoTerm {
        s.parse().unwrap()
    }

    fn vs(pts: &[&[u64]]) -> Element {
        Element::vector_set(pts.iter().map(|p| p.to_vec()))
    }

    #[test]
    fn order_examples() {
        let m2 = t("PMaj(N^2)");
        let p = |pts: &[&[u64]]| vs(pts);
        assert!(m2.leq(&p(&[]), &p(&[&[3, 1]])).unwrap());
        assert!(!m2.leq(&p(&[&[2, 0]]), &p(&[&[1, 1]])).unwrap());
        let min2 = t("PMin(2)");
        for x in [p(&[]), p(&[&[0, 0]]), p(&[&[1, 2], &[3, 0]])] {
            assert!(min2.leq(&x, &p(&[])).unwrap());
        }
        assert!(m2.leq(&Element::Nat(1), &p(&[])).is_err());
    }

    #[test]
    fn norm_examples() {
        let m2 = t("PMaj(N^2)");
        assert_eq!(m2.norm_of(&vs(&[])).unwrap(), 0);
        assert_eq!(m2.norm_of(&vs(&[&[3, 0], &[1, 1]])).unwrap(), 3);
        assert_eq!(t("G(2) + N").norm_of(&Element::right(Element::Nat(5))).unwrap(), 5);
        assert_eq!(t("G(2) + N").norm_of(&Element::left(Element::Gamma(1))).unwrap(), 0);
    }

    #[test]
    fn enumeration_examples() {
        for n in 0..4 {
            assert_eq!(t("G(3)").enumerate_up_to(n).unwrap().len(), 3);
        }
        let pn = t("PMaj(N)").enumerate_up_to(1).unwrap();
        assert_eq!(pn, vec![vs(&[]), vs(&[&[0]]), vs(&[&[1]])]);
        assert_eq!(t("PMaj(N^2)").enumerate_up_to(1).unwrap().len(), 5);
        assert_eq!(t("PMaj(N^3)").enumerate_up_to(3).unwrap().len(), 43745);
    }

    #[test]
    fn residual_examples() {
        let g3 = t("G(3)");
        assert_eq!(g3.residual(&Element::Gamma(0)).unwrap().enumerate_up_to(5).unwrap().len(), 2);
        let r = t("PMin(2)").residual(&vs(&[])).unwrap();
        let all = t("PMin(2)").enumerate_up_to(2).unwrap();
        let res = r.enumerate_up_to(2).unwrap();
        assert_eq!(res.len() + 1, all.len());
        assert!(!res.contains(&vs(&[])));
        assert!(t("N").residual(&Element::Nat(0)).unwrap().enumerate_up_to(9).unwrap().is_empty());
    }

    #[test]
    fn bad_and_controlled() {
        let n = t("N");
        let pn = t("PMaj(N)");
        let nat = |v: &[u64]| v.iter().map(|x| Element::Nat(*x)).collect::<Vec<_>>();
        let s = ControlFunction::Successor;
        assert!(n.is_bad(&[]).unwrap());
        assert!(n.is_bad(&nat(&[3, 2, 1])).unwrap());
        assert!(!n.is_bad(&nat(&[1, 2])).unwrap());
        let w = vec![vs(&[&[1]]), vs(&[&[0]]), vs(&[])];
        assert!(pn.is_bad(&w).unwrap());
        assert!(pn.is_controlled(&w, &s, 1).unwrap());
        assert!(n.is_controlled(&[], &s, 0).unwrap());
        assert!(!n.is_controlled(&nat(&[5]), &s, 4).unwrap());
    }

    #[test]
    fn canonical_forbidden_drops_dominated() {
        let n2 = NwqoTerm::nat_pow(2);
        let key = n2.canonical_forbidden(&[Element::vector(&[2, 2]), Element::vector(&[1, 1]), Element::vector(&[0, 3])]);
        assert_eq!(key, vec![Element::vector(&[0, 3]), Element::vector(&[1, 1])]);
        // {1} and {0,1} are equivalent under majoring: keep one
        let pn = t("PMaj(N)");
        assert_eq!(pn.canonical_forbidden(&[vs(&[&[0], &[1]]), vs(&[&[1]])]).len(), 1);
    }
}
