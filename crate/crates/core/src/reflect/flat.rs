//! Majoring powerset nwqos flattened to a sum of products of `P_f(ℕ^d)`
//! factors, with elements addressed as (summand index, factor elements).

use super::order::{canonical_nwqo, term_of_summands};
use crate::error::{Error, Result};
use crate::nwqo::{Element, NwqoTerm};
use crate::ordinal::Ordinal;

#[derive(Clone, Debug)]
enum Kind {
    Gamma,
    Maj,
    Sum(Box<Node>, Box<Node>),
    Product(Box<Node>, Box<Node>),
}

#[derive(Clone, Debug)]
pub(crate) struct Node {
    kind: Kind,
    pub(crate) summands: Vec<Vec<usize>>,
}

impl Node {
    pub(crate) fn build(t: &NwqoTerm) -> Result<Node> {
        use NwqoTerm as T;
        match t {
            T::Gamma(k) => {
                if *k > 1 << 20 {
                    return Err(Error::UnsupportedTerm(format!("{t} is too large to flatten")));
                }
                Ok(Node { kind: Kind::Gamma, summands: vec![Vec::new(); *k as usize] })
            }
            T::MajPow(inner) => match inner.nat_pow_dim() {
                Some(d) => Ok(Node { kind: Kind::Maj, summands: vec![vec![d]] }),
                None => Err(Error::UnsupportedTerm(format!("{t} is not a majoring powerset nwqo"))),
            },
            T::Sum(a, b) => {
                let (a, b) = (Node::build(a)?, Node::build(b)?);
                let summands = a.summands.iter().chain(&b.summands).cloned().collect();
                Ok(Node { kind: Kind::Sum(Box::new(a), Box::new(b)), summands })
            }
            T::Product(a, b) => {
                let (a, b) = (Node::build(a)?, Node::build(b)?);
                let mut summands = Vec::new();
                for sa in &a.summands {
                    for sb in &b.summands {
                        summands.push(sa.iter().chain(sb).copied().collect());
                    }
                }
                Ok(Node { kind: Kind::Product(Box::new(a), Box::new(b)), summands })
            }
            _ => Err(Error::UnsupportedTerm(format!("{t} is not a majoring powerset nwqo"))),
        }
    }

    pub(crate) fn encode(&self, e: &Element) -> Result<(usize, Vec<Element>)> {
        let bad = || Error::ShapeMismatch(format!("element {e} does not fit the flattened term"));
        match (&self.kind, e) {
            (Kind::Gamma, Element::Gamma(i)) => Ok((*i as usize, Vec::new())),
            (Kind::Maj, Element::Set(_)) => Ok((0, vec![e.clone()])),
            (Kind::Sum(a, _), Element::Left(x)) => a.encode(x),
            (Kind::Sum(a, b), Element::Right(y)) => {
                let (i, fs) = b.encode(y)?;
                Ok((a.summands.len() + i, fs))
            }
            (Kind::Product(a, b), Element::Pair(x, y)) => {
                let (ia, mut fa) = a.encode(x)?;
                let (ib, fb) = b.encode(y)?;
                fa.extend(fb);
                Ok((ia * b.summands.len() + ib, fa))
            }
            _ => Err(bad()),
        }
    }

    pub(crate) fn decode(&self, i: usize, fs: &[Element]) -> Result<Element> {
        let bad = || Error::ShapeMismatch(format!("summand {i} with {} factors does not fit", fs.len()));
        if i >= self.summands.len() || fs.len() != self.summands[i].len() {
            return Err(bad());
        }
        match &self.kind {
            Kind::Gamma => Ok(Element::Gamma(i as u64)),
            Kind::Maj => Ok(fs[0].clone()),
            Kind::Sum(a, b) => {
                if i < a.summands.len() {
                    Ok(Element::left(a.decode(i, fs)?))
                } else {
                    Ok(Element::right(b.decode(i - a.summands.len(), fs)?))
                }
            }
            Kind::Product(a, b) => {
                let (ia, ib) = (i / b.summands.len(), i % b.summands.len());
                let la = a.summands[ia].len();
                Ok(Element::pair(a.decode(ia, &fs[..la])?, b.decode(ib, &fs[la..])?))
            }
        }
    }
}

/// `ω^(ω^(d₁−1) ⊕ … ⊕ ω^(d_k−1))`, the order type of one summand.
pub(crate) fn summand_type(dims: &[usize]) -> Ordinal {
    let e = dims.iter().fold(Ordinal::zero(), |acc, d| acc.nat_sum(&Ordinal::omega_pow(Ordinal::from_u64(*d as u64 - 1))));
    Ordinal::omega_pow(e)
}

/// The isomorphism from a flattened sum of products onto `C(α)`.
#[derive(Clone, Debug)]
pub struct CanonicalIso {
    pub alpha: Ordinal,
    pub target: NwqoTerm,
    dst: Node,
    perm: Vec<usize>,
    factor_order: Vec<Vec<usize>>,
}

impl CanonicalIso {
    pub(crate) fn new(summands: &[Vec<usize>]) -> Result<Self> {
        let factor_order: Vec<Vec<usize>> = summands
            .iter()
            .map(|s| {
                let mut idx: Vec<usize> = (0..s.len()).collect();
                idx.sort_by(|&a, &b| s[b].cmp(&s[a]));
                idx
            })
            .collect();
        let sorted_dims: Vec<Vec<usize>> = summands
            .iter()
            .zip(&factor_order)
            .map(|(s, o)| o.iter().map(|&k| s[k]).collect())
            .collect();
        let mut order: Vec<usize> = (0..summands.len()).collect();
        order.sort_by(|&a, &b| sorted_dims[b].cmp(&sorted_dims[a]));
        let mut perm = vec![0; summands.len()];
        for (new, &old) in order.iter().enumerate() {
            perm[old] = new;
        }
        let canon: Vec<Vec<usize>> = order.iter().map(|&i| sorted_dims[i].clone()).collect();
        let alpha = canon.iter().fold(Ordinal::zero(), |acc, s| acc.nat_sum(&summand_type(s)));
        let target = canonical_nwqo(&alpha)?;
        debug_assert_eq!(target, term_of_summands(&canon));
        let dst = Node::build(&target)?;
        if dst.summands != canon {
            return Err(Error::ShapeMismatch(format!("canonical layout of {alpha} disagrees")));
        }
        Ok(CanonicalIso { alpha, target, dst, perm, factor_order })
    }

    pub(crate) fn apply(&self, i: usize, fs: &[Element]) -> Result<Element> {
        let order = self.factor_order.get(i).ok_or_else(|| Error::Index(format!("summand {i}")))?;
        let moved: Vec<Element> = order.iter().map(|&k| fs[k].clone()).collect();
        self.dst.decode(self.perm[i], &moved)
    }
}

/// The isomorphism `A → C(o(A))` for a majoring powerset nwqo `A`.
pub fn canonical_iso(a: &NwqoTerm) -> Result<(CanonicalIso, impl Fn(&Element) -> Result<Element>)> {
    let src = Node::build(a)?;
    let iso = CanonicalIso::new(&src.summands)?;
    let iso2 = iso.clone();
    Ok((iso, move |e: &Element| {
        let (i, fs) = src.encode(e)?;
        iso2.apply(i, &fs)
    }))
}
