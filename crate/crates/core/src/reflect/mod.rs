//! Order types, canonical nwqos, derivative operators and polynomial
//! reflections between nwqos.

mod compare;
mod flat;
mod maps;
mod order;

pub use flat::{canonical_iso, CanonicalIso};
pub use maps::{
    bstar_is_full, fix_is_full, index_subsequences, maj_to_min, min_to_prod_maj, ord_to_maj, prod_maj_target,
    residual_reflection, s_sets,
};
pub use order::{canonical_nwqo, derivative, in_range, order_type, partial_derivative};

use std::fmt;
use std::sync::Arc;

use num_bigint::BigUint;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::hierarchy::ControlFunction;
use crate::nwqo::{Element, NwqoTerm};
use compare::BitOrder;

type MapFn = dyn Fn(&Element) -> Result<Element> + Send + Sync;

/// A map `r : A → B` with `r(x) ≤ r(y) ⟹ x ≤ y` and `|r(x)| ≤ q(|x|)`.
#[derive(Clone)]
pub struct Reflection {
    pub source: NwqoTerm,
    pub target: NwqoTerm,
    pub bound: ControlFunction,
    pub label: String,
    map: Arc<MapFn>,
}

impl fmt::Debug for Reflection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {} -> {} [{}]", self.label, self.source, self.target, self.bound)
    }
}

impl Reflection {
    pub fn new<F>(source: NwqoTerm, target: NwqoTerm, bound: ControlFunction, label: String, map: F) -> Self
    where
        F: Fn(&Element) -> Result<Element> + Send + Sync + 'static,
    {
        Reflection { source, target, bound, label, map: Arc::new(map) }
    }

    pub fn identity(term: NwqoTerm) -> Self {
        Reflection::new(term.clone(), term, ControlFunction::Identity, "id".into(), |e| Ok(e.clone()))
    }

    pub fn apply(&self, e: &Element) -> Result<Element> {
        if !self.source.contains(e) {
            return Err(Error::DomainMismatch { term: self.source.to_string(), element: e.to_string() });
        }
        (self.map)(e)
    }

    /// `second ∘ first`, bound `q₂ ∘ q₁`.
    pub fn compose(first: &Reflection, second: &Reflection) -> Result<Reflection> {
        if first.target != second.source {
            return Err(Error::ShapeMismatch(format!("{} does not feed {}", first.target, second.source)));
        }
        let (f, g) = (first.map.clone(), second.map.clone());
        Ok(Reflection::new(
            first.source.clone(),
            second.target.clone(),
            ControlFunction::compose(second.bound.clone(), first.bound.clone()),
            format!("{} . {}", second.label, first.label),
            move |e| g(&f(e)?),
        ))
    }

    /// `r + r'` on disjoint sums, bound `q + q'`.
    pub fn sum_of(r: &Reflection, s: &Reflection) -> Reflection {
        let (f, g) = (r.map.clone(), s.map.clone());
        Reflection::new(
            NwqoTerm::sum(r.source.clone(), s.source.clone()),
            NwqoTerm::sum(r.target.clone(), s.target.clone()),
            ControlFunction::Add(Box::new(r.bound.clone()), Box::new(s.bound.clone())),
            format!("({} + {})", r.label, s.label),
            move |e| match e {
                Element::Left(x) => Ok(Element::left(f(x)?)),
                Element::Right(y) => Ok(Element::right(g(y)?)),
                _ => Err(Error::ShapeMismatch(format!("{e} is not a sum element"))),
            },
        )
    }

    /// `r × r'` componentwise, bound `q + q'`.
    pub fn product_of(r: &Reflection, s: &Reflection) -> Reflection {
        let (f, g) = (r.map.clone(), s.map.clone());
        Reflection::new(
            NwqoTerm::product(r.source.clone(), s.source.clone()),
            NwqoTerm::product(r.target.clone(), s.target.clone()),
            ControlFunction::Add(Box::new(r.bound.clone()), Box::new(s.bound.clone())),
            format!("({} x {})", r.label, s.label),
            move |e| match e {
                Element::Pair(x, y) => Ok(Element::pair(f(x)?, g(y)?)),
                _ => Err(Error::ShapeMismatch(format!("{e} is not a pair"))),
            },
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Counterexample {
    pub kind: String,
    pub x: String,
    pub image_x: Option<String>,
    pub y: Option<String>,
    pub image_y: Option<String>,
    pub detail: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct VerifyReport {
    pub reflection: String,
    pub source: String,
    pub target: String,
    pub bound: String,
    pub n_max: u64,
    pub elements: usize,
    pub pairs: u64,
    pub passed: bool,
    pub violations: u64,
    pub counterexamples: Vec<Counterexample>,
    pub error: Option<String>,
}

const MAX_REPORTED: usize = 20;

/// Exhaustively checks order reflection and the norm bound over every source
/// element of norm at most `n_max`.
pub fn verify_reflection(r: &Reflection, n_max: u64) -> VerifyReport {
    let mut rep = VerifyReport {
        reflection: r.label.clone(),
        source: r.source.to_string(),
        target: r.target.to_string(),
        bound: r.bound.to_string(),
        n_max,
        elements: 0,
        pairs: 0,
        passed: false,
        violations: 0,
        counterexamples: Vec::new(),
        error: None,
    };
    let elems = match r.source.enumerate_up_to(n_max) {
        Ok(v) => v,
        Err(e) => {
            rep.error = Some(e.to_string());
            return rep;
        }
    };
    rep.elements = elems.len();
    let images: Vec<Result<Element>> = crate::par::map_slice(&elems, |e| r.apply(e));
    let mut ok_idx = Vec::new();
    let mut imgs = Vec::new();
    for (i, (x, img)) in elems.iter().zip(images).enumerate() {
        let push = |rep: &mut VerifyReport, c: Counterexample| {
            rep.violations += 1;
            if rep.counterexamples.len() < MAX_REPORTED {
                rep.counterexamples.push(c);
            }
        };
        match img {
            Err(e) => push(&mut rep, Counterexample { kind: "map_error".into(), x: x.to_string(), image_x: None, y: None, image_y: None, detail: e.to_string() }),
            Ok(fx) if !r.target.contains(&fx) => push(&mut rep, Counterexample {
                kind: "outside_target".into(),
                x: x.to_string(),
                image_x: Some(fx.to_string()),
                y: None,
                image_y: None,
                detail: String::new(),
            }),
            Ok(fx) => {
                let (nx, nfx) = (r.source.norm(x), r.target.norm(&fx));
                let q = r.bound.apply(&BigUint::from(nx));
                if BigUint::from(nfx) > q {
                    push(&mut rep, Counterexample {
                        kind: "norm_bound".into(),
                        x: x.to_string(),
                        image_x: Some(fx.to_string()),
                        y: None,
                        image_y: None,
                        detail: format!("|r(x)| = {nfx} > q({nx}) = {q}"),
                    });
                }
                ok_idx.push(i);
                imgs.push(fx);
            }
        }
    }
    let srcs: Vec<Element> = ok_idx.iter().map(|&i| elems[i].clone()).collect();
    let m = srcs.len();
    rep.pairs = (m as u64) * (m as u64);
    let tgt_fast = BitOrder::build(&r.target, &imgs);
    let src_fast = BitOrder::build(&r.source, &srcs);
    let rows: Vec<Vec<usize>> = crate::par::map_range(m, |i| {
        let mut bad = Vec::new();
        for j in 0..m {
            let t = match &tgt_fast {
                Some(b) => b.le(i, j),
                None => r.target.le(&imgs[i], &imgs[j]),
            };
            if !t {
                continue;
            }
            let s = match &src_fast {
                Some(b) => b.le(i, j),
                None => r.source.le(&srcs[i], &srcs[j]),
            };
            if !s {
                bad.push(j);
            }
        }
        bad
    });
    for (i, row) in rows.iter().enumerate() {
        for &j in row {
            rep.violations += 1;
            if rep.counterexamples.len() < MAX_REPORTED {
                rep.counterexamples.push(Counterexample {
                    kind: "order_reflection".into(),
                    x: srcs[i].to_string(),
                    image_x: Some(imgs[i].to_string()),
                    y: Some(srcs[j].to_string()),
                    image_y: Some(imgs[j].to_string()),
                    detail: "r(x) ≤ r(y) but x ≰ y".into(),
                });
            }
        }
    }
    rep.passed = rep.violations == 0;
    rep
}

#[derive(Clone, Debug, Serialize)]
pub struct TransportReport {
    pub length: usize,
    pub source_bad: bool,
    pub source_controlled: bool,
    pub image_bad: bool,
    pub image_controlled: bool,
    pub control: String,
    pub start: String,
}

impl TransportReport {
    /// The image is bad and controlled whenever the source sequence is.
    pub fn holds(&self) -> bool {
        !(self.source_bad && self.source_controlled) || (self.image_bad && self.image_controlled)
    }
}

/// Pushes a `(g, n)`-controlled bad sequence through `r` and checks that the
/// image is bad and `(q∘g, q(n))`-controlled.
pub fn transport(r: &Reflection, seq: &[Element], g: &ControlFunction, n: u64) -> Result<TransportReport> {
    let source_bad = r.source.is_bad(seq)?;
    let source_controlled = r.source.is_controlled(seq, g, n)?;
    let img: Vec<Element> = seq.iter().map(|e| r.apply(e)).collect::<Result<_>>()?;
    let qg = ControlFunction::compose(r.bound.clone(), g.clone());
    let qn = r.bound.apply(&BigUint::from(n));
    let image_bad = r.target.is_bad(&img)?;
    // q∘g is inflationary, so once the bound passes every norm the rest holds
    let norms: Vec<u64> = img.iter().map(|e| r.target.norm_of(e)).collect::<Result<_>>()?;
    let top = BigUint::from(norms.iter().copied().max().unwrap_or(0));
    let mut bound = qn.clone();
    let mut image_controlled = true;
    for &v in &norms {
        if bound >= top {
            break;
        }
        if BigUint::from(v) > bound {
            image_controlled = false;
            break;
        }
        bound = qg.apply(&bound);
    }
    Ok(TransportReport {
        length: seq.len(),
        source_bad,
        source_controlled,
        image_bad,
        image_controlled,
        control: qg.to_string(),
        start: qn.to_string(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn named_reflections_small() {
        for (r, n) in [
            (Reflection::ord_to_maj(2).unwrap(), 2),
            (Reflection::maj_to_min(1).unwrap(), 3),
            (Reflection::maj_to_min(2).unwrap(), 2),
            (Reflection::min_to_prod_maj(2).unwrap(), 2),
        ] {
            let rep = verify_reflection(&r, n);
            assert!(rep.passed, "{:?}", rep);
            assert!(rep.elements > 0);
        }
    }

    #[test]
    fn detects_counterexamples() {
        // constant map onto a single element reflects nothing
        let t: NwqoTerm = "N".parse().unwrap();
        let r = Reflection::new(t.clone(), t, ControlFunction::Identity, "const".into(), |_| Ok(Element::Nat(0)));
        let rep = verify_reflection(&r, 2);
        assert!(!rep.passed);
        assert_eq!(rep.counterexamples[0].kind, "order_reflection");
    }

    #[test]
    fn combinators() {
        let r = Reflection::maj_to_min(1).unwrap();
        let id = Reflection::identity(r.source.clone());
        let c = Reflection::compose(&id, &r).unwrap();
        for e in r.source.enumerate_up_to(2).unwrap() {
            assert_eq!(c.apply(&e).unwrap(), r.apply(&e).unwrap());
        }
        assert!(Reflection::compose(&r, &r).is_err());
        let s = Reflection::sum_of(&r, &id);
        assert_eq!(s.bound.apply(&BigUint::from(2u32)), BigUint::from(3u32 + 2));
        assert!(verify_reflection(&s, 2).passed);
        let p = Reflection::product_of(&r, &Reflection::identity("G(2)".parse().unwrap()));
        let x = Element::pair(Element::vector_set([vec![1]]), Element::Gamma(1));
        assert_eq!(p.apply(&x).unwrap(), Element::pair(Element::vector_set([vec![2]]), Element::Gamma(1)));
        assert!(verify_reflection(&p, 2).passed);
    }

    #[test]
    fn residual_reflections_verify() {
        let cases = [
            ("G(3)", Element::Gamma(1), 1),
            ("PMaj(N)", Element::vector_set([vec![1]]), 1),
            ("PMaj(N)", Element::vector_set([vec![2], vec![0]]), 2),
            ("PMaj(N^2)", Element::vector_set([vec![1, 1]]), 1),
            ("PMaj(N) * PMaj(N)", Element::pair(Element::vector_set([vec![1]]), Element::vector_set([vec![0]])), 1),
            ("PMaj(N) + G(1)", Element::right(Element::Gamma(0)), 1),
            ("G(1) + PMaj(N^2)", Element::right(Element::vector_set([vec![0, 1]])), 1),
        ];
        for (a, x, n) in cases {
            let a: NwqoTerm = a.parse().unwrap();
            let r = residual_reflection(&a, &x, n).unwrap();
            let rep = verify_reflection(&r, 2);
            assert!(rep.passed, "{a} / {x}: {:?}", rep);
        }
    }

    #[test]
    fn transport_of_a_chain() {
        let r = Reflection::ord_to_maj(2).unwrap();
        let seq: Vec<Element> = ["w*2", "w + 3", "w", "2", "1", "0"].iter().map(|s| Element::Ord(s.parse().unwrap())).collect();
        let rep = transport(&r, &seq, &ControlFunction::Successor, 2).unwrap();
        assert!(rep.source_bad && rep.holds());
    }
}
