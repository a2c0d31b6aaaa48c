//! Length functions of controlled bad sequences.
//!
//! [`length_function`] solves the descent equation
//! `L_{A,g}(n) = max_{x ∈ A_{≤n}} 1 + L_{A/x,g}(g(n))` with an explicit stack
//! and a memo keyed by the canonical forbidden list and the current bound.
//! Only maximal elements of each ball are tried: `x ≤ x'` gives `A/x ⊆ A/x'`.

mod brute;
mod mupper;
mod sandwich;

pub use brute::brute_force_length;
pub use mupper::m_upper;
pub use sandwich::{check_sandwich, SandwichReport, Status};

use std::collections::HashMap;

use num_bigint::BigUint;
use num_traits::ToPrimitive;
use serde::Serialize;
use serde_json::Value;

use crate::error::{Error, Result};
use crate::hierarchy::{Budget, ControlFunction};
use crate::nwqo::{Element, NwqoTerm, DEFAULT_LIMIT};

#[derive(Clone, Debug)]
pub struct LengthQuery {
    pub term: NwqoTerm,
    pub control: ControlFunction,
    pub n: u64,
    pub budget: Budget,
}

impl LengthQuery {
    pub fn new(term: NwqoTerm, control: ControlFunction, n: u64) -> Self {
        LengthQuery { term, control, n, budget: Budget::default() }
    }

    pub fn with_budget(mut self, max_steps: u64) -> Self {
        self.budget = Budget::new(max_steps);
        self
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Witness {
    #[serde(skip)]
    pub sequence: Vec<Element>,
    pub certified_bad: bool,
    pub certified_controlled: bool,
}

impl Witness {
    pub fn certify(term: &NwqoTerm, sequence: Vec<Element>, g: &ControlFunction, n: u64) -> Result<Self> {
        let certified_bad = term.is_bad(&sequence)?;
        let certified_controlled = term.is_controlled(&sequence, g, n)?;
        Ok(Witness { sequence, certified_bad, certified_controlled })
    }

    pub fn is_certified(&self) -> bool {
        self.certified_bad && self.certified_controlled
    }

    pub fn to_json(&self, term: &NwqoTerm) -> Value {
        serde_json::json!({
            "length": self.sequence.len(),
            "sequence": term.sequence_to_json(&self.sequence),
            "certified_bad": self.certified_bad,
            "certified_controlled": self.certified_controlled,
        })
    }
}

pub(crate) fn next_bound(g: &ControlFunction, n: u64, budget: &Budget) -> Result<u64> {
    g.apply(&BigUint::from(n)).to_u64().ok_or(Error::BudgetExceeded { steps: budget.steps_used })
}

type Key = (Vec<Element>, u64);

struct Frame {
    key: Key,
    cands: Vec<Element>,
    next: usize,
    best: u64,
    choice: Option<Element>,
    pending: Option<(Element, Key)>,
}

/// The descent-equation engine; memo maps a state to its value and best move.
pub(crate) struct Descent<'a> {
    base: &'a NwqoTerm,
    g: &'a ControlFunction,
    limit: usize,
    memo: HashMap<Key, (u64, Option<Element>)>,
}

impl<'a> Descent<'a> {
    pub(crate) fn new(base: &'a NwqoTerm, g: &'a ControlFunction) -> Self {
        Descent { base, g, limit: DEFAULT_LIMIT, memo: HashMap::new() }
    }

    fn child(&self, key: &Key, x: &Element, budget: &Budget) -> Result<Key> {
        let mut f = key.0.clone();
        f.push(x.clone());
        Ok((self.base.canonical_forbidden(&f), next_bound(self.g, key.1, budget)?))
    }

    fn open(&self, key: Key, budget: &mut Budget) -> Result<Frame> {
        budget.tick()?;
        let mut cands = crate::nwqo::maximal_ball(self.base, &key.0, key.1, self.limit)?;
        cands.sort_by_cached_key(|e| (self.base.norm(e), e.clone()));
        Ok(Frame { key, cands, next: 0, best: 0, choice: None, pending: None })
    }

    pub(crate) fn solve(&mut self, root: Key, budget: &mut Budget) -> Result<u64> {
        if let Some((v, _)) = self.memo.get(&root) {
            return Ok(*v);
        }
        let mut stack = vec![self.open(root.clone(), budget)?];
        while let Some(top) = stack.last_mut() {
            if let Some((x, ck)) = top.pending.take() {
                let v = self.memo[&ck].0 + 1;
                if v > top.best {
                    top.best = v;
                    top.choice = Some(x);
                }
            }
            if top.next == top.cands.len() {
                let done = stack.pop().unwrap();
                self.memo.insert(done.key, (done.best, done.choice));
                continue;
            }
            let x = top.cands[top.next].clone();
            top.next += 1;
            let ck = self.child(&top.key, &x, budget)?;
            if let Some((v, _)) = self.memo.get(&ck) {
                if v + 1 > top.best {
                    top.best = v + 1;
                    top.choice = Some(x);
                }
                continue;
            }
            top.pending = Some((x, ck.clone()));
            let child = self.open(ck, budget)?;
            stack.push(child);
        }
        Ok(self.memo[&root].0)
    }

    pub(crate) fn witness(&self, root: &Key, budget: &Budget) -> Result<Vec<Element>> {
        let mut out = Vec::new();
        let mut key = root.clone();
        while let Some((_, Some(x))) = self.memo.get(&key) {
            out.push(x.clone());
            key = self.child(&key, x, budget)?;
        }
        Ok(out)
    }
}

fn root_key(term: &NwqoTerm, n: u64) -> (Key, &NwqoTerm) {
    let (base, forb) = term.split_residual();
    ((base.canonical_forbidden(&forb), n), base)
}

fn validate(q: &LengthQuery) -> Result<()> {
    q.control.validate()
}

/// `L_{A,g}(n)`.
pub fn length_function(q: &mut LengthQuery) -> Result<BigUint> {
    validate(q)?;
    let (root, base) = root_key(&q.term, q.n);
    let mut engine = Descent::new(base, &q.control);
    Ok(BigUint::from(engine.solve(root, &mut q.budget)?))
}

/// A bad controlled sequence of maximal length, re-verified.
pub fn max_bad_sequence(q: &mut LengthQuery) -> Result<Witness> {
    validate(q)?;
    let (root, base) = root_key(&q.term, q.n);
    let mut engine = Descent::new(base, &q.control);
    let len = engine.solve(root.clone(), &mut q.budget)?;
    let seq = engine.witness(&root, &q.budget)?;
    debug_assert_eq!(seq.len() as u64, len);
    Witness::certify(&q.term, seq, &q.control, q.n)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(s: &str) -> NwqoTerm {
        s.parse().unwrap()
    }

    fn len(term: &str, g: &str, n: u64) -> u64 {
        let mut q = LengthQuery::new(t(term), g.parse().unwrap(), n);
        length_function(&mut q).unwrap().to_u64().unwrap()
    }

    #[test]
    fn small_values() {
        for k in 0..5 {
            assert_eq!(len(&format!("G({k})"), "succ", 0), k);
        }
        for n in 0..6 {
            assert_eq!(len("N", "succ", n), n + 1);
        }
        assert_eq!(len("PMaj(N)", "succ", 1), 3);
        assert_eq!(len("G(1) + G(1)", "x+2", 3), 2);
        assert_eq!(len("CNF(w)", "succ", 4), 5);
    }

    #[test]
    fn witnesses() {
        let mut q = LengthQuery::new(t("N"), ControlFunction::Successor, 2);
        let w = max_bad_sequence(&mut q).unwrap();
        assert_eq!(w.sequence, vec![Element::Nat(2), Element::Nat(1), Element::Nat(0)]);
        assert!(w.is_certified());
        let mut q = LengthQuery::new(t("PMaj(N)"), ControlFunction::Successor, 1);
        let w = max_bad_sequence(&mut q).unwrap();
        assert_eq!(w.sequence.len(), 3);
        assert!(w.is_certified());
        let mut q = LengthQuery::new(t("G(2)"), ControlFunction::Successor, 0);
        assert_eq!(max_bad_sequence(&mut q).unwrap().sequence.len(), 2);
    }

    #[test]
    fn budget_exhaustion_is_an_error() {
        let mut q = LengthQuery::new(t("CNF(w^w)"), ControlFunction::Successor, 2).with_budget(1000);
        assert!(length_function(&mut q).unwrap_err().is_budget());
    }
}
