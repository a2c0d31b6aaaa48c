use std::collections::HashMap;

use num_bigint::BigUint;

use super::{next_bound, LengthQuery};
use crate::error::{Error, Result};
use crate::hierarchy::Budget;
use crate::nwqo::{Element, NwqoTerm, DEFAULT_LIMIT};
use crate::ordinal::for_each_below;

/// Exhaustive search over explicit sequences: every element of the ball of
/// the underlying term is tried and checked pairwise against the whole
/// prefix. States whose prefixes have the same upward closure (same minimal
/// elements) and the same bound share their continuation, which the search
/// caches; there is no residual enumeration or candidate pruning.
pub fn brute_force_length(q: &mut LengthQuery) -> Result<BigUint> {
    q.control.validate()?;
    let mut s = Search { term: &q.term, q_control: &q.control, table: HashMap::new() };
    let v = s.best(Vec::new(), q.n, &mut q.budget)?;
    Ok(BigUint::from(v))
}

struct Search<'a> {
    term: &'a NwqoTerm,
    q_control: &'a crate::hierarchy::ControlFunction,
    table: HashMap<(Vec<Element>, u64), u64>,
}

impl Search<'_> {
    // upward closure of the prefix, represented by its minimal elements
    fn closure_key(&self, prefix: &[Element]) -> Vec<Element> {
        let t = self.term;
        let mut keep: Vec<Element> = Vec::new();
        for (i, e) in prefix.iter().enumerate() {
            let covered = prefix.iter().enumerate().any(|(j, f)| {
                j != i && t.le(f, e) && (!t.le(e, f) || f < e || (f == e && j < i))
            });
            if !covered {
                keep.push(e.clone());
            }
        }
        keep.sort();
        keep
    }

    fn ball(&self, n: u64, f: &mut dyn FnMut(&Element) -> bool) -> Result<()> {
        let (base, _) = self.term.split_residual();
        if let NwqoTerm::Ord(a) = base {
            // stream ordinal segments instead of materializing them
            for_each_below(a, n, &mut |b| {
                let e = Element::Ord(b.clone());
                !self.term.contains(&e) || f(&e)
            });
            return Ok(());
        }
        let all = crate::nwqo::enumerate_residual(base, &[], n, DEFAULT_LIMIT)?;
        for e in all.iter().filter(|e| self.term.contains(e)) {
            if !f(e) {
                break;
            }
        }
        Ok(())
    }

    fn best(&mut self, prefix: Vec<Element>, n: u64, budget: &mut Budget) -> Result<u64> {
        let key = (self.closure_key(&prefix), n);
        if let Some(v) = self.table.get(&key) {
            return Ok(*v);
        }
        budget.tick()?;
        let mut exts = Vec::new();
        let term = self.term;
        self.ball(n, &mut |e| {
            if prefix.iter().all(|p| !term.le(p, e)) {
                exts.push(e.clone());
            }
            true
        })?;
        if exts.len() > DEFAULT_LIMIT {
            return Err(Error::CombinatorialExplosion { limit: DEFAULT_LIMIT });
        }
        let mut best = 0;
        if !exts.is_empty() {
            let m = next_bound(self.q_control, n, budget)?;
            for e in exts {
                let mut p = prefix.clone();
                p.push(e);
                best = best.max(1 + self.best(p, m, budget)?);
            }
        }
        self.table.insert(key, best);
        Ok(best)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hierarchy::ControlFunction;
    use num_traits::ToPrimitive;

    fn brute(term: &str, n: u64) -> u64 {
        let mut q = LengthQuery::new(term.parse().unwrap(), ControlFunction::Successor, n);
        brute_force_length(&mut q).unwrap().to_u64().unwrap()
    }

    #[test]
    fn small_cases() {
        assert_eq!(brute("G(0)", 3), 0);
        assert_eq!(brute("G(1) + G(1)", 2), 2);
        assert_eq!(brute("N", 3), 4);
        assert_eq!(brute("PMaj(N)", 1), 3);
        let a = "w*2+1".parse().unwrap();
        let c = crate::hierarchy::cichon(&ControlFunction::Successor, &a, &BigUint::from(2u32), &mut Budget::default()).unwrap();
        assert_eq!(BigUint::from(brute("CNF(w*2+1)", 2)), c);
        assert_eq!(brute("PMin(1)", 1), 4, "brute PMin(1)");
    }
}
