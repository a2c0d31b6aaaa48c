use std::collections::HashMap;

use num_bigint::BigUint;

use super::next_bound;
use crate::error::Result;
use crate::hierarchy::{Budget, ControlFunction};
use crate::ordinal::Ordinal;
use crate::reflect::partial_derivative;

/// `M_{α,g}(n) = max_{α' ∈ ∂ₙ(α)} 1 + M_{α',g}(g(n))`, zero on an empty `∂ₙ`.
pub fn m_upper(a: &Ordinal, g: &ControlFunction, n: u64, budget: &mut Budget) -> Result<BigUint> {
    g.validate()?;
    type Key = (Ordinal, u64);
    struct Frame {
        key: Key,
        kids: Vec<Ordinal>,
        next: usize,
        best: u64,
        m: u64,
    }
    let mut memo: HashMap<Key, u64> = HashMap::new();
    let open = |key: Key, budget: &mut Budget| -> Result<Frame> {
        budget.tick()?;
        let kids = partial_derivative(&key.0, key.1)?;
        let m = if kids.is_empty() { 0 } else { next_bound(g, key.1, budget)? };
        Ok(Frame { key, kids, next: 0, best: 0, m })
    };
    let root = (a.clone(), n);
    let mut stack = vec![open(root.clone(), budget)?];
    while let Some(top) = stack.last_mut() {
        if top.next == top.kids.len() {
            let f = stack.pop().unwrap();
            memo.insert(f.key, f.best);
            continue;
        }
        let ck = (top.kids[top.next].clone(), top.m);
        if let Some(v) = memo.get(&ck) {
            top.best = top.best.max(v + 1);
            top.next += 1;
            continue;
        }
        let f = open(ck, budget)?;
        stack.push(f);
    }
    Ok(BigUint::from(memo[&root]))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(a: &str, n: u64) -> u64 {
        let v = m_upper(&a.parse().unwrap(), &ControlFunction::Successor, n, &mut Budget::default()).unwrap();
        u64::try_from(v).unwrap()
    }

    #[test]
    fn small_values() {
        for n in 0..5 {
            assert_eq!(m("0", n), 0);
            assert_eq!(m("3", n), 3);
            assert_eq!(m("w", n), n + 2);
        }
        // ∂ₙ(ω·2) = {ω + n + 1}
        assert_eq!(m("w*2", 1), 1 + m("w + 2", 2));
    }
}
