use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};

use super::{Ordinal, Term};
use crate::error::{Error, Result};

/// All `β < γ` with `N β ≤ n`, in increasing order.
pub fn enumerate_below(gamma: &Ordinal, n: u64, limit: usize) -> Result<Vec<Ordinal>> {
    let mut out = Vec::new();
    let mut over = false;
    for_each_below(gamma, n, &mut |b| {
        if out.len() >= limit {
            over = true;
            return false;
        }
        out.push(b.clone());
        true
    });
    if over {
        return Err(Error::CombinatorialExplosion { limit });
    }
    out.sort();
    Ok(out)
}

/// Streams every `β < γ` with `N β ≤ n`; the visitor returns `false` to stop.
pub fn for_each_below(gamma: &Ordinal, n: u64, f: &mut dyn FnMut(&Ordinal) -> bool) -> bool {
    let mut prefix = Vec::new();
    visit_below(gamma, n, &mut prefix, f)
}

fn visit_below(gamma: &Ordinal, n: u64, prefix: &mut Vec<Term>, f: &mut dyn FnMut(&Ordinal) -> bool) -> bool {
    let Some(first) = gamma.terms.first() else {
        return true;
    };
    let exps = lean_exponents_below(&first.exp, n);
    if !visit_all(&exps, 0, n, prefix, f) {
        return false;
    }
    if first.exp.is_k_lean(n) {
        let below = (&first.coef - 1u32).to_u64().unwrap_or(u64::MAX).min(n);
        for c in 1..=below {
            prefix.push(Term { exp: first.exp.clone(), coef: BigUint::from(c) });
            let go = visit_all(&exps, 0, n, prefix, f);
            prefix.pop();
            if !go {
                return false;
            }
        }
        if first.coef <= BigUint::from(n) {
            let rest = Ordinal { terms: gamma.terms[1..].to_vec() };
            prefix.push(first.clone());
            let go = visit_below(&rest, n, prefix, f);
            prefix.pop();
            if !go {
                return false;
            }
        }
    }
    true
}

/// Every strict form with exponents drawn from `exps` (decreasing) and coefficients in `1..=n`.
fn visit_all(exps: &[Ordinal], start: usize, n: u64, prefix: &mut Vec<Term>, f: &mut dyn FnMut(&Ordinal) -> bool) -> bool {
    if !f(&Ordinal { terms: prefix.clone() }) {
        return false;
    }
    for i in start..exps.len() {
        for c in 1..=n {
            prefix.push(Term { exp: exps[i].clone(), coef: BigUint::from(c) });
            let go = visit_all(exps, i + 1, n, prefix, f);
            prefix.pop();
            if !go {
                return false;
            }
        }
    }
    true
}

fn lean_exponents_below(e: &Ordinal, n: u64) -> Vec<Ordinal> {
    let mut v = Vec::new();
    for_each_below(e, n, &mut |b| {
        v.push(b.clone());
        true
    });
    v.sort_by(|a, b| b.cmp(a));
    v
}

/// The largest `β < γ` with `N β ≤ n`.
pub fn max_below(gamma: &Ordinal, n: u64) -> Option<Ordinal> {
    let first = gamma.terms.first()?;
    let nb = BigUint::from(n);
    let rest = Ordinal { terms: gamma.terms[1..].to_vec() };
    if first.exp.is_k_lean(n) {
        if first.coef <= nb {
            if let Some(t) = max_below(&rest, n) {
                return Some(Ordinal::monomial(first.exp.clone(), first.coef.clone()).add(&t));
            }
        }
        let c = (&first.coef - 1u32).min(nb);
        if c >= BigUint::one() {
            return Some(Ordinal::monomial(first.exp.clone(), c).add(&max_under_power(&first.exp, n)));
        }
    }
    Some(max_under_power(&first.exp, n))
}

/// The largest `β < ω^e` with `N β ≤ n`.
fn max_under_power(e: &Ordinal, n: u64) -> Ordinal {
    if n == 0 {
        return Ordinal::zero();
    }
    match max_below(e, n) {
        None => Ordinal::zero(),
        Some(top) => Ordinal::monomial(top.clone(), BigUint::from(n)).add(&max_under_power(&top, n)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn o(s: &str) -> Ordinal {
        s.parse().unwrap()
    }

    #[test]
    fn counts_match_coefficient_vectors() {
        // below ω^ω with norm ≤ n: coefficient vectors over exponents 0..=n
        for n in 0..4u64 {
            let v = enumerate_below(&o("w^w"), n, 1 << 20).unwrap();
            assert_eq!(v.len() as u64, (n + 1).pow(n as u32 + 1));
        }
        assert_eq!(enumerate_below(&o("w^2"), 3, 100).unwrap().len(), 16);
        assert_eq!(enumerate_below(&o("0"), 3, 100).unwrap().len(), 0);
        assert_eq!(enumerate_below(&o("w*2+1"), 1, 100).unwrap(), vec![o("0"), o("1"), o("w"), o("w+1")]);
    }

    #[test]
    fn max_below_agrees_with_enumeration() {
        for g in ["1", "5", "w", "w+3", "w*2", "w^2", "w^2*3+w+2", "w^w", "w^(w+1)*2", "w^(w^2)"] {
            let g = o(g);
            for n in 0..4 {
                let Ok(all) = enumerate_below(&g, n, 1 << 14) else { continue };
                assert_eq!(max_below(&g, n), all.last().cloned(), "{g} {n}");
                assert!(all.iter().all(|b| *b < g && b.is_k_lean(n)));
            }
        }
    }

    #[test]
    fn limit_guard() {
        assert!(matches!(enumerate_below(&o("w^w"), 5, 10), Err(Error::CombinatorialExplosion { .. })));
    }
}
