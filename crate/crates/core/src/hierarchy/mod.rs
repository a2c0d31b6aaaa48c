//! Hardy, Cichon, and fast-growing hierarchies over a control function.
//!
//! All three are evaluated with loops or an explicit stack, so an exhausted
//! [`Budget`] surfaces as [`Error::BudgetExceeded`] instead of a stack overflow.

mod control;

pub use control::{iterate_u64, ControlFunction};

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::ordinal::Ordinal;

pub const DEFAULT_MAX_STEPS: u64 = 10_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Budget {
    pub max_steps: u64,
    pub steps_used: u64,
}

impl Default for Budget {
    fn default() -> Self {
        Budget::new(DEFAULT_MAX_STEPS)
    }
}

impl Budget {
    pub fn new(max_steps: u64) -> Self {
        Budget { max_steps, steps_used: 0 }
    }

    pub fn unlimited() -> Self {
        Budget::new(u64::MAX)
    }

    pub fn tick(&mut self) -> Result<()> {
        self.tick_n(1)
    }

    pub fn tick_n(&mut self, n: u64) -> Result<()> {
        self.steps_used = self.steps_used.saturating_add(n);
        if self.steps_used > self.max_steps {
            Err(Error::BudgetExceeded { steps: self.steps_used })
        } else {
            Ok(())
        }
    }

    pub fn remaining(&self) -> u64 {
        self.max_steps.saturating_sub(self.steps_used)
    }
}

fn index(x: &BigUint, budget: &Budget) -> Result<u64> {
    x.to_u64().ok_or(Error::BudgetExceeded { steps: budget.steps_used })
}

// `Pₓ(a)` with every fundamental-sequence step charged to the budget; the
// descent to a successor can take about `x^k` steps below `ω^(ω^k)`
fn predecessor(a: &Ordinal, x: u64, budget: &mut Budget) -> Result<Ordinal> {
    let mut cur = a.clone();
    loop {
        if let Some(p) = cur.pred_successor() {
            return Ok(p);
        }
        budget.tick()?;
        cur = cur.fundamental(x)?;
    }
}

/// `h^α(x)`: `h⁰(x) = x`, `h^α(x) = h^{Pₓ(α)}(h(x))`.
pub fn hardy(h: &ControlFunction, alpha: &Ordinal, x: &BigUint, budget: &mut Budget) -> Result<BigUint> {
    let mut a = alpha.clone();
    let mut x = x.clone();
    while !a.is_zero() {
        budget.tick()?;
        if let (ControlFunction::Successor, Some(k)) = (h, a.as_finite()) {
            return Ok(x + k);
        }
        let xi = index(&x, budget)?;
        a = predecessor(&a, xi, budget)?;
        x = h.apply(&x);
    }
    Ok(x)
}

/// `h_α(x)`: `h₀(x) = 0`, `h_α(x) = 1 + h_{Pₓ(α)}(h(x))`.
pub fn cichon(h: &ControlFunction, alpha: &Ordinal, x: &BigUint, budget: &mut Budget) -> Result<BigUint> {
    let mut a = alpha.clone();
    let mut x = x.clone();
    let mut acc = BigUint::zero();
    while !a.is_zero() {
        budget.tick()?;
        // a finite tail contributes one per step whatever the argument
        if let Some(k) = a.as_finite() {
            return Ok(acc + k);
        }
        let xi = index(&x, budget)?;
        a = predecessor(&a, xi, budget)?;
        x = h.apply(&x);
        acc += 1u32;
    }
    Ok(acc)
}

/// `f_{h,0} = h`, `f_{h,α+1}(x) = f_{h,α}^{x+1}(x)`, `f_{h,λ}(x) = f_{h,λ(x)}(x)`.
pub fn fast_growing(h: &ControlFunction, alpha: &Ordinal, x: &BigUint, budget: &mut Budget) -> Result<BigUint> {
    // pending applications: (ordinal, remaining repetitions)
    let mut stack: Vec<(Ordinal, BigUint)> = vec![(alpha.clone(), BigUint::from(1u32))];
    let mut x = x.clone();
    while let Some((a, reps)) = stack.pop() {
        if reps.is_zero() {
            continue;
        }
        budget.tick()?;
        stack.push((a.clone(), reps - 1u32));
        if a.is_zero() {
            x = h.apply(&x);
        } else if let Some(b) = a.pred_successor() {
            stack.push((b, &x + 1u32));
        } else {
            let xi = index(&x, budget)?;
            stack.push((a.fundamental(xi)?, BigUint::from(1u32)));
        }
    }
    Ok(x)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum HierarchyKind {
    Hardy,
    Cichon,
    Fast,
}

impl std::str::FromStr for HierarchyKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "hardy" => Ok(HierarchyKind::Hardy),
            "cichon" => Ok(HierarchyKind::Cichon),
            "fast" | "fast_growing" => Ok(HierarchyKind::Fast),
            _ => Err(Error::Parse(format!("unknown hierarchy '{s}'"))),
        }
    }
}

pub fn evaluate(kind: HierarchyKind, h: &ControlFunction, alpha: &Ordinal, x: &BigUint, budget: &mut Budget) -> Result<BigUint> {
    match kind {
        HierarchyKind::Hardy => hardy(h, alpha, x, budget),
        HierarchyKind::Cichon => cichon(h, alpha, x, budget),
        HierarchyKind::Fast => fast_growing(h, alpha, x, budget),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn o(s: &str) -> Ordinal {
        s.parse().unwrap()
    }

    fn b(n: u64) -> BigUint {
        BigUint::from(n)
    }

    // literal unrolling, used as an independent check
    fn hardy_rec(h: &ControlFunction, a: &Ordinal, x: u64) -> u64 {
        if a.is_zero() {
            x
        } else {
            hardy_rec(h, &a.predecessor(x).unwrap(), h.apply_u64(x).unwrap())
        }
    }

    fn fast_rec(h: &ControlFunction, a: &Ordinal, x: u64) -> u64 {
        if a.is_zero() {
            h.apply_u64(x).unwrap()
        } else if let Some(p) = a.pred_successor() {
            (0..=x).fold(x, |v, _| fast_rec(h, &p, v))
        } else {
            fast_rec(h, &a.fundamental(x).unwrap(), x)
        }
    }

    #[test]
    fn base_values() {
        let s = ControlFunction::Successor;
        let mut bu = Budget::default();
        for n in 0..8 {
            assert_eq!(hardy(&s, &o("0"), &b(n), &mut bu).unwrap(), b(n));
            assert_eq!(hardy(&s, &o("w"), &b(n), &mut bu).unwrap(), b(2 * n + 1));
            assert_eq!(hardy(&s, &o("5"), &b(n), &mut bu).unwrap(), b(n + 5));
            assert_eq!(cichon(&s, &o("0"), &b(n), &mut bu).unwrap(), b(0));
            assert_eq!(cichon(&s, &o("5"), &b(n), &mut bu).unwrap(), b(5));
            assert_eq!(cichon(&s, &o("w"), &b(n), &mut bu).unwrap(), b(n + 1));
            assert_eq!(fast_growing(&s, &o("0"), &b(n), &mut bu).unwrap(), b(n + 1));
            assert_eq!(fast_growing(&s, &o("1"), &b(n), &mut bu).unwrap(), b(2 * n + 1));
        }
        assert_eq!(fast_growing(&s, &o("2"), &b(2), &mut bu).unwrap(), b(23));
    }

    #[test]
    fn matches_recursive_unrolling() {
        for c in ["succ", "x+2", "2x+1"] {
            let h: ControlFunction = c.parse().unwrap();
            let pool: &[&str] = if c == "succ" { &["3", "w", "w+2", "w*2", "w^2"] } else { &["3", "w", "w+2", "w*2"] };
            for a in pool {
                for x in 0..3 {
                    let mut bu = Budget::default();
                    assert_eq!(hardy(&h, &o(a), &b(x), &mut bu).unwrap(), b(hardy_rec(&h, &o(a), x)), "{c} {a} {x}");
                }
            }
            for a in ["0", "1", "2", "w"] {
                for x in 0..2 {
                    let mut bu = Budget::default();
                    assert_eq!(fast_growing(&h, &o(a), &b(x), &mut bu).unwrap(), b(fast_rec(&h, &o(a), x)), "{c} {a} {x}");
                }
            }
        }
    }

    #[test]
    fn budget_is_enforced() {
        let s = ControlFunction::Successor;
        let mut bu = Budget::new(100);
        let r = cichon(&s, &o("w^w"), &b(4), &mut bu);
        assert!(matches!(r, Err(Error::BudgetExceeded { .. })));
        let mut bu = Budget::new(100);
        assert!(fast_growing(&s, &o("w"), &b(5), &mut bu).unwrap_err().is_budget());
    }
}
