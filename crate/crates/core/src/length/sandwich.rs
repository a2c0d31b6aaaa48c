//! Desk-scale checks of the lower and upper bounds around the length
//! functions of `P_f(ℕ^d)` under the majoring and minoring orders.

use num_bigint::BigUint;
use serde::Serialize;
use serde_json::Value;

use super::{length_function, m_upper, max_bad_sequence, LengthQuery, Witness};
use crate::error::{Error, Result};
use crate::hierarchy::{cichon, Budget, ControlFunction};
use crate::nwqo::{Element, NwqoTerm};
use crate::ordinal::Ordinal;
use crate::reflect::{transport, Reflection};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Verified,
    Violated,
    SkippedByBudget,
    PreconditionNotMet,
}

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub statement: String,
    pub lhs: Option<String>,
    pub rhs: Option<String>,
    pub status: Status,
    pub note: Option<String>,
    pub witness: Option<Value>,
}

#[derive(Clone, Debug, Serialize)]
pub struct SandwichReport {
    pub d: usize,
    pub n: u64,
    pub control: String,
    pub checks: Vec<Check>,
}

impl SandwichReport {
    pub fn violated(&self) -> bool {
        self.checks.iter().any(|c| c.status == Status::Violated)
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn to_json(&self) -> Value {
        serde_json::to_value(self).expect("report serializes")
    }
}

enum Got<T> {
    Value(T),
    Skipped(String),
}

fn attempt<T>(r: Result<T>) -> Got<T> {
    match r {
        Ok(v) => Got::Value(v),
        Err(e) => Got::Skipped(e.to_string()),
    }
}

fn is_budget<T>(r: &Result<T>) -> bool {
    matches!(r, Err(e) if e.is_budget())
}

const SHORT_BUDGET: u64 = 200;

struct Ctx<'a> {
    g: &'a ControlFunction,
    steps: u64,
}

impl Ctx<'_> {
    fn budget(&self) -> Budget {
        Budget::new(self.steps)
    }

    // powersets of ℕ^d for d ≥ 2 are astronomically long past tiny n, so
    // exact attempts there get a short budget
    fn steps_for(&self, term: &NwqoTerm) -> u64 {
        let big = match term {
            NwqoTerm::MajPow(t) => t.nat_pow_dim().is_some_and(|d| d >= 2),
            NwqoTerm::MinPow(d) => *d >= 2,
            _ => false,
        };
        if big {
            self.steps.min(SHORT_BUDGET)
        } else {
            self.steps
        }
    }

    fn length(&self, term: NwqoTerm, g: &ControlFunction, n: u64) -> Result<BigUint> {
        let steps = self.steps_for(&term);
        let mut q = LengthQuery::new(term, g.clone(), n).with_budget(steps);
        length_function(&mut q)
    }

    fn witness(&self, term: NwqoTerm, n: u64) -> Result<Witness> {
        let steps = self.steps_for(&term);
        let mut q = LengthQuery::new(term, self.g.clone(), n).with_budget(steps);
        max_bad_sequence(&mut q)
    }

    fn cichon(&self, h: &ControlFunction, a: &Ordinal, x: u64) -> Result<BigUint> {
        cichon(h, a, &BigUint::from(x), &mut self.budget())
    }
}

fn check(name: &str, statement: String) -> Check {
    Check { name: name.into(), statement, lhs: None, rhs: None, status: Status::SkippedByBudget, note: None, witness: None }
}

fn compare(mut c: Check, lhs: Got<BigUint>, rhs: Got<BigUint>, dump: impl FnOnce() -> Option<Value>) -> Check {
    let mut notes = Vec::new();
    if let Got::Value(v) = &lhs {
        c.lhs = Some(v.to_string());
    }
    if let Got::Value(v) = &rhs {
        c.rhs = Some(v.to_string());
    }
    for g in [&lhs, &rhs] {
        if let Got::Skipped(m) = g {
            notes.push(m.clone());
        }
    }
    if let (Got::Value(l), Got::Value(r)) = (&lhs, &rhs) {
        if l <= r {
            c.status = Status::Verified;
        } else {
            c.status = Status::Violated;
            c.witness = dump();
        }
    }
    if !notes.is_empty() {
        c.note = Some(notes.join("; "));
    }
    c
}

/// Runs the sandwich checks for `P_f(ℕ^d)`, control `g` and start `n`. Each
/// computation gets its own budget of `steps`; exhausted budgets are recorded
/// as skipped, never as violations.
pub fn check_sandwich(d: usize, g: &ControlFunction, n: u64, steps: u64) -> Result<SandwichReport> {
    if d == 0 {
        return Err(Error::UnsupportedShape("d ≥ 1".into()));
    }
    g.validate()?;
    let cx = Ctx { g, steps };
    let alpha = Ordinal::omega_tower2(d as u64 - 1);
    let maj = NwqoTerm::maj_nat(d);
    let mut checks = Vec::new();

    // ordinal length equals the Cichon value
    let mut c = check("ordinal_length", format!("L_{{{alpha},g}}(n) = g_{{{alpha}}}(n) for n ≥ N({alpha})"));
    let ord_witness = if n < alpha.norm_u64() {
        c.status = Status::PreconditionNotMet;
        c.note = Some(format!("needs n ≥ {}", alpha.norm_u64()));
        None
    } else {
        let w = cx.witness(NwqoTerm::Ord(alpha.clone()), n);
        let lhs = attempt(w.as_ref().map(|w| BigUint::from(w.sequence.len())).map_err(Clone::clone));
        let rhs = attempt(cx.cichon(g, &alpha, n));
        let eq = matches!((&lhs, &rhs), (Got::Value(a), Got::Value(b)) if a == b);
        let dump = w.as_ref().ok().map(|w| w.to_json(&NwqoTerm::Ord(alpha.clone())));
        c = compare(c, lhs, rhs, || dump.clone());
        if c.status == Status::Verified && !eq {
            c.status = Status::Violated;
            c.witness = dump;
        }
        w.ok()
    };
    checks.push(c);

    // lower bound in the majoring order, via a transported witness or directly
    let phi = ControlFunction::Phi(d as u32);
    let mut maj_witness: Option<(Vec<Element>, ControlFunction, u64)> = None;
    if d >= 2 {
        let mut c = check("maj_lower", format!("L_{{{alpha},g}}(n) ≤ L_{{P_f(N^{d}),phi.g}}(phi(n)) by the image of a maximal witness"));
        match &ord_witness {
            None => c.note = Some("no ordinal witness".into()),
            Some(w) => {
                let r = Reflection::ord_to_maj(d)?;
                let t = transport(&r, &w.sequence, g, n)?;
                c.lhs = Some(w.sequence.len().to_string());
                c.rhs = Some(format!("≥ {} (image witness)", t.length));
                if t.holds() && t.source_bad && t.source_controlled {
                    c.status = Status::Verified;
                    let img: Vec<Element> = w.sequence.iter().map(|e| r.apply(e)).collect::<Result<_>>()?;
                    let qn = phi.apply_u64(n).unwrap_or(u64::MAX);
                    maj_witness = Some((img, ControlFunction::compose(phi.clone(), g.clone()), qn));
                } else {
                    c.status = Status::Violated;
                    c.witness = Some(w.to_json(&NwqoTerm::Ord(alpha.clone())));
                }
            }
        }
        checks.push(c);
    } else {
        let c = check("maj_lower", "L_{w,g}(n) ≤ L_{P_f(N),g}(n)".into());
        let lhs = attempt(cx.length(NwqoTerm::Ord(alpha.clone()), g, n));
        let w = cx.witness(maj.clone(), n);
        let rhs = attempt(w.as_ref().map(|w| BigUint::from(w.sequence.len())).map_err(Clone::clone));
        let dump = w.as_ref().ok().map(|w| w.to_json(&maj));
        checks.push(compare(c, lhs, rhs, || dump));
        if let Ok(w) = w {
            maj_witness = Some((w.sequence, g.clone(), n));
        }
    }

    // lower bound in the minoring order through the majoring one
    let mut c = check("min_lower", format!("majoring witnesses map to bad p-controlled sequences in P_f(N^{d}) minoring"));
    match &maj_witness {
        None => c.note = Some("no majoring witness".into()),
        Some((seq, gg, nn)) => {
            let r = Reflection::maj_to_min(d)?;
            let t = transport(&r, seq, gg, *nn)?;
            c.lhs = Some(seq.len().to_string());
            c.rhs = Some(format!("≥ {} (image witness, control {}, start {})", t.length, t.control, t.start));
            if t.holds() && t.source_bad && t.source_controlled {
                c.status = Status::Verified;
            } else {
                c.status = Status::Violated;
                c.witness = Some(serde_json::json!({ "sequence": maj.sequence_to_json(seq) }));
            }
        }
    }
    checks.push(c);

    // M recursion dominates the exact length
    let maj_len = cx.length(maj.clone(), g, n);
    let mut c = check("m_upper", format!("L_{{C({alpha}),g}}(n) ≤ M_{{{alpha},g}}(n)"));
    let m = m_upper(&alpha, g, n, &mut cx.budget());
    c = compare(c, attempt(maj_len.clone()), attempt(m), || cx.witness(maj.clone(), n).ok().map(|w| w.to_json(&maj)));
    checks.push(c);

    // majoring upper bound
    let k = (d as u64).max(1);
    let mut c = check("maj_upper", format!("L_{{P_f(N^{d}),g}}(n) ≤ h_{{{alpha}}}(4·{k}·n) with h(x) = 4x·g(x), n > 0"));
    if n == 0 {
        c.status = Status::PreconditionNotMet;
        c.note = Some("the upper bound needs n > 0".into());
    } else {
        let h = ControlFunction::FourXTimes(Box::new(g.clone()));
        let rhs = if is_budget(&maj_len) { Got::Skipped("length not computed".into()) } else { attempt(cx.cichon(&h, &alpha, 4 * k * n)) };
        c = compare(c, attempt(maj_len.clone()), rhs, || cx.witness(maj.clone(), n).ok().map(|w| w.to_json(&maj)));
    }
    checks.push(c);

    // minoring upper bound with k = 1
    let beta = Ordinal::omega_pow(Ordinal::monomial(Ordinal::from_u64(d as u64 - 1), BigUint::from(1u64 << d)));
    let cc = 4 * (d as u64) << d;
    let mut c = check(
        "min_upper",
        format!("L_{{P_f(N^{d}) min,g}}(n) ≤ t_{{{beta}}}({cc}·g(n)^{}) with t(x) = 4x·(g(x)+1)^{d}, for large n", 2 * d),
    );
    let min = NwqoTerm::MinPow(d);
    let min_len = cx.length(min.clone(), g, n);
    let arg = g.apply_u64(n).and_then(|gn| gn.checked_pow(2 * d as u32)).and_then(|v| v.checked_mul(cc));
    let rhs = match (&min_len, arg) {
        (Err(_), _) => Got::Skipped("length not computed".into()),
        (_, None) => Got::Skipped("argument overflows".into()),
        (Ok(_), Some(x)) => {
            let t = ControlFunction::TBound { k: 1, d: d as u32, g: Box::new(g.clone()) };
            attempt(cx.cichon(&t, &beta, x))
        }
    };
    c = compare(c, attempt(min_len), rhs, || cx.witness(min.clone(), n).ok().map(|w| w.to_json(&min)));
    checks.push(c);

    Ok(SandwichReport { d, n, control: g.to_string(), checks })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn d1_n1_successor() {
        let r = check_sandwich(1, &ControlFunction::Successor, 1, 100_000).unwrap();
        let up = r.check("maj_upper").unwrap();
        assert_eq!(up.status, Status::Verified);
        assert_eq!(up.lhs.as_deref(), Some("3"));
        assert_eq!(up.rhs.as_deref(), Some("5"));
        assert_eq!(r.check("ordinal_length").unwrap().status, Status::Verified);
        assert_eq!(r.check("min_lower").unwrap().status, Status::Verified);
        assert!(!r.violated());
    }

    #[test]
    fn n0_precondition() {
        let r = check_sandwich(1, &ControlFunction::Successor, 0, 100_000).unwrap();
        assert_eq!(r.check("maj_upper").unwrap().status, Status::PreconditionNotMet);
    }

    #[test]
    fn d2_lower_transport() {
        let r = check_sandwich(2, &ControlFunction::Successor, 1, 200_000).unwrap();
        assert_eq!(r.check("ordinal_length").unwrap().lhs.as_deref(), Some("6"));
        assert_eq!(r.check("maj_lower").unwrap().status, Status::Verified);
        assert_eq!(r.check("min_lower").unwrap().status, Status::Verified);
        assert!(!r.violated());
    }
}
