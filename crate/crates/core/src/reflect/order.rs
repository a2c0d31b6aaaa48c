use std::collections::BTreeSet;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::nwqo::NwqoTerm;
use crate::ordinal::{Ordinal, Term};

/// `α < ω^(ω^ω)`: every exponent has finite exponents only.
pub fn in_range(a: &Ordinal) -> bool {
    a.terms().iter().all(|t| t.exp.terms().iter().all(|u| u.exp.is_finite()))
}

fn check_range(a: &Ordinal) -> Result<()> {
    if in_range(a) {
        Ok(())
    } else {
        Err(Error::OutOfRange(format!("{a} is not below w^(w^w)")))
    }
}

/// `(p, c)` pairs of an exponent `Σ ω^p·c` with finite `p`.
fn finite_powers(e: &Ordinal) -> Result<Vec<(u64, BigUint)>> {
    e.terms()
        .iter()
        .map(|t| {
            t.exp
                .as_u64()
                .map(|p| (p, t.coef.clone()))
                .ok_or_else(|| Error::OutOfRange(format!("exponent {e} is not below w^w")))
        })
        .collect()
}

/// `o(A)` for terms built from `Γₖ`, ℕ, ordinal segments, `P_f(ℕ^d)`, `+`, `×`.
pub fn order_type(a: &NwqoTerm) -> Result<Ordinal> {
    use NwqoTerm as T;
    match a {
        T::Gamma(k) => Ok(Ordinal::from_u64(*k)),
        T::Nat => Ok(Ordinal::omega()),
        T::Ord(x) => Ok(x.clone()),
        T::MajPow(inner) => match inner.nat_pow_dim() {
            Some(d) => Ok(Ordinal::omega_tower2(d as u64 - 1)),
            None => Err(Error::UnsupportedTerm(format!("order type of {a}"))),
        },
        T::Sum(x, y) => Ok(order_type(x)?.nat_sum(&order_type(y)?)),
        T::Product(x, y) => Ok(order_type(x)?.nat_product(&order_type(y)?)),
        T::MinPow(_) | T::Residual(..) => Err(Error::UnsupportedTerm(format!("order type of {a}"))),
    }
}

/// Factor dimensions of the summands of `C(α)`, in canonical order: strict
/// terms in decreasing order, each repeated by its coefficient, factors by
/// decreasing dimension. An empty list is a `Γ₁` summand.
pub(crate) fn canonical_summands(a: &Ordinal) -> Result<Vec<Vec<usize>>> {
    check_range(a)?;
    let mut out = Vec::new();
    for t in a.terms() {
        let mut dims = Vec::new();
        for (p, c) in finite_powers(&t.exp)? {
            let c = c.to_usize().filter(|c| *c <= 1 << 16).ok_or_else(|| Error::OutOfRange(format!("{a}")))?;
            dims.extend(std::iter::repeat_n(p as usize + 1, c));
        }
        let c = t.coef.to_usize().filter(|c| *c <= 1 << 20).ok_or_else(|| Error::OutOfRange(format!("{a}")))?;
        out.extend(std::iter::repeat_n(dims, c));
    }
    Ok(out)
}

/// Builds the term for summands already in canonical order.
pub(crate) fn term_of_summands(summands: &[Vec<usize>]) -> NwqoTerm {
    let units = summands.iter().filter(|s| s.is_empty()).count();
    let mut parts: Vec<NwqoTerm> = summands
        .iter()
        .filter(|s| !s.is_empty())
        .map(|s| {
            let mut it = s.iter().rev();
            let last = NwqoTerm::maj_nat(*it.next().unwrap());
            it.fold(last, |acc, d| NwqoTerm::product(NwqoTerm::maj_nat(*d), acc))
        })
        .collect();
    if units > 0 || parts.is_empty() {
        parts.push(NwqoTerm::Gamma(units as u64));
    }
    let last = parts.pop().unwrap();
    parts.into_iter().rev().fold(last, |acc, p| NwqoTerm::sum(p, acc))
}

/// `C(α)`.
pub fn canonical_nwqo(a: &Ordinal) -> Result<NwqoTerm> {
    Ok(term_of_summands(&canonical_summands(a)?))
}

fn d_tower(p: u64, n: u64) -> Ordinal {
    // D_n(ω^(ω^p))
    if p == 0 {
        Ordinal::from_u64(n + 1)
    } else {
        let c = BigUint::from(p + 1) * n;
        Ordinal::omega_pow(Ordinal::monomial(Ordinal::from_u64(p - 1), c))
    }
}

/// `Dₙ` on `k ≥ 1`, on `ω`, on `ω^(ω^d)`, and on `ω^β` with `β < ω^ω`.
pub fn derivative(a: &Ordinal, n: u64) -> Result<Ordinal> {
    if let Some(k) = a.as_finite() {
        if k.is_zero() {
            return Err(Error::UnsupportedShape("D_n(0) is undefined".into()));
        }
        return Ok(Ordinal::finite(k - 1u32));
    }
    let [t] = a.terms() else {
        return Err(Error::UnsupportedShape(format!("D_n needs a single power of w, got {a}")));
    };
    if !t.coef.is_one() {
        return Err(Error::UnsupportedShape(format!("D_n needs a single power of w, got {a}")));
    }
    let powers = finite_powers(&t.exp)?;
    let mut acc = Ordinal::zero();
    for (i, (p, c)) in powers.iter().enumerate() {
        // the other summands of the exponent: one copy of ω^p removed
        let mut rest: Vec<Term> = Vec::new();
        for (j, (q, cq)) in powers.iter().enumerate() {
            let coef = if i == j { cq - 1u32 } else { cq.clone() };
            if !coef.is_zero() {
                rest.push(Term { exp: Ordinal::from_u64(*q), coef });
            }
        }
        let others = Ordinal::omega_pow(Ordinal::from_terms(rest)?);
        let piece = d_tower(*p, n).nat_product(&others).nat_product(&Ordinal::finite(c.clone()));
        acc = acc.nat_sum(&piece);
    }
    Ok(acc)
}

/// `∂ₙ(α)`, one entry per distinct summand of the non-strict form.
pub fn partial_derivative(a: &Ordinal, n: u64) -> Result<Vec<Ordinal>> {
    check_range(a)?;
    let mut out = BTreeSet::new();
    for (i, t) in a.terms().iter().enumerate() {
        let mut rest = a.terms().to_vec();
        if rest[i].coef.is_one() {
            rest.remove(i);
        } else {
            rest[i].coef -= 1u32;
        }
        let d = derivative(&Ordinal::omega_pow(t.exp.clone()), n)?;
        out.insert(d.nat_sum(&Ordinal::from_terms(rest)?));
    }
    Ok(out.into_iter().collect())
}
