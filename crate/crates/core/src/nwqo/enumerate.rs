use std::collections::BTreeSet;

use super::{Element, NwqoTerm};
use crate::error::{Error, Result};
use crate::ordinal::{enumerate_below, Ordinal};

pub const DEFAULT_LIMIT: usize = 1 << 20;

fn explode(limit: usize) -> Error {
    Error::CombinatorialExplosion { limit }
}

fn binomial_sum(m: usize, k: usize, cap: usize) -> usize {
    // Σ_{i≤k} C(m, i), saturating at cap+1
    let mut total: usize = 0;
    let mut c: u128 = 1;
    for i in 0..=k.min(m) {
        total = total.saturating_add(c.min(usize::MAX as u128) as usize);
        if total > cap {
            return cap + 1;
        }
        c = c * (m - i) as u128 / (i + 1) as u128;
    }
    total
}

/// Calls `f` with every strictly increasing index list of length at most `k` over `0..m`.
fn for_each_combination(m: usize, k: usize, f: &mut dyn FnMut(&[usize]) -> bool) -> bool {
    fn go(m: usize, k: usize, start: usize, cur: &mut Vec<usize>, f: &mut dyn FnMut(&[usize]) -> bool) -> bool {
        if !f(cur) {
            return false;
        }
        if cur.len() == k {
            return true;
        }
        for i in start..m {
            cur.push(i);
            let go_on = go(m, k, i + 1, cur, f);
            cur.pop();
            if !go_on {
                return false;
            }
        }
        true
    }
    go(m, k, 0, &mut Vec::new(), f)
}

/// All subsets of the sorted `pool` with at most `k` members.
pub fn subsets_up_to(pool: &[Element], k: usize, limit: usize) -> Result<Vec<Element>> {
    if binomial_sum(pool.len(), k, limit) > limit {
        return Err(explode(limit));
    }
    let mut out = Vec::new();
    for_each_combination(pool.len(), k, &mut |idx| {
        out.push(Element::Set(idx.iter().map(|&i| pool[i].clone()).collect()));
        true
    });
    Ok(out)
}

/// Subsets of size exactly `min(k, |pool|)`.
fn subsets_of_size(pool: &[Element], k: usize, limit: usize) -> Result<Vec<Element>> {
    let k = k.min(pool.len());
    if binomial_sum(pool.len(), k, limit) > limit {
        return Err(explode(limit));
    }
    let mut out = Vec::new();
    for_each_combination(pool.len(), k, &mut |idx| {
        if idx.len() == k {
            out.push(Element::Set(idx.iter().map(|&i| pool[i].clone()).collect()));
        }
        true
    });
    Ok(out)
}

fn split_sides(forb: &[Element]) -> (Vec<Element>, Vec<Element>) {
    let mut l = Vec::new();
    let mut r = Vec::new();
    for z in forb {
        match z {
            Element::Left(x) => l.push((**x).clone()),
            Element::Right(y) => r.push((**y).clone()),
            _ => {}
        }
    }
    (l, r)
}

fn ordinal_cap(a: &Ordinal, forb: &[Element]) -> Ordinal {
    let mut cap = a.clone();
    for z in forb {
        if let Element::Ord(b) = z {
            if *b < cap {
                cap = b.clone();
            }
        }
    }
    cap
}

/// Index sets of `pool` that avoid `↑z` for one choice of `z` per forbidden
/// set, keeping only the inclusion-maximal ones.
fn majoring_pools(inner: &NwqoTerm, pool: &[Element], forb: &[Element], limit: usize) -> Result<Vec<Vec<usize>>> {
    let mut pools: BTreeSet<Vec<usize>> = BTreeSet::new();
    pools.insert((0..pool.len()).collect());
    for z in forb {
        let Element::Set(zs) = z else { continue };
        let mut next = BTreeSet::new();
        for p in &pools {
            for zz in zs {
                let q: Vec<usize> = p.iter().copied().filter(|&i| !inner.le(zz, &pool[i])).collect();
                next.insert(q);
            }
        }
        if next.len() > limit {
            return Err(explode(limit));
        }
        pools = drop_contained(next);
    }
    Ok(pools.into_iter().collect())
}

fn drop_contained(pools: BTreeSet<Vec<usize>>) -> BTreeSet<Vec<usize>> {
    let v: Vec<Vec<usize>> = pools.into_iter().collect();
    let is_sub = |a: &[usize], b: &[usize]| a.len() <= b.len() && a.iter().all(|x| b.binary_search(x).is_ok());
    (0..v.len())
        .filter(|&i| !(0..v.len()).any(|j| j != i && is_sub(&v[i], &v[j]) && (v[i].len() < v[j].len() || j < i)))
        .map(|i| v[i].clone())
        .collect()
}

/// Elements of norm at most `n` in `base` lying above none of `forb`.
pub fn enumerate_residual(base: &NwqoTerm, forb: &[Element], n: u64, limit: usize) -> Result<Vec<Element>> {
    use NwqoTerm as T;
    let out = match base {
        T::Gamma(k) => {
            if *k as usize > limit {
                return Err(explode(limit));
            }
            (0..*k).map(Element::Gamma).filter(|e| !forb.contains(e)).collect()
        }
        T::Nat => {
            let mut top = n;
            for z in forb {
                if let Element::Nat(m) = z {
                    if *m == 0 {
                        return Ok(Vec::new());
                    }
                    top = top.min(m - 1);
                }
            }
            if top as usize >= limit {
                return Err(explode(limit));
            }
            (0..=top).map(Element::Nat).collect()
        }
        T::Ord(a) => enumerate_below(&ordinal_cap(a, forb), n, limit)?.into_iter().map(Element::Ord).collect(),
        T::Sum(a, b) => {
            let (l, r) = split_sides(forb);
            let mut v: Vec<Element> = enumerate_residual(a, &l, n, limit)?.into_iter().map(Element::left).collect();
            v.extend(enumerate_residual(b, &r, n, limit)?.into_iter().map(Element::right));
            v
        }
        T::Product(a, b) => {
            let xs = enumerate_residual(a, &[], n, limit)?;
            let ys = enumerate_residual(b, &[], n, limit)?;
            if xs.len().saturating_mul(ys.len()) > limit.saturating_mul(4) {
                return Err(explode(limit));
            }
            let mut v = Vec::new();
            for x in &xs {
                for y in &ys {
                    let e = Element::pair(x.clone(), y.clone());
                    if forb.iter().all(|z| !base.le(z, &e)) {
                        v.push(e);
                    }
                }
            }
            v
        }
        T::MajPow(a) => {
            let pool = enumerate_residual(a, &[], n, limit)?;
            if forb.is_empty() {
                subsets_up_to(&pool, n as usize, limit)?
            } else {
                let pools = majoring_pools(a, &pool, forb, limit)?;
                let mut acc: BTreeSet<Element> = BTreeSet::new();
                for p in pools {
                    let sub: Vec<Element> = p.iter().map(|&i| pool[i].clone()).collect();
                    acc.extend(subsets_up_to(&sub, n as usize, limit)?);
                    if acc.len() > limit {
                        return Err(explode(limit));
                    }
                }
                acc.into_iter().collect()
            }
        }
        T::MinPow(d) => {
            let pool = enumerate_residual(&NwqoTerm::nat_pow(*d), &[], n, limit)?;
            if binomial_sum(pool.len(), n as usize, limit) > limit {
                return Err(explode(limit));
            }
            let mut v = Vec::new();
            for_each_combination(pool.len(), n as usize, &mut |idx| {
                let e = Element::Set(idx.iter().map(|&i| pool[i].clone()).collect());
                if forb.iter().all(|z| !base.le(z, &e)) {
                    v.push(e);
                }
                true
            });
            v
        }
        T::Residual(..) => {
            let (b, mut f) = base.split_residual();
            f.extend(forb.iter().cloned());
            return enumerate_residual(b, &f, n, limit);
        }
    };
    if out.len() > limit {
        return Err(explode(limit));
    }
    Ok(out)
}

/// One representative per maximal equivalence class of `elems`.
pub fn maximal_elements(term: &NwqoTerm, elems: &[Element]) -> Vec<Element> {
    let mut out = Vec::new();
    for (i, e) in elems.iter().enumerate() {
        let dominated = elems
            .iter()
            .enumerate()
            .any(|(j, f)| j != i && term.le(e, f) && (!term.le(f, e) || j < i));
        if !dominated {
            out.push(e.clone());
        }
    }
    out
}

/// Nonempty minoring residual balls. `F ≰ Y` means `Y` has a point outside
/// `↑F`, so `Y` is a hitting set for the holes `[0,n]^d ∖ ↑F`. Shrinking `Y`
/// or raising a point without leaving the holes it hits only moves `Y` up, so
/// minimal hitting sets built from signature-maximal points cover the ball.
fn minoring_hitting_sets(d: usize, forb: &[Element], n: u64, limit: usize) -> Result<Vec<Element>> {
    let holes: Vec<Vec<Vec<u64>>> =
        forb.iter().map(|z| z.as_vector_set().unwrap_or_default()).collect();
    let side = n.checked_add(1).ok_or_else(|| explode(limit))?;
    let count = (side as usize).checked_pow(d as u32).filter(|c| *c <= limit).ok_or_else(|| explode(limit))?;
    let k = holes.len();
    let sig_of = |y: &[u64]| -> Vec<bool> {
        holes.iter().map(|f| !f.iter().any(|p| p.iter().zip(y).all(|(a, b)| a <= b))).collect()
    };
    let mut pts: Vec<(Vec<u64>, Vec<bool>)> = Vec::new();
    for i in 0..count {
        let mut y = vec![0u64; d];
        let mut r = i;
        for j in (0..d).rev() {
            y[j] = (r % side as usize) as u64;
            r /= side as usize;
        }
        let s = sig_of(&y);
        if s.iter().any(|b| *b) {
            pts.push((y, s));
        }
    }
    let geq = |a: &[u64], b: &[u64]| a.iter().zip(b).all(|(x, y)| x >= y);
    let covers = |a: &[bool], b: &[bool]| a.iter().zip(b).all(|(x, y)| *x || !*y);
    let cands: Vec<(Vec<u64>, Vec<bool>)> = pts
        .iter()
        .filter(|(y, s)| !pts.iter().any(|(z, t)| z != y && geq(z, y) && covers(t, s)))
        .cloned()
        .collect();
    let mut out: BTreeSet<Element> = BTreeSet::new();
    let mut chosen: Vec<usize> = Vec::new();
    fn go(
        cands: &[(Vec<u64>, Vec<bool>)],
        k: usize,
        n: usize,
        chosen: &mut Vec<usize>,
        out: &mut BTreeSet<Element>,
        limit: usize,
        visits: &mut usize,
    ) -> Result<()> {
        *visits += 1;
        if *visits > limit {
            return Err(explode(limit));
        }
        let first = (0..k).find(|&f| !chosen.iter().any(|&c| cands[c].1[f]));
        let Some(f) = first else {
            // keep irredundant sets only
            let irredundant = chosen.iter().all(|&c| {
                (0..k).any(|h| cands[c].1[h] && !chosen.iter().any(|&o| o != c && cands[o].1[h]))
            });
            if irredundant {
                out.insert(Element::vector_set(chosen.iter().map(|&c| cands[c].0.clone())));
                if out.len() > limit {
                    return Err(explode(limit));
                }
            }
            return Ok(());
        };
        if chosen.len() == n {
            return Ok(());
        }
        for c in 0..cands.len() {
            if cands[c].1[f] {
                chosen.push(c);
                go(cands, k, n, chosen, out, limit, visits)?;
                chosen.pop();
            }
        }
        Ok(())
    }
    go(&cands, k, n as usize, &mut chosen, &mut out, limit, &mut 0)?;
    Ok(out.into_iter().collect())
}

/// Representatives of the maximal classes of the norm-`n` ball of `base/forb`.
/// Every element of the ball lies below one of them.
pub(crate) fn maximal_ball(base: &NwqoTerm, forb: &[Element], n: u64, limit: usize) -> Result<Vec<Element>> {
    use NwqoTerm as T;
    match base {
        T::Nat => Ok(enumerate_residual(base, forb, n, limit)?.pop().into_iter().collect()),
        T::Ord(a) => Ok(crate::ordinal::max_below(&ordinal_cap(a, forb), n).map(Element::Ord).into_iter().collect()),
        T::Gamma(_) => enumerate_residual(base, forb, n, limit),
        T::Sum(a, b) => {
            let (l, r) = split_sides(forb);
            let mut v: Vec<Element> = maximal_ball(a, &l, n, limit)?.into_iter().map(Element::left).collect();
            v.extend(maximal_ball(b, &r, n, limit)?.into_iter().map(Element::right));
            Ok(v)
        }
        T::MajPow(a) => {
            let pool = enumerate_residual(a, &[], n, limit)?;
            let pools = majoring_pools(a, &pool, forb, limit)?;
            let mut acc: BTreeSet<Element> = BTreeSet::new();
            for p in pools {
                let sub: Vec<Element> = p.iter().map(|&i| pool[i].clone()).collect();
                acc.extend(subsets_of_size(&sub, n as usize, limit)?);
                if acc.len() > limit {
                    return Err(explode(limit));
                }
            }
            let v: Vec<Element> = acc.into_iter().collect();
            Ok(maximal_elements(base, &v))
        }
        T::MinPow(_) => {
            // the empty set lies above everything
            let empty = Element::Set(Vec::new());
            if forb.iter().all(|z| !base.le(z, &empty)) {
                return Ok(vec![empty]);
            }
            let T::MinPow(d) = base else { unreachable!() };
            let v = minoring_hitting_sets(*d, forb, n, limit)?;
            Ok(maximal_elements(base, &v))
        }
        T::Residual(..) => {
            let (b, mut f) = base.split_residual();
            f.extend(forb.iter().cloned());
            maximal_ball(b, &f, n, limit)
        }
        T::Product(..) => {
            let v = enumerate_residual(base, forb, n, limit)?;
            Ok(maximal_elements(base, &v))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(s: &str) -> NwqoTerm {
        s.parse().unwrap()
    }

    fn filtered(base: &NwqoTerm, forb: &[Element], n: u64) -> BTreeSet<Element> {
        enumerate_residual(base, &[], n, DEFAULT_LIMIT)
            .unwrap()
            .into_iter()
            .filter(|e| forb.iter().all(|z| !base.le(z, e)))
            .collect()
    }

    #[test]
    fn residual_enumeration_matches_filter() {
        let cases: Vec<(NwqoTerm, Vec<Vec<Vec<u64>>>)> = vec![
            (t("PMaj(N)"), vec![vec![vec![1]], vec![vec![0], vec![2]]]),
            (t("PMaj(N^2)"), vec![vec![vec![1, 1]], vec![vec![0, 2], vec![2, 0]]]),
            (t("PMaj(N^2)"), vec![vec![]]),
            (t("PMin(2)"), vec![vec![vec![1, 1]], vec![]]),
        ];
        for (base, forb) in cases {
            let forb: Vec<Element> = forb.into_iter().map(Element::vector_set).collect();
            for k in 1..=forb.len() {
                for n in 0..3 {
                    let got: BTreeSet<Element> = enumerate_residual(&base, &forb[..k], n, DEFAULT_LIMIT).unwrap().into_iter().collect();
                    assert_eq!(got, filtered(&base, &forb[..k], n), "{base} {n}");
                }
            }
        }
        let s = t("CNF(w^2) + G(2)");
        let forb = vec![Element::left(Element::Ord("w+1".parse().unwrap())), Element::right(Element::Gamma(0))];
        let got: BTreeSet<Element> = enumerate_residual(&s, &forb, 2, DEFAULT_LIMIT).unwrap().into_iter().collect();
        assert_eq!(got, filtered(&s, &forb, 2));
    }

    #[test]
    fn maximal_ball_dominates_ball() {
        let cases = [
            (t("PMaj(N)"), vec![Element::vector_set([vec![2]])]),
            (t("PMaj(N^2)"), vec![Element::vector_set([vec![1, 1]])]),
            (t("G(2) * N"), vec![Element::pair(Element::Gamma(0), Element::Nat(1))]),
            (t("PMin(1)"), vec![Element::vector_set([])]),
            (t("PMin(2)"), vec![Element::vector_set([]), Element::vector_set([vec![1, 1]])]),
            (t("PMin(2)"), vec![Element::vector_set([]), Element::vector_set([vec![0, 1], vec![1, 0]]), Element::vector_set([vec![2, 0]])]),
            (t("PMin(2)"), vec![Element::vector_set([vec![0, 2]])]),
            (t("CNF(w*2+1)"), vec![]),
        ];
        for (base, forb) in cases {
            for n in 0..3 {
                let ball = enumerate_residual(&base, &forb, n, DEFAULT_LIMIT).unwrap();
                let top = maximal_ball(&base, &forb, n, DEFAULT_LIMIT).unwrap();
                assert!(top.iter().all(|c| ball.contains(c)));
                assert!(ball.iter().all(|e| top.iter().any(|c| base.le(e, c))), "{base} {n}");
                assert!(top.iter().all(|c| !ball.iter().any(|e| base.le(c, e) && !base.le(e, c))), "{base} {n}");
            }
        }
    }
}
