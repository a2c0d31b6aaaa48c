use num_traits::ToPrimitive;

use super::flat::{CanonicalIso, Node};
use super::order::{order_type, partial_derivative};
use super::Reflection;
use crate::error::{Error, Result};
use crate::hierarchy::ControlFunction;
use crate::ideal::{comp_up, min_complement_down, DownwardClosedSet};
use crate::nwqo::{Element, NwqoTerm};
use crate::ordinal::Ordinal;

fn check_dim(d: usize) -> Result<()> {
    if d < 2 {
        return Err(Error::UnsupportedShape("ord_to_maj needs d ≥ 2".into()));
    }
    Ok(())
}

/// `{(i, c_(i,0), …, c_(i,d−2)) : 1 ≤ i ≤ l}` for `γ = ω^β₁ + … + ω^β_l`.
pub fn ord_to_maj(g: &Ordinal, d: usize) -> Result<Element> {
    check_dim(d)?;
    let bound = Ordinal::omega_tower2(d as u64 - 1);
    if *g >= bound {
        return Err(Error::OutOfRange(format!("{g} is not below {bound}")));
    }
    let mut pts = Vec::new();
    for (i, beta) in g.expand()?.iter().enumerate() {
        let mut v = vec![i as u64 + 1];
        for j in 0..d - 1 {
            let c = beta.coefficient_of(&Ordinal::from_u64(j as u64));
            v.push(c.to_u64().ok_or_else(|| Error::OutOfRange(format!("coefficient in {g}")))?);
        }
        pts.push(v);
    }
    Ok(Element::vector_set(pts))
}

fn vector_set_of(e: &Element, d: usize) -> Result<Vec<Vec<u64>>> {
    match e.as_vector_set() {
        Some(v) if v.iter().all(|p| p.len() == d) => Ok(v),
        _ => Err(Error::DomainMismatch { term: NwqoTerm::maj_nat(d).to_string(), element: e.to_string() }),
    }
}

/// `min(ℕ^d ∖ ↓X)`.
pub fn maj_to_min(x: &Element, d: usize) -> Result<Element> {
    let pts = vector_set_of(x, d)?;
    Ok(Element::vector_set(min_complement_down(d, &pts)?))
}

/// Nonempty index subsequences of `1..=d`, by size and then lexicographically.
pub fn index_subsequences(d: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    for k in 1..=d {
        let mut cur: Vec<usize> = (1..=k).collect();
        loop {
            out.push(cur.clone());
            // next combination
            let mut i = k;
            while i > 0 && cur[i - 1] == d - k + i {
                i -= 1;
            }
            if i == 0 {
                break;
            }
            cur[i - 1] += 1;
            for j in i..k {
                cur[j] = cur[j - 1] + 1;
            }
        }
    }
    out
}

/// `A_d`: one `P_f(ℕ^k)` factor per index subsequence of size `k`.
pub fn prod_maj_target(d: usize) -> NwqoTerm {
    let mut factors: Vec<NwqoTerm> = index_subsequences(d).iter().map(|s| NwqoTerm::maj_nat(s.len())).collect();
    let last = factors.pop().expect("d ≥ 1");
    factors.into_iter().rev().fold(last, |acc, f| NwqoTerm::product(f, acc))
}

/// Exact test: the projection of `comp` with `idx` fixed to `t` is all of `ℕ^(d−k)`.
pub fn fix_is_full(comp: &DownwardClosedSet, idx: &[usize], t: &[u64]) -> Result<bool> {
    let fixed: Vec<(usize, u64)> = idx.iter().copied().zip(t.iter().copied()).collect();
    Ok(comp.project_fix(&fixed)?.is_full())
}

/// Membership oracle for the same test: free coordinates pushed past every
/// coordinate of `X`, then checked against `↑X`.
pub fn bstar_is_full(xs: &[Vec<u64>], idx: &[usize], t: &[u64]) -> bool {
    !xs.iter().any(|x| idx.iter().zip(t).all(|(&i, &v)| x[i - 1] <= v))
}

fn grid_points(k: usize, range: u64, f: &mut dyn FnMut(&[u64]) -> Result<()>) -> Result<()> {
    let mut t = vec![0u64; k];
    loop {
        f(&t)?;
        let mut j = 0;
        while j < k && t[j] == range {
            t[j] = 0;
            j += 1;
        }
        if j == k {
            return Ok(());
        }
        t[j] += 1;
    }
}

/// The sets `X_{i₁…i_k}`, one per index subsequence, with candidate
/// coordinates in `[0, range]`.
pub fn s_sets(x: &[Vec<u64>], d: usize, range: u64) -> Result<Vec<(Vec<usize>, Vec<Vec<u64>>)>> {
    if x.is_empty() {
        return Err(Error::EmptyInput("the minoring-to-majoring map needs X ≠ ∅".into()));
    }
    let comp = comp_up(d, x)?;
    let subs = index_subsequences(d);
    let mut out: Vec<(Vec<usize>, Vec<Vec<u64>>)> = Vec::new();
    for idx in &subs {
        let mut set = Vec::new();
        grid_points(idx.len(), range, &mut |t| {
            if !fix_is_full(&comp, idx, t)? {
                return Ok(());
            }
            // exclusion: no strict subsequence already qualified
            let shadowed = out.iter().any(|(sub, pts)| {
                sub.len() < idx.len()
                    && sub.iter().all(|i| idx.contains(i))
                    && pts.iter().any(|p| sub.iter().zip(p).all(|(i, v)| t[idx.iter().position(|j| j == i).unwrap()] == *v))
            });
            if !shadowed {
                set.push(t.to_vec());
            }
            Ok(())
        })?;
        out.push((idx.clone(), set));
    }
    Ok(out)
}

/// The tuple of S-sets packaged as an element of `A_d`.
pub fn min_to_prod_maj(x: &Element, d: usize) -> Result<Element> {
    let pts = vector_set_of(x, d)?;
    let range = NwqoTerm::MinPow(d).norm(x);
    let sets = s_sets(&pts, d, range)?;
    let mut parts: Vec<Element> = sets.into_iter().map(|(_, s)| Element::vector_set(s)).collect();
    let last = parts.pop().expect("d ≥ 1");
    Ok(parts.into_iter().rev().fold(last, |acc, p| Element::pair(p, acc)))
}

impl Reflection {
    /// `CNF(ω^(ω^(d−1))) → P_f(ℕ^d)` majoring, bound `φ(x) = x(x+1)^d`.
    pub fn ord_to_maj(d: usize) -> Result<Reflection> {
        check_dim(d)?;
        Ok(Reflection::new(
            NwqoTerm::Ord(Ordinal::omega_tower2(d as u64 - 1)),
            NwqoTerm::maj_nat(d),
            ControlFunction::Phi(d as u32),
            format!("ord2maj(d={d})"),
            move |e| match e {
                Element::Ord(g) => ord_to_maj(g, d),
                _ => Err(Error::DomainMismatch { term: "ordinal segment".into(), element: e.to_string() }),
            },
        ))
    }

    /// `P_f(ℕ^d)` majoring `→` minoring, bound `p(x) = d(x+1)`.
    pub fn maj_to_min(d: usize) -> Result<Reflection> {
        if d == 0 {
            return Err(Error::UnsupportedShape("d ≥ 1".into()));
        }
        Ok(Reflection::new(
            NwqoTerm::maj_nat(d),
            NwqoTerm::MinPow(d),
            ControlFunction::LinearP(d as u32),
            format!("maj2min(d={d})"),
            move |e| maj_to_min(e, d),
        ))
    }

    /// `P_f(ℕ^d) ∖ {∅}` minoring `→ A_d`, bound `q(x) = (x+1)^d`.
    pub fn min_to_prod_maj(d: usize) -> Result<Reflection> {
        if d == 0 {
            return Err(Error::UnsupportedShape("d ≥ 1".into()));
        }
        Ok(Reflection::new(
            NwqoTerm::Residual(Box::new(NwqoTerm::MinPow(d)), vec![Element::Set(Vec::new())]),
            prod_maj_target(d),
            ControlFunction::PowerQ(d as u32),
            format!("min2prodmaj(d={d})"),
            move |e| min_to_prod_maj(e, d),
        ))
    }
}

// one summand of A/X after splitting on the first failing factor
enum Piece {
    // P_f(ℕ)/X_k → Γ_(n+1): summand offset by the max element
    Unary,
    // P_f(ℕ^d)/X_k → P_f(ℕ^(d−1))^(dn)
    Slices(usize),
}

/// The reflection `A/X ↪ C(α')` with `α' ∈ ∂ₙ(o(A))`.
pub fn residual_reflection(a: &NwqoTerm, x: &Element, n: u64) -> Result<Reflection> {
    let norm = a.norm_of(x)?;
    if norm > n {
        return Err(Error::NormTooLarge { norm, bound: n });
    }
    let src = Node::build(a)?;
    let (hit, xs) = src.encode(x)?;
    let dims = src.summands[hit].clone();
    let nn = usize::try_from(n).ok().filter(|v| *v <= 1 << 12).ok_or_else(|| Error::OutOfRange(format!("n = {n}")))?;

    // flat target: summands before `hit`, the pieces, summands after `hit`
    let mut flat: Vec<Vec<usize>> = src.summands[..hit].to_vec();
    let mut pieces: Vec<(usize, Piece)> = Vec::new();
    for (k, &dk) in dims.iter().enumerate() {
        let rest: Vec<usize> = dims.iter().enumerate().filter(|(j, _)| *j != k).map(|(_, v)| *v).collect();
        pieces.push((flat.len(), if dk == 1 { Piece::Unary } else { Piece::Slices(dk) }));
        if dk == 1 {
            flat.extend(std::iter::repeat_n(rest, nn + 1));
        } else {
            let mut s = rest;
            s.extend(std::iter::repeat_n(dk - 1, dk * nn));
            flat.push(s);
        }
    }
    let after = flat.len();
    flat.extend(src.summands[hit + 1..].iter().cloned());
    let shift = after as isize - (hit as isize + 1);

    let iso = CanonicalIso::new(&flat)?;
    let alpha = order_type(a)?;
    if !partial_derivative(&alpha, n)?.contains(&iso.alpha) {
        return Err(Error::ShapeMismatch(format!("{} is not in the derivative set of {alpha}", iso.alpha)));
    }
    let source = a.residual(x)?;
    let target = iso.target.clone();
    let label = format!("residual({a} / {x}, n={n})");
    let bad = {
        let t = source.clone();
        move |e: &Element| Error::DomainMismatch { term: t.to_string(), element: e.to_string() }
    };
    let map = move |e: &Element| -> Result<Element> {
        let (i, ys) = src.encode(e)?;
        if i < hit {
            return iso.apply(i, &ys);
        }
        if i > hit {
            return iso.apply((i as isize + shift) as usize, &ys);
        }
        let k = (0..dims.len()).find(|&k| !NwqoTerm::maj_nat(dims[k]).le(&xs[k], &ys[k])).ok_or_else(|| bad(e))?;
        let others: Vec<Element> = ys.iter().enumerate().filter(|(j, _)| *j != k).map(|(_, y)| y.clone()).collect();
        let (base, piece) = &pieces[k];
        match piece {
            Piece::Unary => {
                let items = ys[k].set_items().ok_or_else(|| bad(e))?;
                let off = match items.last() {
                    None => 0,
                    Some(Element::Nat(m)) => *m as usize + 1,
                    Some(_) => return Err(bad(e)),
                };
                if off > nn {
                    return Err(bad(e));
                }
                iso.apply(base + off, &others)
            }
            Piece::Slices(dk) => {
                let pts = vector_set_of(&ys[k], *dk)?;
                let mut fs = others;
                for i in 0..*dk {
                    for j in 0..n {
                        let slice = pts.iter().filter(|p| p[i] == j).map(|p| {
                            let mut q = p.clone();
                            q.remove(i);
                            q
                        });
                        fs.push(Element::vector_set(slice));
                    }
                }
                iso.apply(*base, &fs)
            }
        }
    };
    Ok(Reflection::new(source, target, ControlFunction::Identity, label, map))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn o(s: &str) -> Ordinal {
        s.parse().unwrap()
    }

    fn t(s: &str) -> NwqoTerm {
        s.parse().unwrap()
    }

    #[test]
    fn ord_to_maj_examples() {
        assert_eq!(ord_to_maj(&o("0"), 2).unwrap(), Element::vector_set([]));
        assert_eq!(ord_to_maj(&o("w^2 + w"), 2).unwrap(), Element::vector_set([vec![1, 2], vec![2, 1]]));
        assert_eq!(ord_to_maj(&o("w^(w*2+1)"), 3).unwrap(), Element::vector_set([vec![1, 1, 2]]));
        assert!(ord_to_maj(&o("w^w"), 2).is_err());
        assert!(ord_to_maj(&o("1"), 1).is_err());
    }

    #[test]
    fn maj_to_min_examples() {
        assert_eq!(maj_to_min(&Element::vector_set([]), 2).unwrap(), Element::vector_set([vec![0, 0]]));
        assert_eq!(maj_to_min(&Element::vector_set([vec![2]]), 1).unwrap(), Element::vector_set([vec![3]]));
        assert_eq!(
            maj_to_min(&Element::vector_set([vec![1, 1]]), 2).unwrap(),
            Element::vector_set([vec![2, 0], vec![0, 2]])
        );
    }

    #[test]
    fn subsequence_layout() {
        assert_eq!(index_subsequences(3), vec![vec![1], vec![2], vec![3], vec![1, 2], vec![1, 3], vec![2, 3], vec![1, 2, 3]]);
        assert_eq!(prod_maj_target(2), t("PMaj(N) * PMaj(N) * PMaj(N^2)"));
    }

    #[test]
    fn s_set_examples() {
        let x = Element::vector_set([vec![1, 1]]);
        let img = min_to_prod_maj(&x, 2).unwrap();
        let e0 = Element::vector_set([vec![0]]);
        assert_eq!(img, Element::pair(e0.clone(), Element::pair(e0, Element::vector_set([]))));
        let z = min_to_prod_maj(&Element::vector_set([vec![0, 0, 0]]), 3).unwrap();
        assert_eq!(prod_maj_target(3).norm(&z), 0);
        assert!(min_to_prod_maj(&Element::vector_set([]), 2).is_err());
        // X = {(2,0)}: comp = {x ≤ 1}, so X_1 = {0, 1}
        let sets = s_sets(&[vec![2, 0]], 2, 2).unwrap();
        assert_eq!(sets[0].1, vec![vec![0], vec![1]]);
        assert!(sets[1].1.is_empty() && sets[2].1.is_empty());
    }

    #[test]
    fn residual_examples() {
        let r = residual_reflection(&t("G(3)"), &Element::Gamma(0), 2).unwrap();
        assert_eq!(r.target, t("G(2)"));
        let r = residual_reflection(&t("PMaj(N)"), &Element::vector_set([vec![1]]), 1).unwrap();
        assert_eq!(r.target, t("G(2)"));
        assert_eq!(r.apply(&Element::vector_set([])).unwrap(), Element::Gamma(0));
        assert_eq!(r.apply(&Element::vector_set([vec![0]])).unwrap(), Element::Gamma(1));
        let r = residual_reflection(&t("PMaj(N^2)"), &Element::vector_set([vec![1, 1]]), 1).unwrap();
        assert_eq!(r.target, t("PMaj(N) * PMaj(N)"));
        assert!(residual_reflection(&t("PMaj(N)"), &Element::vector_set([vec![3]]), 1).is_err());
    }
}
