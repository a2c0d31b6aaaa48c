//! Bitset comparators for products of majoring and minoring powersets of
//! `ℕ^d`. Each element gets two bitsets over a finite box `[0, B]^d` per
//! factor, and `x ≤ y` becomes `lhs(x) ⊆ rhs(y)`:
//! majoring uses `pts(X) ⊆ ↓Y`, minoring uses `U ∖ ↑X ⊆ U ∖ pts(Y)`.

use crate::nwqo::{Element, NwqoTerm};

const MAX_UNIVERSE: usize = 4096;

#[derive(Clone, Copy)]
enum Factor {
    Maj(usize),
    Min(usize),
}

fn factors(t: &NwqoTerm, out: &mut Vec<Factor>) -> bool {
    match t {
        NwqoTerm::MajPow(inner) => match inner.nat_pow_dim() {
            Some(d) => {
                out.push(Factor::Maj(d));
                true
            }
            None => false,
        },
        NwqoTerm::MinPow(d) => {
            out.push(Factor::Min(*d));
            true
        }
        NwqoTerm::Product(a, b) => factors(a, out) && factors(b, out),
        NwqoTerm::Residual(b, _) => factors(b, out),
        _ => false,
    }
}

fn split<'e>(t: &NwqoTerm, e: &'e Element, out: &mut Vec<&'e Element>) -> bool {
    match (t, e) {
        (NwqoTerm::Product(a, b), Element::Pair(x, y)) => split(a, x, out) && split(b, y, out),
        (NwqoTerm::Residual(b, _), e) => split(b, e, out),
        (NwqoTerm::MajPow(_) | NwqoTerm::MinPow(_), Element::Set(_)) => {
            out.push(e);
            true
        }
        _ => false,
    }
}

// the box `[0, side₁) × … × [0, side_d)`
struct Universe {
    sides: Vec<usize>,
    size: usize,
}

impl Universe {
    fn index(&self, p: &[u64]) -> usize {
        p.iter().zip(&self.sides).fold(0usize, |acc, (&c, &s)| acc * s + c as usize)
    }

    fn point(&self, mut i: usize) -> Vec<u64> {
        let mut p = vec![0u64; self.sides.len()];
        for j in (0..self.sides.len()).rev() {
            p[j] = (i % self.sides[j]) as u64;
            i /= self.sides[j];
        }
        p
    }
}

/// Precomputed `lhs`/`rhs` rows, one per element, laid out contiguously.
pub(crate) struct BitOrder {
    words: usize,
    lhs: Vec<u64>,
    rhs: Vec<u64>,
}

impl BitOrder {
    /// `None` when the term is not a product of powersets of `ℕ^d` or the
    /// boxes would be too large.
    pub(crate) fn build(t: &NwqoTerm, elems: &[Element]) -> Option<BitOrder> {
        let mut fs = Vec::new();
        if !factors(t, &mut fs) {
            return None;
        }
        let mut pts: Vec<Vec<Vec<Vec<u64>>>> = Vec::with_capacity(elems.len());
        for e in elems {
            let mut parts = Vec::new();
            if !split(t, e, &mut parts) || parts.len() != fs.len() {
                return None;
            }
            let mut row = Vec::new();
            for p in parts {
                row.push(p.as_vector_set()?);
            }
            pts.push(row);
        }
        let mut unis = Vec::new();
        for (k, f) in fs.iter().enumerate() {
            let d = match f {
                Factor::Maj(d) | Factor::Min(d) => *d,
            };
            let mut sides = vec![1usize; d];
            for p in pts.iter().flat_map(|r| r[k].iter()) {
                if p.len() != d {
                    return None;
                }
                for (s, &c) in sides.iter_mut().zip(p) {
                    *s = (*s).max(usize::try_from(c).ok()?.checked_add(1)?);
                }
            }
            let size = sides.iter().try_fold(1usize, |acc, &s| acc.checked_mul(s)).filter(|s| *s <= MAX_UNIVERSE)?;
            unis.push(Universe { sides, size });
        }
        let offsets: Vec<usize> = unis
            .iter()
            .scan(0, |acc, u| {
                let o = *acc;
                *acc += u.size.div_ceil(64);
                Some(o)
            })
            .collect();
        let words = unis.iter().map(|u| u.size.div_ceil(64)).sum::<usize>().max(1);
        let mut lhs = vec![0u64; words * elems.len()];
        let mut rhs = vec![0u64; words * elems.len()];
        for (r, row) in pts.iter().enumerate() {
            for (k, f) in fs.iter().enumerate() {
                let u = &unis[k];
                let base = r * words + offsets[k];
                let set = |v: &mut [u64], i: usize| v[base + i / 64] |= 1 << (i % 64);
                match f {
                    Factor::Maj(_) => {
                        for p in &row[k] {
                            set(&mut lhs, u.index(p));
                        }
                        for i in 0..u.size {
                            let q = u.point(i);
                            if row[k].iter().any(|p| q.iter().zip(p).all(|(a, b)| a <= b)) {
                                set(&mut rhs, i);
                            }
                        }
                    }
                    Factor::Min(_) => {
                        for i in 0..u.size {
                            let q = u.point(i);
                            if !row[k].iter().any(|p| p.iter().zip(&q).all(|(a, b)| a <= b)) {
                                set(&mut lhs, i);
                            }
                            if !row[k].contains(&q) {
                                set(&mut rhs, i);
                            }
                        }
                    }
                }
            }
        }
        Some(BitOrder { words, lhs, rhs })
    }

    #[inline]
    pub(crate) fn le(&self, i: usize, j: usize) -> bool {
        let a = &self.lhs[i * self.words..(i + 1) * self.words];
        let b = &self.rhs[j * self.words..(j + 1) * self.words];
        a.iter().zip(b).all(|(x, y)| x & !y == 0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn agrees_with_term_order() {
        for s in ["PMaj(N^2)", "PMin(2)", "PMaj(N) * PMin(1)", "PMaj(N) * PMaj(N) * PMaj(N^2)"] {
            let t: NwqoTerm = s.parse().unwrap();
            let elems = t.enumerate_up_to(2).unwrap();
            let b = BitOrder::build(&t, &elems).unwrap();
            for i in 0..elems.len() {
                for j in 0..elems.len() {
                    assert_eq!(b.le(i, j), t.le(&elems[i], &elems[j]), "{s}: {} vs {}", elems[i], elems[j]);
                }
            }
        }
        assert!(BitOrder::build(&"N".parse().unwrap(), &[]).is_none());
    }
}
