//! Downward-closed subsets of `ℕ^d` as finite unions of boxes.

use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Bound {
    Finite(u64),
    Unbounded,
}

impl Bound {
    pub fn admits(self, v: u64) -> bool {
        match self {
            Bound::Finite(b) => v <= b,
            Bound::Unbounded => true,
        }
    }

    fn fits(self, other: Bound) -> bool {
        match (self, other) {
            (_, Bound::Unbounded) => true,
            (Bound::Unbounded, Bound::Finite(_)) => false,
            (Bound::Finite(a), Bound::Finite(b)) => a <= b,
        }
    }

    fn meet(self, other: Bound) -> Bound {
        if self.fits(other) {
            self
        } else {
            other
        }
    }
}

impl Serialize for Bound {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Bound::Finite(b) => s.serialize_u64(*b),
            Bound::Unbounded => s.serialize_str("inf"),
        }
    }
}

impl<'de> Deserialize<'de> for Bound {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            N(u64),
            S(String),
        }
        match Raw::deserialize(d)? {
            Raw::N(n) => Ok(Bound::Finite(n)),
            Raw::S(s) if s == "inf" => Ok(Bound::Unbounded),
            Raw::S(s) => Err(serde::de::Error::custom(format!("bad bound '{s}'"))),
        }
    }
}

/// `{v : vᵢ ≤ bᵢ for every i}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct BoxIdeal {
    pub bounds: Vec<Bound>,
}

impl BoxIdeal {
    pub fn full(d: usize) -> Self {
        BoxIdeal { bounds: vec![Bound::Unbounded; d] }
    }

    pub fn contains(&self, v: &[u64]) -> bool {
        self.bounds.iter().zip(v).all(|(b, x)| b.admits(*x))
    }

    fn within(&self, other: &BoxIdeal) -> bool {
        self.bounds.iter().zip(&other.bounds).all(|(a, b)| a.fits(*b))
    }

    fn is_unbounded(&self) -> bool {
        self.bounds.iter().all(|b| *b == Bound::Unbounded)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DownwardClosedSet {
    pub dim: usize,
    pub boxes: Vec<BoxIdeal>,
}

impl DownwardClosedSet {
    pub fn full(d: usize) -> Self {
        DownwardClosedSet { dim: d, boxes: vec![BoxIdeal::full(d)] }
    }

    pub fn empty(d: usize) -> Self {
        DownwardClosedSet { dim: d, boxes: Vec::new() }
    }

    /// Drops boxes contained in another box and sorts the rest.
    pub fn canonicalize(mut self) -> Self {
        self.boxes.sort();
        self.boxes.dedup();
        let b = &self.boxes;
        let keep: Vec<BoxIdeal> = (0..b.len())
            .filter(|&i| !(0..b.len()).any(|j| j != i && b[i].within(&b[j])))
            .map(|i| b[i].clone())
            .collect();
        self.boxes = keep;
        self
    }

    pub fn member(&self, v: &[u64]) -> Result<bool> {
        if v.len() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, got: v.len() });
        }
        Ok(self.boxes.iter().any(|b| b.contains(v)))
    }

    pub fn is_full(&self) -> bool {
        self.boxes.iter().any(BoxIdeal::is_unbounded)
    }

    /// Fixes coordinates (1-based indices) and keeps the remaining ones.
    pub fn project_fix(&self, fixed: &[(usize, u64)]) -> Result<DownwardClosedSet> {
        let mut seen = vec![false; self.dim];
        for &(i, _) in fixed {
            if i == 0 || i > self.dim {
                return Err(Error::Index(format!("coordinate {i} outside 1..={}", self.dim)));
            }
            if seen[i - 1] {
                return Err(Error::Index(format!("coordinate {i} fixed twice")));
            }
            seen[i - 1] = true;
        }
        let boxes = self
            .boxes
            .iter()
            .filter(|b| fixed.iter().all(|&(i, v)| b.bounds[i - 1].admits(v)))
            .map(|b| BoxIdeal {
                bounds: b.bounds.iter().enumerate().filter(|(j, _)| !seen[*j]).map(|(_, x)| *x).collect(),
            })
            .collect();
        Ok(DownwardClosedSet { dim: self.dim - fixed.len(), boxes }.canonicalize())
    }

    fn intersect_union(&self, parts: &[BoxIdeal]) -> DownwardClosedSet {
        let mut boxes = Vec::new();
        for b in &self.boxes {
            for p in parts {
                boxes.push(BoxIdeal { bounds: b.bounds.iter().zip(&p.bounds).map(|(x, y)| x.meet(*y)).collect() });
            }
        }
        DownwardClosedSet { dim: self.dim, boxes }.canonicalize()
    }
}

impl fmt::Display for DownwardClosedSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.boxes.is_empty() {
            return write!(f, "∅");
        }
        let parts: Vec<String> = self
            .boxes
            .iter()
            .map(|b| {
                let c: Vec<String> = b
                    .bounds
                    .iter()
                    .map(|x| match x {
                        Bound::Finite(n) => format!("≤{n}"),
                        Bound::Unbounded => "*".to_string(),
                    })
                    .collect();
                format!("[{}]", c.join(","))
            })
            .collect();
        write!(f, "{}", parts.join(" ∪ "))
    }
}

fn check_dims(d: usize, xs: &[Vec<u64>]) -> Result<()> {
    match xs.iter().find(|x| x.len() != d) {
        Some(x) => Err(Error::DimensionMismatch { expected: d, got: x.len() }),
        None => Ok(()),
    }
}

fn vle(a: &[u64], b: &[u64]) -> bool {
    a.iter().zip(b).all(|(x, y)| x <= y)
}

/// `ℕ^d ∖ ↑X`.
pub fn comp_up(d: usize, xs: &[Vec<u64>]) -> Result<DownwardClosedSet> {
    check_dims(d, xs)?;
    let mut acc = DownwardClosedSet::full(d);
    for x in xs {
        let parts: Vec<BoxIdeal> = (0..d)
            .filter(|&i| x[i] > 0)
            .map(|i| {
                let mut b = BoxIdeal::full(d);
                b.bounds[i] = Bound::Finite(x[i] - 1);
                b
            })
            .collect();
        acc = acc.intersect_union(&parts);
        if acc.boxes.is_empty() {
            break;
        }
    }
    Ok(acc)
}

/// Points of `X` with no other point of `X` strictly below them.
pub fn min_elements(xs: &[Vec<u64>]) -> Vec<Vec<u64>> {
    let mut v = xs.to_vec();
    v.sort();
    v.dedup();
    (0..v.len())
        .filter(|&i| !(0..v.len()).any(|j| j != i && vle(&v[j], &v[i])))
        .map(|i| v[i].clone())
        .collect()
}

/// `min(ℕ^d ∖ ↓X)`. A minimal point has every nonzero coordinate equal to
/// `xⱼ + 1` for some `x ∈ X`, so the search runs over that grid.
pub fn min_complement_down(d: usize, xs: &[Vec<u64>]) -> Result<Vec<Vec<u64>>> {
    check_dims(d, xs)?;
    let axes: Vec<Vec<u64>> = (0..d)
        .map(|j| {
            let mut a: Vec<u64> = std::iter::once(0).chain(xs.iter().map(|x| x[j] + 1)).collect();
            a.sort_unstable();
            a.dedup();
            a
        })
        .collect();
    let mut cands = Vec::new();
    let mut y = vec![0u64; d];
    grid(&axes, 0, &mut y, &mut |y| {
        if !xs.iter().any(|z| vle(y, z)) {
            cands.push(y.to_vec());
        }
    });
    Ok(min_elements(&cands))
}

fn grid(axes: &[Vec<u64>], j: usize, y: &mut Vec<u64>, f: &mut dyn FnMut(&[u64])) {
    if j == axes.len() {
        f(y);
        return;
    }
    for &v in &axes[j] {
        y[j] = v;
        grid(axes, j + 1, y, f);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use Bound::*;

    #[test]
    fn comp_up_examples() {
        assert!(comp_up(2, &[]).unwrap().is_full());
        let c = comp_up(2, &[vec![1, 1]]).unwrap();
        assert_eq!(c.boxes, vec![BoxIdeal { bounds: vec![Finite(0), Unbounded] }, BoxIdeal { bounds: vec![Unbounded, Finite(0)] }]);
        assert!(c.member(&[0, 7]).unwrap());
        assert!(!c.member(&[1, 1]).unwrap());
        assert!(c.member(&[1]).is_err());
        assert!(comp_up(3, &[vec![0, 0, 0]]).unwrap().boxes.is_empty());
        assert!(!c.is_full());
    }

    #[test]
    fn projections() {
        let c = comp_up(2, &[vec![1, 1]]).unwrap();
        assert!(c.project_fix(&[(1, 0)]).unwrap().is_full());
        let row = c.project_fix(&[(1, 1)]).unwrap();
        assert_eq!(row.boxes, vec![BoxIdeal { bounds: vec![Finite(0)] }]);
        assert!(DownwardClosedSet::full(3).project_fix(&[(2, 9)]).unwrap().is_full());
        assert!(c.project_fix(&[(3, 0)]).is_err());
        assert!(c.project_fix(&[(1, 0), (1, 1)]).is_err());
        let point = c.project_fix(&[(1, 0), (2, 5)]).unwrap();
        assert_eq!(point.dim, 0);
        assert!(point.is_full());
    }

    #[test]
    fn minimal_points() {
        assert_eq!(min_complement_down(2, &[]).unwrap(), vec![vec![0, 0]]);
        assert_eq!(min_complement_down(1, &[vec![2]]).unwrap(), vec![vec![3]]);
        assert_eq!(min_complement_down(2, &[vec![1, 1]]).unwrap(), vec![vec![0, 2], vec![2, 0]]);
        assert!(min_elements(&[]).is_empty());
        assert_eq!(min_elements(&[vec![0, 1], vec![1, 0], vec![1, 1]]), vec![vec![0, 1], vec![1, 0]]);
    }

    #[test]
    fn json_bounds() {
        let c = comp_up(2, &[vec![1, 1]]).unwrap();
        let s = serde_json::to_string(&c).unwrap();
        assert_eq!(s, r#"{"dim":2,"boxes":[[0,"inf"],["inf",0]]}"#);
        let back: DownwardClosedSet = serde_json::from_str(&s).unwrap();
        assert_eq!(back, c);
    }
}
