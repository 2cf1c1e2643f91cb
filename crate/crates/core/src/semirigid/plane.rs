//! Finite plane sets with the kernels of `x`, `y` and `x + y`.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::EquivSystem;
use crate::equiv::Partition;
use crate::error::{Error, Result};

pub type PlanePoint = (BigRational, BigRational);

/// Points in a fixed order; the carrier of [`plane_system`] is their index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlaneSet {
    points: Vec<PlanePoint>,
}

/// `(u0, u1, u2)` as point indices with `u0, u1` on a horizontal, `u1, u2` on
/// an antidiagonal and `u2, u0` on a vertical: `u1 = u0 + (t, 0)`,
/// `u2 = u0 + (0, t)` for some `t ≠ 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Triangle(pub usize, pub usize, pub usize);

impl Triangle {
    pub fn contains(&self, x: usize) -> bool {
        self.0 == x || self.1 == x || self.2 == x
    }

    fn points(&self) -> [usize; 3] {
        [self.0, self.1, self.2]
    }

}

fn rat(v: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

fn parse_coord(v: &serde_json::Value) -> Result<BigRational> {
    match v {
        serde_json::Value::Number(n) => {
            n.to_string().parse::<BigInt>().map(BigRational::from_integer).map_err(|e| Error::Parse(format!("{n}: {e}")))
        }
        serde_json::Value::String(s) => {
            let s = s.trim();
            match s.split_once('/') {
                Some((a, b)) => {
                    let a: BigInt = a.trim().parse().map_err(|_| Error::Parse(format!("bad rational {s}")))?;
                    let b: BigInt = b.trim().parse().map_err(|_| Error::Parse(format!("bad rational {s}")))?;
                    if b.is_zero() {
                        return Err(Error::Parse(format!("zero denominator in {s}")));
                    }
                    Ok(BigRational::new(a, b))
                }
                None => s.parse().map(BigRational::from_integer).map_err(|_| Error::Parse(format!("bad integer {s}"))),
            }
        }
        other => Err(Error::Parse(format!("not a coordinate: {other}"))),
    }
}

impl PlaneSet {
    pub fn new(points: Vec<PlanePoint>) -> Result<PlaneSet> {
        let mut seen = BTreeSet::new();
        for p in &points {
            if !seen.insert(p.clone()) {
                return Err(Error::Malformed(format!("duplicate point ({}, {})", p.0, p.1)));
            }
        }
        Ok(PlaneSet { points })
    }

    pub fn from_integers(points: &[(i64, i64)]) -> Result<PlaneSet> {
        PlaneSet::new(points.iter().map(|&(x, y)| (rat(x), rat(y))).collect())
    }

    /// JSON array of `[x, y]` pairs; coordinates are integers or strings such
    /// as `"1/2"`.
    pub fn from_json(s: &str) -> Result<PlaneSet> {
        let raw: Vec<(serde_json::Value, serde_json::Value)> =
            serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        let points = raw.iter().map(|(x, y)| Ok((parse_coord(x)?, parse_coord(y)?))).collect::<Result<_>>()?;
        PlaneSet::new(points)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::Value::Array(
            self.points.iter().map(|(x, y)| serde_json::json!([x.to_string(), y.to_string()])).collect(),
        )
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[PlanePoint] {
        &self.points
    }

    pub fn index(&self, p: &PlanePoint) -> Option<usize> {
        self.points.iter().position(|q| q == p)
    }
}

/// Partitions by equal `x`, equal `y` and equal `x + y`, in that order.
pub fn plane_system(c: &PlaneSet) -> EquivSystem {
    let kernel = |key: &dyn Fn(&PlanePoint) -> BigRational| {
        let mut ids: BTreeMap<BigRational, usize> = BTreeMap::new();
        let labels: Vec<usize> = c
            .points
            .iter()
            .map(|p| {
                let next = ids.len();
                *ids.entry(key(p)).or_insert(next)
            })
            .collect();
        Partition::from_labels(&labels)
    };
    let x = kernel(&|p| p.0.clone());
    let y = kernel(&|p| p.1.clone());
    let s = kernel(&|p| &p.0 + &p.1);
    EquivSystem::new(c.len(), vec![x, y, s]).expect("same carrier")
}

/// All nontrivial triangles of `c`, sorted.
pub fn triangles(c: &PlaneSet) -> Vec<Triangle> {
    let mut out = Vec::new();
    for (i, a) in c.points.iter().enumerate() {
        for (j, b) in c.points.iter().enumerate() {
            if i == j || a.1 != b.1 {
                continue;
            }
            let t = &b.0 - &a.0;
            let apex = (a.0.clone(), &a.1 + &t);
            if let Some(k) = c.index(&apex) {
                out.push(Triangle(i, j, k));
            }
        }
    }
    out.sort();
    out
}

/// A seed of at most two points whose closure is `c`, where the closure
/// repeatedly adds the third vertex of any triangle with two vertices in it.
pub fn is_monogenic(c: &PlaneSet) -> Option<Vec<usize>> {
    let n = c.len();
    if n <= 2 {
        return Some((0..n).collect());
    }
    let tri = triangles(c);
    (0..n).flat_map(|a| (a + 1..n).map(move |b| vec![a, b])).find(|seed| closure(n, &tri, seed).iter().all(|&x| x))
}

fn closure(n: usize, tri: &[Triangle], seed: &[usize]) -> Vec<bool> {
    let mut inside = vec![false; n];
    for &p in seed {
        inside[p] = true;
    }
    loop {
        let mut grew = false;
        for t in tri {
            let pts = t.points();
            if pts.iter().filter(|&&p| inside[p]).count() == 2 {
                pts.iter().for_each(|&p| inside[p] = true);
                grew = true;
            }
        }
        if !grew {
            return inside;
        }
    }
}

/// A point `z` with `c = 2z − c`. Such a reflection swaps the lexicographic
/// minimum and maximum, so their midpoint is the only candidate.
pub fn has_center_of_symmetry(c: &PlaneSet) -> Option<PlanePoint> {
    let lo = c.points.iter().min()?;
    let hi = c.points.iter().max()?;
    let two = rat(2);
    let z = ((&lo.0 + &hi.0) / &two, (&lo.1 + &hi.1) / &two);
    let set: BTreeSet<&PlanePoint> = c.points.iter().collect();
    let symmetric = c.points.iter().all(|p| {
        let q = (&z.0 * &two - &p.0, &z.1 * &two - &p.1);
        set.contains(&q)
    });
    symmetric.then_some(z)
}

/// `T_n = {(i, j) ∈ ℕ² : i + j ≤ n}`.
pub fn t_n(n: i64) -> PlaneSet {
    let pts: Vec<(i64, i64)> = (0..=n).flat_map(|i| (0..=n - i).map(move |j| (i, j))).collect();
    PlaneSet::from_integers(&pts).expect("distinct")
}

/// `T_{n,2} = {(i, j) ∈ T_n : i + j ∈ {n − 1, n}}`.
pub fn t_n2(n: i64) -> PlaneSet {
    let pts: Vec<(i64, i64)> = (0..=n)
        .flat_map(|i| (0..=n - i).map(move |j| (i, j)))
        .filter(|&(i, j)| i + j >= n - 1)
        .collect();
    PlaneSet::from_integers(&pts).expect("distinct")
}

/// `T_{n,2} ∪ {(0, 0)}`.
pub fn t_n2_prime(n: i64) -> PlaneSet {
    let mut pts: Vec<(i64, i64)> = vec![(0, 0)];
    pts.extend(
        (0..=n).flat_map(|i| (0..=n - i).map(move |j| (i, j))).filter(|&(i, j)| i + j >= n - 1 && (i, j) != (0, 0)),
    );
    PlaneSet::from_integers(&pts).expect("distinct")
}

/// `{(x, y) ∈ ℤ² : x + y ∈ {1, 2}, lo ≤ x ≤ hi} ∪ {(0, 0)}`.
pub fn band_truncation(lo: i64, hi: i64) -> PlaneSet {
    let mut pts = vec![(0, 0)];
    for x in lo..=hi {
        pts.push((x, 1 - x));
        pts.push((x, 2 - x));
    }
    PlaneSet::from_integers(&pts).expect("distinct")
}
