//! Maps on ℤⁿ and on squares of finite abelian groups that preserve the
//! coordinate congruences.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A map on a box `lo ≤ x ≤ hi` of ℤⁿ.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GridMap {
    lo: Vec<i64>,
    hi: Vec<i64>,
    values: BTreeMap<Vec<i64>, Vec<BigInt>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GridDoc {
    pub lo: Vec<i64>,
    pub hi: Vec<i64>,
    /// `[point, image]` pairs; images as decimal strings or integers.
    pub values: Vec<(Vec<i64>, Vec<serde_json::Value>)>,
}

/// Which subgroup congruence a pair violates: `ℤ_(k)` is the `k`-th axis,
/// `ℤ_(k,l)` the antidiagonal `x_k = −x_l` of the `k, l` plane.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GridWitness {
    Axis { k: usize, p: Vec<i64>, q: Vec<i64> },
    Antidiagonal { k: usize, l: usize, p: Vec<i64>, q: Vec<i64> },
    /// Every congruence holds on the window but the fitted form misses `p`.
    Formula { p: Vec<i64> },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum AffineOutcome {
    Affine { a: Vec<String>, m: String },
    NotAffine { witness: GridWitness },
}

fn box_points(lo: &[i64], hi: &[i64]) -> Vec<Vec<i64>> {
    let mut out = vec![Vec::new()];
    for (&a, &b) in lo.iter().zip(hi) {
        out = out
            .into_iter()
            .flat_map(|p| {
                (a..=b).map(move |v| {
                    let mut q = p.clone();
                    q.push(v);
                    q
                })
            })
            .collect();
    }
    out
}

impl GridMap {
    pub fn new(lo: Vec<i64>, hi: Vec<i64>, values: BTreeMap<Vec<i64>, Vec<BigInt>>) -> Result<GridMap> {
        let n = lo.len();
        if n < 2 || hi.len() != n {
            return Err(Error::Malformed(format!("box bounds of dimensions {} and {}; need equal and ≥ 2", n, hi.len())));
        }
        if lo.iter().zip(&hi).any(|(a, b)| a > b) {
            return Err(Error::Malformed("empty box".into()));
        }
        for p in box_points(&lo, &hi) {
            match values.get(&p) {
                Some(v) if v.len() == n => {}
                Some(v) => return Err(Error::Malformed(format!("image of {p:?} has dimension {}", v.len()))),
                None => return Err(Error::Malformed(format!("map is undefined at {p:?}"))),
            }
        }
        if values.len() != box_points(&lo, &hi).len() {
            return Err(Error::Malformed("points outside the box".into()));
        }
        Ok(GridMap { lo, hi, values })
    }

    pub fn from_fn(lo: Vec<i64>, hi: Vec<i64>, f: impl Fn(&[i64]) -> Vec<BigInt>) -> Result<GridMap> {
        let values = box_points(&lo, &hi).into_iter().map(|p| {
            let v = f(&p);
            (p, v)
        });
        GridMap::new(lo, hi, values.collect())
    }

    pub fn from_doc(doc: &GridDoc) -> Result<GridMap> {
        let mut values = BTreeMap::new();
        for (p, image) in &doc.values {
            let v = image
                .iter()
                .map(|c| match c {
                    serde_json::Value::Number(n) => n.to_string().parse::<BigInt>().map_err(|e| Error::Parse(e.to_string())),
                    serde_json::Value::String(s) => s.parse::<BigInt>().map_err(|e| Error::Parse(e.to_string())),
                    other => Err(Error::Parse(format!("not an integer: {other}"))),
                })
                .collect::<Result<Vec<_>>>()?;
            if values.insert(p.clone(), v).is_some() {
                return Err(Error::Malformed(format!("{p:?} listed twice")));
            }
        }
        GridMap::new(doc.lo.clone(), doc.hi.clone(), values)
    }

    pub fn to_doc(&self) -> GridDoc {
        GridDoc {
            lo: self.lo.clone(),
            hi: self.hi.clone(),
            values: self
                .values
                .iter()
                .map(|(p, v)| (p.clone(), v.iter().map(|c| serde_json::Value::String(c.to_string())).collect()))
                .collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.lo.len()
    }

    pub fn get(&self, p: &[i64]) -> Option<&Vec<BigInt>> {
        self.values.get(p)
    }

    pub fn points(&self) -> impl Iterator<Item = &Vec<i64>> {
        self.values.keys()
    }
}

fn in_axis(d: &[BigInt], k: usize) -> bool {
    d.iter().enumerate().all(|(i, c)| i == k || c.is_zero())
}

fn in_antidiagonal(d: &[BigInt], k: usize, l: usize) -> bool {
    d.iter().enumerate().all(|(i, c)| i == k || i == l || c.is_zero()) && (&d[k] + &d[l]).is_zero()
}

fn sub(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

/// Checks the axis and antidiagonal congruences on every pair of window
/// points, then fits `g(x) = a + m·x` from `g(0)` and `g(e_0)` and verifies
/// it on the whole window.
pub fn zn_affine_check(g: &GridMap) -> Result<AffineOutcome> {
    let n = g.dim();
    if g.lo.iter().any(|&a| a > -1) || g.hi.iter().any(|&b| b < 1) {
        return Err(Error::WindowTooSmall("the box must contain [-1, 1] in every coordinate".into()));
    }
    let points: Vec<(&Vec<i64>, Vec<BigInt>)> =
        g.values.keys().map(|p| (p, p.iter().map(|&c| BigInt::from(c)).collect())).collect();
    let diffs: Vec<(usize, usize, Vec<BigInt>, Vec<BigInt>)> = (0..points.len())
        .flat_map(|i| (i + 1..points.len()).map(move |j| (i, j)))
        .map(|(i, j)| {
            let (p, q) = (points[i].0, points[j].0);
            (i, j, sub(&points[i].1, &points[j].1), sub(&g.values[p], &g.values[q]))
        })
        .collect();
    let pair = |i: usize, j: usize| (points[i].0.clone(), points[j].0.clone());
    for k in 0..n {
        if let Some((i, j, _, _)) = diffs.iter().find(|(_, _, d, e)| in_axis(d, k) && !in_axis(e, k)) {
            let (p, q) = pair(*i, *j);
            return Ok(AffineOutcome::NotAffine { witness: GridWitness::Axis { k, p, q } });
        }
    }
    for k in 0..n {
        for l in k + 1..n {
            let bad = diffs.iter().find(|(_, _, d, e)| in_antidiagonal(d, k, l) && !in_antidiagonal(e, k, l));
            if let Some((i, j, _, _)) = bad {
                let (p, q) = pair(*i, *j);
                return Ok(AffineOutcome::NotAffine { witness: GridWitness::Antidiagonal { k, l, p, q } });
            }
        }
    }
    let origin = vec![0; n];
    let a = g.values[&origin].clone();
    let mut e0 = origin.clone();
    e0[0] = 1;
    let m = &g.values[&e0][0] - &a[0];
    for (p, pv) in &points {
        let expected: Vec<BigInt> = a.iter().zip(pv).map(|(ai, xi)| ai + &m * xi).collect();
        if g.values[*p] != expected {
            return Ok(AffineOutcome::NotAffine { witness: GridWitness::Formula { p: (*p).clone() } });
        }
    }
    Ok(AffineOutcome::Affine { a: a.iter().map(ToString::to_string).collect(), m: m.to_string() })
}

/// A finite abelian group given by its addition table.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "GroupDoc", into = "GroupDoc")]
pub struct AbelianGroup {
    add: Vec<Vec<usize>>,
    zero: usize,
    neg: Vec<usize>,
}

#[derive(Serialize, Deserialize)]
struct GroupDoc {
    add: Vec<Vec<usize>>,
}

impl TryFrom<GroupDoc> for AbelianGroup {
    type Error = Error;

    fn try_from(doc: GroupDoc) -> Result<AbelianGroup> {
        AbelianGroup::new(doc.add)
    }
}

impl From<AbelianGroup> for GroupDoc {
    fn from(g: AbelianGroup) -> GroupDoc {
        GroupDoc { add: g.add }
    }
}

impl AbelianGroup {
    pub fn new(add: Vec<Vec<usize>>) -> Result<AbelianGroup> {
        let n = add.len();
        if n == 0 {
            return Err(Error::NotAGroup("empty carrier".into()));
        }
        if add.iter().any(|r| r.len() != n || r.iter().any(|&c| c >= n)) {
            return Err(Error::NotAGroup("table is not a square over the carrier".into()));
        }
        for a in 0..n {
            for b in 0..n {
                if add[a][b] != add[b][a] {
                    return Err(Error::NotAGroup(format!("{a} + {b} ≠ {b} + {a}")));
                }
                for c in 0..n {
                    if add[add[a][b]][c] != add[a][add[b][c]] {
                        return Err(Error::NotAGroup(format!("({a} + {b}) + {c} ≠ {a} + ({b} + {c})")));
                    }
                }
            }
        }
        let zero = (0..n).find(|&e| (0..n).all(|a| add[e][a] == a)).ok_or_else(|| Error::NotAGroup("no identity".into()))?;
        let neg = (0..n)
            .map(|a| (0..n).find(|&b| add[a][b] == zero).ok_or_else(|| Error::NotAGroup(format!("{a} has no inverse"))))
            .collect::<Result<_>>()?;
        Ok(AbelianGroup { add, zero, neg })
    }

    pub fn cyclic(n: usize) -> AbelianGroup {
        AbelianGroup::new((0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect()).expect("ℤ/n")
    }

    /// `ℤ/n_0 × ℤ/n_1 × …` with mixed-radix element numbering.
    pub fn product(orders: &[usize]) -> AbelianGroup {
        let size: usize = orders.iter().product();
        let digits = |mut a: usize| {
            orders
                .iter()
                .map(|&o| {
                    let d = a % o;
                    a /= o;
                    d
                })
                .collect::<Vec<_>>()
        };
        let add = (0..size)
            .map(|a| {
                (0..size)
                    .map(|b| {
                        let (da, db) = (digits(a), digits(b));
                        orders.iter().enumerate().rev().fold(0, |acc, (i, &o)| acc * o + (da[i] + db[i]) % o)
                    })
                    .collect()
            })
            .collect();
        AbelianGroup::new(add).expect("product of cyclic groups")
    }

    pub fn len(&self) -> usize {
        self.add.len()
    }

    pub fn is_empty(&self) -> bool {
        self.add.is_empty()
    }

    pub fn zero(&self) -> usize {
        self.zero
    }

    pub fn add(&self, a: usize, b: usize) -> usize {
        self.add[a][b]
    }

    pub fn sub(&self, a: usize, b: usize) -> usize {
        self.add[a][self.neg[b]]
    }
}

/// The three equivalences on `A × A`: equal sums, equal first, equal second.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SquareRelation {
    Sum,
    First,
    Second,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum SquareOutcome {
    Decomposition { x0: usize, y0: usize, h: Vec<usize> },
    Violates { relation: SquareRelation, p: (usize, usize), q: (usize, usize) },
    NotAdditive { a: usize, b: usize },
    Formula { p: (usize, usize) },
}

/// Decides whether `f` on `A × A` (indexed by `x·|A| + y`) is
/// `(x, y) ↦ (x₀, y₀) + (h(x), h(y))` with `h` additive.
pub fn abelian_square_check(group: &AbelianGroup, f: &[(usize, usize)]) -> Result<SquareOutcome> {
    let n = group.len();
    if f.len() != n * n || f.iter().any(|&(a, b)| a >= n || b >= n) {
        return Err(Error::Malformed(format!("map on A × A needs {} images in the carrier", n * n)));
    }
    let at = |x: usize, y: usize| f[x * n + y];
    let related = |r: SquareRelation, p: (usize, usize), q: (usize, usize)| match r {
        SquareRelation::Sum => group.add(p.0, p.1) == group.add(q.0, q.1),
        SquareRelation::First => p.0 == q.0,
        SquareRelation::Second => p.1 == q.1,
    };
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|x| (0..n).map(move |y| (x, y))).collect();
    for relation in [SquareRelation::Sum, SquareRelation::First, SquareRelation::Second] {
        for &p in &pairs {
            for &q in &pairs {
                if related(relation, p, q) && !related(relation, at(p.0, p.1), at(q.0, q.1)) {
                    return Ok(SquareOutcome::Violates { relation, p, q });
                }
            }
        }
    }
    let (x0, y0) = at(0, 0);
    let h: Vec<usize> = (0..n).map(|x| group.sub(at(x, group.zero()).0, x0)).collect();
    for a in 0..n {
        for b in 0..n {
            if h[group.add(a, b)] != group.add(h[a], h[b]) {
                return Ok(SquareOutcome::NotAdditive { a, b });
            }
        }
    }
    for &(x, y) in &pairs {
        if at(x, y) != (group.add(x0, h[x]), group.add(y0, h[y])) {
            return Ok(SquareOutcome::Formula { p: (x, y) });
        }
    }
    Ok(SquareOutcome::Decomposition { x0, y0, h })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn affine(a: Vec<i64>, m: i64) -> impl Fn(&[i64]) -> Vec<BigInt> {
        move |p| p.iter().zip(&a).map(|(x, ai)| BigInt::from(ai + m * x)).collect()
    }

    #[test]
    fn affine_examples() {
        let g = GridMap::from_fn(vec![-2, -2], vec![2, 2], affine(vec![1, 2], 3)).unwrap();
        assert_eq!(
            zn_affine_check(&g).unwrap(),
            AffineOutcome::Affine { a: vec!["1".into(), "2".into()], m: "3".into() }
        );
        let swap = GridMap::from_fn(vec![-2, -2], vec![2, 2], |p| vec![p[1].into(), p[0].into()]).unwrap();
        match zn_affine_check(&swap).unwrap() {
            AffineOutcome::NotAffine { witness: GridWitness::Axis { k: 0, .. } } => {}
            other => panic!("{other:?}"),
        }
        let c = GridMap::from_fn(vec![-1, -1, -1], vec![1, 1, 1], |_| vec![5.into(), (-4).into(), 0.into()]).unwrap();
        assert_eq!(
            zn_affine_check(&c).unwrap(),
            AffineOutcome::Affine { a: vec!["5".into(), "-4".into(), "0".into()], m: "0".into() }
        );
        let small = GridMap::from_fn(vec![0, 0], vec![2, 2], affine(vec![0, 0], 1)).unwrap();
        assert!(matches!(zn_affine_check(&small), Err(Error::WindowTooSmall(_))));
    }

    #[test]
    fn coordinatewise_scaling_is_rejected() {
        // (x, y) ↦ (2x, 3y) keeps the axes but breaks the antidiagonal
        let g = GridMap::from_fn(vec![-1, -1], vec![1, 1], |p| vec![(2 * p[0]).into(), (3 * p[1]).into()]).unwrap();
        assert!(matches!(
            zn_affine_check(&g).unwrap(),
            AffineOutcome::NotAffine { witness: GridWitness::Antidiagonal { k: 0, l: 1, .. } }
        ));
    }

    #[test]
    fn grid_doc_round_trip() {
        let g = GridMap::from_fn(vec![-1, -1], vec![1, 1], affine(vec![0, 7], -2)).unwrap();
        let json = serde_json::to_string(&g.to_doc()).unwrap();
        let back = GridMap::from_doc(&serde_json::from_str(&json).unwrap()).unwrap();
        assert_eq!(back, g);
    }

    #[test]
    fn square_examples() {
        let z4 = AbelianGroup::cyclic(4);
        let f: Vec<(usize, usize)> =
            (0..4).flat_map(|x| (0..4).map(move |y| ((1 + 3 * x) % 4, (2 + 3 * y) % 4))).collect();
        assert_eq!(
            abelian_square_check(&z4, &f).unwrap(),
            SquareOutcome::Decomposition { x0: 1, y0: 2, h: vec![0, 3, 2, 1] }
        );
        let swap: Vec<(usize, usize)> = (0..4).flat_map(|x| (0..4).map(move |y| (y, x))).collect();
        assert!(matches!(
            abelian_square_check(&z4, &swap).unwrap(),
            SquareOutcome::Violates { relation: SquareRelation::First, .. }
        ));
        let constant = vec![(3, 1); 16];
        assert_eq!(
            abelian_square_check(&z4, &constant).unwrap(),
            SquareOutcome::Decomposition { x0: 3, y0: 1, h: vec![0; 4] }
        );
    }

    #[test]
    fn square_brute_force_on_klein_group() {
        // f(x, y) = (1 + h(x), 2 + h(y)) decomposes exactly when h − h(0) is
        // additive
        let v = AbelianGroup::product(&[2, 2]);
        let n = v.len();
        let mut count = 0;
        for code in 0..n.pow(4) {
            let h: Vec<usize> = (0..n).map(|i| code / n.pow(i as u32) % n).collect();
            let g: Vec<usize> = h.iter().map(|&c| v.sub(c, h[0])).collect();
            let additive = (0..n).all(|a| (0..n).all(|b| g[v.add(a, b)] == v.add(g[a], g[b])));
            let (v, h) = (&v, &h);
            let f: Vec<(usize, usize)> =
                (0..n).flat_map(|x| (0..n).map(move |y| (v.add(1, h[x]), v.add(2, h[y])))).collect();
            let found = matches!(abelian_square_check(v, &f).unwrap(), SquareOutcome::Decomposition { .. });
            assert_eq!(found, additive);
            count += usize::from(found);
        }
        // |End(ℤ/2 × ℤ/2)| = 16 times 4 constants
        assert_eq!(count, 64);
    }

    #[test]
    fn not_a_group() {
        assert!(matches!(AbelianGroup::new(vec![vec![0, 0], vec![0, 1]]), Err(Error::NotAGroup(_))));
        assert!(matches!(AbelianGroup::new(vec![vec![0, 1], vec![0, 1]]), Err(Error::NotAGroup(_))));
    }
}
