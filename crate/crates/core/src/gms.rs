//! Finite metric spaces valued in a tabulated involutive ordered monoid.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Elem = usize;

/// A finite ordered monoid with an involution, given by its tables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MonoidTable {
    names: Vec<String>,
    leq: Vec<Vec<bool>>,
    oplus: Vec<Vec<Elem>>,
    inv: Vec<Elem>,
    zero: Elem,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MonoidDoc {
    pub elements: Vec<String>,
    /// Pairs `a ≤ b`; the reflexive-transitive closure is taken.
    pub leq: Vec<(String, String)>,
    pub oplus: Vec<Vec<String>>,
    pub involution: Vec<String>,
    pub zero: String,
}

impl MonoidTable {
    /// Validates and builds a table. `leq` must already be reflexive and transitive.
    pub fn new(
        names: Vec<String>,
        leq: Vec<Vec<bool>>,
        oplus: Vec<Vec<Elem>>,
        inv: Vec<Elem>,
        zero: Elem,
    ) -> Result<MonoidTable> {
        let n = names.len();
        let bad = |m: String| Err(Error::InvalidMonoid(m));
        if n == 0 {
            return bad("no elements".into());
        }
        if leq.len() != n
            || leq.iter().any(|r| r.len() != n)
            || oplus.len() != n
            || oplus.iter().any(|r| r.len() != n)
            || inv.len() != n
        {
            return bad("table shapes do not match the element count".into());
        }
        if zero >= n || inv.iter().chain(oplus.iter().flatten()).any(|&x| x >= n) {
            return bad("table entry out of range".into());
        }
        let t = MonoidTable {
            names,
            leq,
            oplus,
            inv,
            zero,
        };
        let nm = |a: Elem| &t.names[a];
        for a in 0..n {
            if !t.leq[a][a] {
                return bad(format!("order not reflexive at {}", nm(a)));
            }
            if !t.leq[zero][a] {
                return bad(format!("zero is not below {}", nm(a)));
            }
            if t.oplus[zero][a] != a || t.oplus[a][zero] != a {
                return bad(format!("zero is not neutral for {}", nm(a)));
            }
            if t.inv[t.inv[a]] != a {
                return bad(format!("involution is not self-inverse at {}", nm(a)));
            }
            for b in 0..n {
                if a != b && t.leq[a][b] && t.leq[b][a] {
                    return bad(format!("order not antisymmetric at {}, {}", nm(a), nm(b)));
                }
                if t.inv[t.oplus[a][b]] != t.oplus[t.inv[b]][t.inv[a]] {
                    return bad(format!("involution does not reverse {} ⊕ {}", nm(a), nm(b)));
                }
                if t.leq[a][b] && !t.leq[t.inv[a]][t.inv[b]] {
                    return bad(format!("involution not monotone on {} ≤ {}", nm(a), nm(b)));
                }
                for c in 0..n {
                    if t.leq[a][b] && t.leq[b][c] && !t.leq[a][c] {
                        return bad(format!(
                            "order not transitive at {}, {}, {}",
                            nm(a),
                            nm(b),
                            nm(c)
                        ));
                    }
                    if t.oplus[t.oplus[a][b]][c] != t.oplus[a][t.oplus[b][c]] {
                        return bad(format!(
                            "⊕ not associative at {}, {}, {}",
                            nm(a),
                            nm(b),
                            nm(c)
                        ));
                    }
                    if t.leq[a][b]
                        && !(t.leq[t.oplus[a][c]][t.oplus[b][c]]
                            && t.leq[t.oplus[c][a]][t.oplus[c][b]])
                    {
                        return bad(format!(
                            "⊕ not monotone on {} ≤ {} with {}",
                            nm(a),
                            nm(b),
                            nm(c)
                        ));
                    }
                }
            }
        }
        Ok(t)
    }

    pub fn from_doc(doc: &MonoidDoc) -> Result<MonoidTable> {
        let n = doc.elements.len();
        let index: HashMap<&str, Elem> = doc
            .elements
            .iter()
            .enumerate()
            .map(|(i, s)| (s.as_str(), i))
            .collect();
        if index.len() != n {
            return Err(Error::InvalidMonoid("duplicate element names".into()));
        }
        let get = |s: &str| {
            index
                .get(s)
                .copied()
                .ok_or_else(|| Error::InvalidMonoid(format!("unknown element {s}")))
        };
        let mut leq = vec![vec![false; n]; n];
        for (i, row) in leq.iter_mut().enumerate() {
            row[i] = true;
        }
        for (a, b) in &doc.leq {
            leq[get(a)?][get(b)?] = true;
        }
        for k in 0..n {
            for i in 0..n {
                for j in 0..n {
                    if leq[i][k] && leq[k][j] {
                        leq[i][j] = true;
                    }
                }
            }
        }
        if doc.oplus.len() != n
            || doc.oplus.iter().any(|r| r.len() != n)
            || doc.involution.len() != n
        {
            return Err(Error::InvalidMonoid(
                "table shapes do not match the element count".into(),
            ));
        }
        let oplus = doc
            .oplus
            .iter()
            .map(|r| r.iter().map(|s| get(s)).collect())
            .collect::<Result<_>>()?;
        let inv = doc
            .involution
            .iter()
            .map(|s| get(s))
            .collect::<Result<_>>()?;
        MonoidTable::new(doc.elements.clone(), leq, oplus, inv, get(&doc.zero)?)
    }

    /// Covering pairs only.
    pub fn to_doc(&self) -> MonoidDoc {
        let n = self.len();
        let mut pairs = Vec::new();
        for a in 0..n {
            for b in 0..n {
                if a != b
                    && self.lt(a, b)
                    && !(0..n).any(|c| c != a && c != b && self.lt(a, c) && self.lt(c, b))
                {
                    pairs.push((self.names[a].clone(), self.names[b].clone()));
                }
            }
        }
        MonoidDoc {
            elements: self.names.clone(),
            leq: pairs,
            oplus: self
                .oplus
                .iter()
                .map(|r| r.iter().map(|&x| self.names[x].clone()).collect())
                .collect(),
            involution: self.inv.iter().map(|&x| self.names[x].clone()).collect(),
            zero: self.names[self.zero].clone(),
        }
    }

    /// A bounded lattice with `⊕ = ∨` and the identity involution, given by its order.
    pub fn from_join_lattice(names: Vec<String>, leq: Vec<Vec<bool>>) -> Result<MonoidTable> {
        let n = names.len();
        let mut oplus = vec![vec![0; n]; n];
        for a in 0..n {
            for b in 0..n {
                oplus[a][b] = least_upper_bound(&leq, a, b)
                    .ok_or_else(|| Error::MissingJoin(format!("{} ∨ {}", names[a], names[b])))?;
            }
        }
        let zero = (0..n)
            .find(|&z| (0..n).all(|a| leq[z][a]))
            .ok_or_else(|| Error::InvalidMonoid("no least element".into()))?;
        MonoidTable::new(names, leq, oplus, (0..n).collect(), zero)
    }

    /// The chain `0 < 1 < … < k-1` with `⊕ = max`.
    pub fn chain(k: usize) -> MonoidTable {
        let leq = (0..k).map(|a| (0..k).map(|b| a <= b).collect()).collect();
        MonoidTable::from_join_lattice((0..k).map(|i| i.to_string()).collect(), leq)
            .expect("chains are lattices")
    }

    /// `{0, P, M, T}` with `P ⊕ P = P`, `M ⊕ M = M`, `P ⊕ M = M ⊕ P = T`, `T`
    /// absorbing and the involution swapping `P` and `M`. Spaces over it are
    /// posets: `d(x,y)` is `P` for `x < y`, `M` for `x > y`, `T` when incomparable.
    pub fn poset_quantale() -> MonoidTable {
        let names = ["0", "P", "M", "T"].map(String::from).to_vec();
        let leq = (0..4)
            .map(|a| (0..4).map(|b| a == b || a == 0 || b == 3).collect())
            .collect();
        let oplus = vec![
            vec![0, 1, 2, 3],
            vec![1, 1, 3, 3],
            vec![2, 3, 2, 3],
            vec![3, 3, 3, 3],
        ];
        MonoidTable::new(names, leq, oplus, vec![0, 2, 1, 3], 0).expect("valid table")
    }

    /// Divisors of `n` ordered by reverse divisibility (`n` is least) with `⊕ = gcd`.
    pub fn divisor_lattice(n: u64) -> Result<MonoidTable> {
        if n == 0 {
            return Err(Error::InvalidMonoid("n must be positive".into()));
        }
        let divs: Vec<u64> = (1..=n).filter(|d| n.is_multiple_of(*d)).collect();
        let leq = divs
            .iter()
            .map(|&a| divs.iter().map(|&b| a % b == 0).collect())
            .collect();
        MonoidTable::from_join_lattice(divs.iter().map(u64::to_string).collect(), leq)
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, a: Elem) -> &str {
        &self.names[a]
    }

    pub fn element(&self, name: &str) -> Result<Elem> {
        self.names
            .iter()
            .position(|s| s == name)
            .ok_or_else(|| Error::Malformed(format!("unknown element {name}")))
    }

    pub fn zero(&self) -> Elem {
        self.zero
    }

    pub fn leq(&self, a: Elem, b: Elem) -> bool {
        self.leq[a][b]
    }

    fn lt(&self, a: Elem, b: Elem) -> bool {
        a != b && self.leq[a][b]
    }

    pub fn oplus(&self, a: Elem, b: Elem) -> Elem {
        self.oplus[a][b]
    }

    pub fn inv(&self, a: Elem) -> Elem {
        self.inv[a]
    }

    pub fn top(&self) -> Option<Elem> {
        (0..self.len()).find(|&t| (0..self.len()).all(|a| self.leq[a][t]))
    }

    pub fn join(&self, a: Elem, b: Elem) -> Option<Elem> {
        least_upper_bound(&self.leq, a, b)
    }

    /// Supremum of a set; the empty set has supremum `zero`.
    pub fn join_all(&self, items: impl IntoIterator<Item = Elem>) -> Result<Elem> {
        let items: BTreeSet<Elem> = items.into_iter().collect();
        let uppers: Vec<Elem> = (0..self.len())
            .filter(|&u| items.iter().all(|&a| self.leq[a][u]))
            .collect();
        uppers
            .iter()
            .copied()
            .find(|&u| uppers.iter().all(|&v| self.leq[u][v]))
            .ok_or_else(|| Error::MissingJoin(self.describe(&items)))
    }

    /// Infimum of a set; the empty set needs a top element.
    pub fn meet_all(&self, items: impl IntoIterator<Item = Elem>) -> Result<Elem> {
        let items: BTreeSet<Elem> = items.into_iter().collect();
        let lowers: Vec<Elem> = (0..self.len())
            .filter(|&l| items.iter().all(|&a| self.leq[l][a]))
            .collect();
        lowers
            .iter()
            .copied()
            .find(|&l| lowers.iter().all(|&v| self.leq[v][l]))
            .ok_or_else(|| Error::MissingMeet(self.describe(&items)))
    }

    fn describe(&self, items: &BTreeSet<Elem>) -> String {
        let names: Vec<&str> = items.iter().map(|&a| self.name(a)).collect();
        format!("{{{}}}", names.join(", "))
    }

    /// `v` is accessible when some `r` has `v ≰ r` and `v ≤ r ⊕ r̄`.
    pub fn is_accessible(&self, v: Elem) -> bool {
        (0..self.len()).any(|r| !self.leq[v][r] && self.leq[v][self.oplus[r][self.inv[r]]])
    }

    pub fn inaccessible_elements(&self) -> Vec<Elem> {
        (0..self.len())
            .filter(|&v| !self.is_accessible(v))
            .collect()
    }

    /// `d(p, q)`: the least `r` with `p ≤ q ⊕ r̄` and `q ≤ p ⊕ r`.
    pub fn value_distance(&self, p: Elem, q: Elem) -> Result<Elem> {
        let sols: Vec<Elem> = (0..self.len())
            .filter(|&r| self.leq[p][self.oplus[q][self.inv[r]]] && self.leq[q][self.oplus[p][r]])
            .collect();
        sols.iter()
            .copied()
            .find(|&r| sols.iter().all(|&s| self.leq[r][s]))
            .ok_or_else(|| Error::NotResiduated(self.name(p).to_string(), self.name(q).to_string()))
    }

    /// The monoid itself as a space under [`value_distance`](Self::value_distance).
    pub fn value_space(self: &Arc<Self>) -> Result<FiniteGms> {
        let n = self.len();
        let dist = (0..n)
            .map(|p| (0..n).map(|q| self.value_distance(p, q)).collect())
            .collect::<Result<_>>()?;
        FiniteGms::new(self.names.clone(), self.clone(), dist)
    }
}

fn least_upper_bound(leq: &[Vec<bool>], a: usize, b: usize) -> Option<usize> {
    let n = leq.len();
    let uppers: Vec<usize> = (0..n).filter(|&u| leq[a][u] && leq[b][u]).collect();
    uppers
        .iter()
        .copied()
        .find(|&u| uppers.iter().all(|&v| leq[u][v]))
}

/// A finite space with distances in a [`MonoidTable`]. Axioms are not enforced
/// on construction; see [`FiniteGms::check_axioms`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteGms {
    names: Vec<String>,
    monoid: Arc<MonoidTable>,
    dist: Vec<Vec<Elem>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpaceDoc {
    pub monoid: MonoidDoc,
    pub points: Vec<String>,
    pub dist: Vec<Vec<String>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub axiom: String,
    pub points: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AxiomReport {
    pub violations: Vec<Violation>,
}

impl AxiomReport {
    pub fn passes(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Outcome of a fixed-point search.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FppResult {
    pub has_fpp: bool,
    /// A non-expansive self map without fixed points.
    pub witness: Option<Vec<usize>>,
}

pub type Mask = u64;

const MAX_POINTS: usize = 64;
const MAX_FPP_POINTS: usize = 8;

impl FiniteGms {
    pub fn new(
        names: Vec<String>,
        monoid: Arc<MonoidTable>,
        dist: Vec<Vec<Elem>>,
    ) -> Result<FiniteGms> {
        let n = names.len();
        if dist.len() != n || dist.iter().any(|r| r.len() != n) {
            return Err(Error::Malformed(
                "distance matrix must be square over the points".into(),
            ));
        }
        if dist.iter().flatten().any(|&x| x >= monoid.len()) {
            return Err(Error::Malformed(
                "distance entry is not a monoid element".into(),
            ));
        }
        if n > MAX_POINTS {
            return Err(Error::SizeGuard(format!(
                "{n} points; at most {MAX_POINTS} supported"
            )));
        }
        Ok(FiniteGms {
            names,
            monoid,
            dist,
        })
    }

    pub fn from_doc(doc: &SpaceDoc) -> Result<FiniteGms> {
        let monoid = Arc::new(MonoidTable::from_doc(&doc.monoid)?);
        let dist = doc
            .dist
            .iter()
            .map(|r| r.iter().map(|s| monoid.element(s)).collect())
            .collect::<Result<_>>()?;
        FiniteGms::new(doc.points.clone(), monoid, dist)
    }

    pub fn to_doc(&self) -> SpaceDoc {
        SpaceDoc {
            monoid: self.monoid.to_doc(),
            points: self.names.clone(),
            dist: self
                .dist
                .iter()
                .map(|r| r.iter().map(|&x| self.monoid.names[x].clone()).collect())
                .collect(),
        }
    }

    /// A poset as a space over [`MonoidTable::poset_quantale`]. `leq` must be a partial order.
    pub fn from_poset(leq: &[Vec<bool>]) -> Result<FiniteGms> {
        let n = leq.len();
        let dist = (0..n)
            .map(|x| {
                (0..n)
                    .map(|y| match (x == y, leq[x][y], leq[y][x]) {
                        (true, _, _) => 0,
                        (false, true, false) => 1,
                        (false, false, true) => 2,
                        (false, false, false) => 3,
                        (false, true, true) => 0,
                    })
                    .collect()
            })
            .collect();
        FiniteGms::new(
            (0..n).map(|i| i.to_string()).collect(),
            Arc::new(MonoidTable::poset_quantale()),
            dist,
        )
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn monoid(&self) -> &Arc<MonoidTable> {
        &self.monoid
    }

    pub fn d(&self, x: usize, y: usize) -> Elem {
        self.dist[x][y]
    }

    pub fn check_axioms(&self) -> AxiomReport {
        let m = &self.monoid;
        let n = self.len();
        let mut violations = Vec::new();
        for x in 0..n {
            for y in 0..n {
                if (self.dist[x][y] == m.zero) != (x == y) {
                    violations.push(Violation {
                        axiom: "separation".into(),
                        points: vec![x, y],
                    });
                }
                if m.inv(self.dist[y][x]) != self.dist[x][y] {
                    violations.push(Violation {
                        axiom: "involution symmetry".into(),
                        points: vec![x, y],
                    });
                }
                for z in 0..n {
                    if !m.leq(self.dist[x][y], m.oplus(self.dist[x][z], self.dist[z][y])) {
                        violations.push(Violation {
                            axiom: "triangle".into(),
                            points: vec![x, z, y],
                        });
                    }
                }
            }
        }
        AxiomReport { violations }
    }

    fn require_axioms(&self) -> Result<()> {
        match self.check_axioms().violations.first() {
            None => Ok(()),
            Some(v) => Err(Error::AxiomViolation {
                axiom: match v.axiom.as_str() {
                    "separation" => "separation",
                    "triangle" => "triangle",
                    _ => "involution symmetry",
                },
                witness: format!(
                    "{:?}",
                    v.points.iter().map(|&p| &self.names[p]).collect::<Vec<_>>()
                ),
            }),
        }
    }

    pub fn ball_mask(&self, x: usize, r: Elem) -> Mask {
        (0..self.len())
            .filter(|&y| self.monoid.leq(self.dist[x][y], r))
            .fold(0, |m, y| m | 1 << y)
    }

    pub fn ball(&self, x: usize, r: Elem) -> Vec<usize> {
        mask_points(self.ball_mask(x, r))
    }

    fn full_mask(&self) -> Mask {
        if self.len() == 64 {
            Mask::MAX
        } else {
            (1 << self.len()) - 1
        }
    }

    /// A failing `(x, y, p, q)`: `d(x,y) ≤ p ⊕ q` but no `z` splits it.
    pub fn convexity_failure(&self) -> Option<(usize, usize, Elem, Elem)> {
        let m = &self.monoid;
        let n = self.len();
        for x in 0..n {
            for y in 0..n {
                for p in 0..m.len() {
                    for q in 0..m.len() {
                        if m.leq(self.dist[x][y], m.oplus(p, q))
                            && !(0..n)
                                .any(|z| m.leq(self.dist[x][z], p) && m.leq(self.dist[z][y], q))
                        {
                            return Some((x, y, p, q));
                        }
                    }
                }
            }
        }
        None
    }

    pub fn is_convex(&self) -> Result<bool> {
        self.require_axioms()?;
        Ok(self.convexity_failure().is_none())
    }

    /// Distinct balls, each with its first `(center, radius)`.
    fn distinct_balls(&self) -> Vec<(Mask, usize, Elem)> {
        let mut seen = BTreeMap::new();
        for x in 0..self.len() {
            for r in 0..self.monoid.len() {
                seen.entry(self.ball_mask(x, r)).or_insert((x, r));
            }
        }
        seen.into_iter()
            .map(|(mask, (x, r))| (mask, x, r))
            .collect()
    }

    /// A family of pairwise intersecting balls with empty intersection.
    ///
    /// Only balls that shrink the running intersection are added, so each
    /// branch has at most `|E|` members.
    pub fn helly_failure(&self) -> Option<Vec<(usize, Elem)>> {
        let balls: Vec<(Mask, usize, Elem)> = self
            .distinct_balls()
            .into_iter()
            .filter(|b| b.0 != 0)
            .collect();
        fn dfs(
            balls: &[(Mask, usize, Elem)],
            start: usize,
            chosen: &mut Vec<usize>,
            inter: Mask,
        ) -> bool {
            if inter == 0 {
                return true;
            }
            for i in start..balls.len() {
                let m = balls[i].0;
                if m & inter == inter || chosen.iter().any(|&c| balls[c].0 & m == 0) {
                    continue;
                }
                chosen.push(i);
                if dfs(balls, i + 1, chosen, inter & m) {
                    return true;
                }
                chosen.pop();
            }
            false
        }
        let mut chosen = Vec::new();
        if dfs(&balls, 0, &mut chosen, self.full_mask()) {
            Some(chosen.iter().map(|&i| (balls[i].1, balls[i].2)).collect())
        } else {
            None
        }
    }

    pub fn is_2helly(&self) -> Result<bool> {
        self.require_axioms()?;
        Ok(self.helly_failure().is_none())
    }

    /// Convexity together with the 2-Helly property. Small spaces are also
    /// checked against the defining family condition directly.
    pub fn is_hyperconvex(&self) -> Result<bool> {
        self.require_axioms()?;
        let verdict = self.convexity_failure().is_none() && self.helly_failure().is_none();
        if self.len() <= 3 && self.monoid.len() <= 4 {
            let direct = self.hyperconvex_by_families();
            if direct != verdict {
                return Err(Error::Internal(format!(
                    "hyperconvexity: decomposition gives {verdict}, family enumeration gives {direct}"
                )));
            }
        }
        Ok(verdict)
    }

    /// Every family of balls `B(x_i, r_i)` with `d(x_i, x_j) ≤ r_i ⊕ r̄_j` for all
    /// `i, j` has a common point. Exponential in `|E|·|H|`.
    pub fn hyperconvex_by_families(&self) -> bool {
        let m = &self.monoid;
        let pairs: Vec<(usize, Elem)> = (0..self.len())
            .flat_map(|x| (0..m.len()).map(move |r| (x, r)))
            .collect();
        let k = pairs.len();
        assert!(
            k <= 20,
            "family enumeration is limited to 20 (center, radius) pairs"
        );
        let compatible = |a: (usize, Elem), b: (usize, Elem)| {
            m.leq(self.dist[a.0][b.0], m.oplus(a.1, m.inv(b.1)))
        };
        for family in 1u32..(1 << k) {
            let members: Vec<(usize, Elem)> = (0..k)
                .filter(|&i| family >> i & 1 == 1)
                .map(|i| pairs[i])
                .collect();
            if members
                .iter()
                .all(|&a| members.iter().all(|&b| compatible(a, b)))
                && members
                    .iter()
                    .fold(self.full_mask(), |acc, &(x, r)| acc & self.ball_mask(x, r))
                    == 0
            {
                return false;
            }
        }
        true
    }

    pub fn diameter(&self) -> Result<Elem> {
        self.diameter_of(&(0..self.len()).collect::<Vec<_>>())
    }

    pub fn diameter_of(&self, a: &[usize]) -> Result<Elem> {
        self.monoid.join_all(
            a.iter()
                .flat_map(|&x| a.iter().map(move |&y| self.dist[x][y])),
        )
    }

    /// `⋀{r : A ⊆ B(x, r) for some x ∈ A}`.
    pub fn radius(&self, a: &[usize]) -> Result<Elem> {
        let m = &self.monoid;
        let covering = (0..m.len()).filter(|&r| {
            a.iter()
                .any(|&x| a.iter().all(|&y| m.leq(self.dist[x][y], r)))
        });
        m.meet_all(covering)
    }

    /// Radius equals diameter. The empty set never qualifies.
    pub fn is_equally_centered(&self, a: &[usize]) -> Result<bool> {
        if a.is_empty() {
            return Ok(false);
        }
        Ok(self.radius(a)? == self.diameter_of(a)?)
    }

    /// All nonempty intersections of families of balls.
    pub fn ball_intersections(&self) -> Vec<Mask> {
        let balls: Vec<Mask> = self.distinct_balls().into_iter().map(|b| b.0).collect();
        let mut all: BTreeSet<Mask> = balls.iter().copied().filter(|&b| b != 0).collect();
        loop {
            let mut added = Vec::new();
            for &a in &all {
                for &b in &balls {
                    let c = a & b;
                    if c != 0 && !all.contains(&c) {
                        added.push(c);
                    }
                }
            }
            if added.is_empty() {
                break;
            }
            all.extend(added);
        }
        all.into_iter().collect()
    }

    /// No intersection of balls with other than one point is equally centered.
    /// Returns such an intersection if one exists.
    pub fn normal_structure_failure(&self) -> Result<Option<Vec<usize>>> {
        for mask in self.ball_intersections() {
            if mask.count_ones() == 1 {
                continue;
            }
            let pts = mask_points(mask);
            if self.is_equally_centered(&pts)? {
                return Ok(Some(pts));
            }
        }
        Ok(None)
    }

    pub fn has_normal_structure(&self) -> Result<bool> {
        Ok(self.normal_structure_failure()?.is_none())
    }

    /// `0` is the only inaccessible element below the diameter.
    pub fn is_bounded_with(&self, inaccessible: &[Elem]) -> Result<bool> {
        let delta = self.diameter()?;
        let m = &self.monoid;
        Ok(inaccessible
            .iter()
            .all(|&v| v == m.zero || !m.leq(v, delta)))
    }

    pub fn is_bounded(&self) -> Result<bool> {
        self.is_bounded_with(&self.monoid.inaccessible_elements())
    }

    pub fn is_nonexpansive(&self, f: &[usize]) -> bool {
        let n = self.len();
        f.len() == n
            && f.iter().all(|&v| v < n)
            && (0..n)
                .all(|x| (0..n).all(|y| self.monoid.leq(self.dist[f[x]][f[y]], self.dist[x][y])))
    }

    /// Searches for a non-expansive self map without a fixed point.
    pub fn fpp_check(&self) -> Result<FppResult> {
        let n = self.len();
        if n > MAX_FPP_POINTS {
            return Err(Error::SizeGuard(format!(
                "{n} points; fixed-point search is limited to {MAX_FPP_POINTS}"
            )));
        }
        if n == 0 {
            return Ok(FppResult {
                has_fpp: false,
                witness: Some(Vec::new()),
            });
        }
        let witness = (1..n).into_par_iter().find_map_first(|first| {
            let mut f = vec![usize::MAX; n];
            f[0] = first;
            self.extend_fixed_point_free(&mut f, 1).then_some(f)
        });
        Ok(FppResult {
            has_fpp: witness.is_none(),
            witness,
        })
    }

    fn extend_fixed_point_free(&self, f: &mut Vec<usize>, next: usize) -> bool {
        let n = self.len();
        if next == n {
            return true;
        }
        let m = &self.monoid;
        for v in 0..n {
            if v == next {
                continue;
            }
            let ok = (0..next).all(|x| {
                m.leq(self.dist[f[x]][v], self.dist[x][next])
                    && m.leq(self.dist[v][f[x]], self.dist[next][x])
            });
            if ok {
                f[next] = v;
                if self.extend_fixed_point_free(f, next + 1) {
                    return true;
                }
            }
        }
        f[next] = usize::MAX;
        false
    }

    /// Common fixed points of a family of pairwise commuting non-expansive maps.
    pub fn common_fixed_points(&self, maps: &[Vec<usize>]) -> Result<Vec<usize>> {
        for (i, f) in maps.iter().enumerate() {
            if !self.is_nonexpansive(f) {
                return Err(Error::PreservationViolated(format!(
                    "map {i} is not non-expansive"
                )));
            }
        }
        for (i, f) in maps.iter().enumerate() {
            for (j, g) in maps.iter().enumerate().skip(i + 1) {
                if (0..self.len()).any(|x| f[g[x]] != g[f[x]]) {
                    return Err(Error::Malformed(format!("maps {i} and {j} do not commute")));
                }
            }
        }
        Ok((0..self.len())
            .filter(|&x| maps.iter().all(|f| f[x] == x))
            .collect())
    }

    pub fn commuting_fpp_check(&self, maps: &[Vec<usize>]) -> Result<bool> {
        Ok(!self.common_fixed_points(maps)?.is_empty())
    }

    /// The subspace on `points`, in the given order.
    pub fn restrict(&self, points: &[usize]) -> Result<FiniteGms> {
        if points.iter().any(|&p| p >= self.len()) {
            return Err(Error::Malformed("point out of range".into()));
        }
        FiniteGms::new(
            points.iter().map(|&p| self.names[p].clone()).collect(),
            self.monoid.clone(),
            points
                .iter()
                .map(|&x| points.iter().map(|&y| self.dist[x][y]).collect())
                .collect(),
        )
    }
}

pub fn mask_points(mask: Mask) -> Vec<usize> {
    (0..64).filter(|&i| mask >> i & 1 == 1).collect()
}
