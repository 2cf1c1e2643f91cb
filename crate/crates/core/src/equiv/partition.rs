use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// An equivalence relation on `{0, …, n-1}`.
///
/// Stored as block labels, canonical: blocks are numbered in order of their
/// least element, so structural equality is equality of relations.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Partition {
    labels: Vec<u32>,
}

/// A binary relation on `{0, …, n-1}` as a dense matrix.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Relation {
    n: usize,
    bits: Vec<bool>,
}

impl Relation {
    pub fn empty(n: usize) -> Relation {
        Relation {
            n,
            bits: vec![false; n * n],
        }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn contains(&self, x: usize, y: usize) -> bool {
        self.bits[x * self.n + y]
    }

    pub fn insert(&mut self, x: usize, y: usize) {
        self.bits[x * self.n + y] = true;
    }

    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n * self.n)
            .filter(|&i| self.bits[i])
            .map(|i| (i / self.n, i % self.n))
    }

    /// The partition it equals, if it is an equivalence relation.
    pub fn as_partition(&self) -> Option<Partition> {
        let p = Partition::from_related(self.n, |x, y| self.contains(x, y));
        (0..self.n)
            .all(|x| (0..self.n).all(|y| p.related(x, y) == self.contains(x, y)))
            .then_some(p)
    }
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> UnionFind {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra.max(rb)] = ra.min(rb);
        }
    }
}

impl Partition {
    /// Canonicalises arbitrary block labels.
    pub fn from_labels<T: Copy + Eq + std::hash::Hash>(labels: &[T]) -> Partition {
        let mut seen = std::collections::HashMap::new();
        let labels = labels
            .iter()
            .map(|l| {
                let next = seen.len() as u32;
                *seen.entry(*l).or_insert(next)
            })
            .collect();
        Partition { labels }
    }

    pub fn from_blocks(n: usize, blocks: &[Vec<usize>]) -> Result<Partition> {
        let mut label = vec![usize::MAX; n];
        for (b, block) in blocks.iter().enumerate() {
            if block.is_empty() {
                return Err(Error::Malformed("empty block".into()));
            }
            for &x in block {
                if x >= n {
                    return Err(Error::Malformed(format!(
                        "element {x} outside carrier of size {n}"
                    )));
                }
                if label[x] != usize::MAX {
                    return Err(Error::Malformed(format!("element {x} in two blocks")));
                }
                label[x] = b;
            }
        }
        if let Some(x) = label.iter().position(|&l| l == usize::MAX) {
            return Err(Error::Malformed(format!("element {x} in no block")));
        }
        Ok(Partition::from_labels(&label))
    }

    /// The equivalence relation generated by a symmetric predicate.
    pub fn from_related(n: usize, related: impl Fn(usize, usize) -> bool) -> Partition {
        let mut uf = UnionFind::new(n);
        for x in 0..n {
            for y in x + 1..n {
                if related(x, y) {
                    uf.union(x, y);
                }
            }
        }
        Partition::from_labels(&(0..n).map(|x| uf.find(x)).collect::<Vec<_>>())
    }

    /// The equality relation Δ.
    pub fn identity(n: usize) -> Partition {
        Partition {
            labels: (0..n as u32).collect(),
        }
    }

    pub fn full(n: usize) -> Partition {
        Partition { labels: vec![0; n] }
    }

    /// Congruence modulo `d` on `{0, …, n-1}`.
    pub fn modulo(n: usize, d: usize) -> Partition {
        if d == 0 {
            return Partition::identity(n);
        }
        Partition::from_labels(&(0..n).map(|x| x % d).collect::<Vec<_>>())
    }

    /// The least equivalence relation containing `(a, b)`.
    pub fn pair(n: usize, a: usize, b: usize) -> Partition {
        Partition::from_related(n, |x, y| (x == a && y == b) || (x == b && y == a))
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn label(&self, x: usize) -> u32 {
        self.labels[x]
    }

    pub fn labels(&self) -> &[u32] {
        &self.labels
    }

    pub fn related(&self, x: usize, y: usize) -> bool {
        self.labels[x] == self.labels[y]
    }

    pub fn num_blocks(&self) -> usize {
        self.labels
            .iter()
            .map(|&l| l as usize + 1)
            .max()
            .unwrap_or(0)
    }

    pub fn blocks(&self) -> Vec<Vec<usize>> {
        let mut blocks = vec![Vec::new(); self.num_blocks()];
        for (x, &l) in self.labels.iter().enumerate() {
            blocks[l as usize].push(x);
        }
        blocks
    }

    pub fn is_identity(&self) -> bool {
        self.num_blocks() == self.len()
    }

    pub fn is_full(&self) -> bool {
        self.num_blocks() <= 1
    }

    fn same_carrier(&self, other: &Partition) -> Result<()> {
        if self.len() == other.len() {
            Ok(())
        } else {
            Err(Error::CarrierMismatch(self.len(), other.len()))
        }
    }

    /// Inclusion of relations: `self` refines `other`.
    pub fn leq(&self, other: &Partition) -> Result<bool> {
        self.same_carrier(other)?;
        Ok((0..self.len())
            .all(|x| (0..self.len()).all(|y| !self.related(x, y) || other.related(x, y))))
    }

    pub fn meet(&self, other: &Partition) -> Result<Partition> {
        self.same_carrier(other)?;
        let pairs: Vec<(u32, u32)> = self
            .labels
            .iter()
            .copied()
            .zip(other.labels.iter().copied())
            .collect();
        Ok(Partition::from_labels(&pairs))
    }

    pub fn join(&self, other: &Partition) -> Result<Partition> {
        self.same_carrier(other)?;
        let mut uf = UnionFind::new(self.len());
        let mut first = vec![usize::MAX; self.len()];
        for labels in [&self.labels, &other.labels] {
            first.iter_mut().for_each(|f| *f = usize::MAX);
            for (x, &l) in labels.iter().enumerate() {
                if first[l as usize] == usize::MAX {
                    first[l as usize] = x;
                } else {
                    uf.union(first[l as usize], x);
                }
            }
        }
        Ok(Partition::from_labels(
            &(0..self.len()).map(|x| uf.find(x)).collect::<Vec<_>>(),
        ))
    }

    /// `self ∘ other = {(x, y) : (x, z) ∈ other, (z, y) ∈ self for some z}`.
    pub fn compose(&self, other: &Partition) -> Result<Relation> {
        self.same_carrier(other)?;
        let n = self.len();
        let mut r = Relation::empty(n);
        for x in 0..n {
            for z in 0..n {
                if other.related(x, z) {
                    for y in 0..n {
                        if self.related(z, y) {
                            r.insert(x, y);
                        }
                    }
                }
            }
        }
        Ok(r)
    }

    /// A pair in exactly one of `self ∘ other` and `other ∘ self`.
    pub fn commute_witness(&self, other: &Partition) -> Result<Option<(usize, usize)>> {
        let a = self.compose(other)?;
        let b = other.compose(self)?;
        let n = self.len();
        Ok((0..n)
            .flat_map(|x| (0..n).map(move |y| (x, y)))
            .find(|&(x, y)| a.contains(x, y) != b.contains(x, y)))
    }

    pub fn commutes(&self, other: &Partition) -> Result<bool> {
        Ok(self.commute_witness(other)?.is_none())
    }

    /// Meet is Δ and join is the full relation.
    pub fn is_orthogonal(&self, other: &Partition) -> Result<bool> {
        Ok(self.meet(other)?.is_identity() && self.join(other)?.is_full())
    }

    /// Meet is Δ only.
    pub fn weakly_orthogonal(&self, other: &Partition) -> Result<bool> {
        Ok(self.meet(other)?.is_identity())
    }

    /// `f` maps related pairs to related pairs.
    pub fn preserved_by(&self, f: &[usize]) -> bool {
        let blocks = self.blocks();
        blocks
            .iter()
            .all(|b| b.iter().all(|&x| self.related(f[x], f[b[0]])))
    }

    /// Image of the relation under a permutation of the carrier.
    pub fn permuted(&self, perm: &[usize]) -> Partition {
        let mut labels = vec![0u32; self.len()];
        for x in 0..self.len() {
            labels[perm[x]] = self.labels[x];
        }
        Partition::from_labels(&labels)
    }

    /// All partitions of an `n`-set, as restricted growth strings.
    pub fn all(n: usize) -> Vec<Partition> {
        let mut out = Vec::new();
        let mut labels = vec![0u32; n];
        fn rec(i: usize, max: u32, labels: &mut Vec<u32>, out: &mut Vec<Partition>) {
            if i == labels.len() {
                out.push(Partition {
                    labels: labels.clone(),
                });
                return;
            }
            for l in 0..=max + 1 {
                labels[i] = l;
                rec(i + 1, max.max(l), labels, out);
            }
        }
        if n == 0 {
            return vec![Partition { labels }];
        }
        rec(1, 0, &mut labels, &mut out);
        out
    }
}

impl fmt::Debug for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let blocks: Vec<String> = self
            .blocks()
            .iter()
            .map(|b| {
                b.iter()
                    .map(|x| x.to_string())
                    .collect::<Vec<_>>()
                    .join(",")
            })
            .collect();
        write!(f, "{{{}}}", blocks.join("|"))
    }
}

impl Serialize for Partition {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.blocks().serialize(s)
    }
}

impl<'de> Deserialize<'de> for Partition {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let blocks = Vec::<Vec<usize>>::deserialize(d)?;
        let n = blocks.iter().map(Vec::len).sum();
        Partition::from_blocks(n, &blocks).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(n: usize, blocks: &[&[usize]]) -> Partition {
        Partition::from_blocks(n, &blocks.iter().map(|b| b.to_vec()).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn canonical_form() {
        assert_eq!(Partition::from_labels(&[7, 7, 3]), p(3, &[&[0, 1], &[2]]));
        assert_eq!(
            Partition::from_labels(&['b', 'a', 'b']).labels(),
            &[0, 1, 0]
        );
        assert!(Partition::from_blocks(3, &[vec![0, 1]]).is_err());
        assert!(Partition::from_blocks(2, &[vec![0, 1], vec![1]]).is_err());
        assert_eq!(Partition::all(3).len(), 5);
        assert_eq!(Partition::all(5).len(), 52);
    }

    #[test]
    fn z6_moduli_commute() {
        let m2 = Partition::modulo(6, 2);
        let m3 = Partition::modulo(6, 3);
        assert!(m2.commutes(&m3).unwrap());
        let c = m2.compose(&m3).unwrap();
        assert_eq!(c.as_partition(), Some(Partition::full(6)));
        assert_eq!(m2.meet(&m3).unwrap(), Partition::identity(6));
        assert!(m2.is_orthogonal(&m3).unwrap());
    }

    #[test]
    fn noncommuting_pair() {
        let rho = p(3, &[&[0, 1], &[2]]);
        let tau = p(3, &[&[0], &[1, 2]]);
        assert_eq!(rho.meet(&rho).unwrap(), rho);
        let (x, y) = rho.commute_witness(&tau).unwrap().unwrap();
        assert_ne!(
            rho.compose(&tau).unwrap().contains(x, y),
            tau.compose(&rho).unwrap().contains(x, y)
        );
        assert!(rho.compose(&tau).unwrap().contains(2, 0));
        assert!(!rho.compose(&tau).unwrap().contains(0, 2));
        assert_eq!(rho.compose(&tau).unwrap().as_partition(), None);
    }

    #[test]
    fn json_form() {
        let rho = p(3, &[&[0, 1], &[2]]);
        assert_eq!(serde_json::to_string(&rho).unwrap(), "[[0,1],[2]]");
        let back: Partition = serde_json::from_str("[[2],[1,0]]").unwrap();
        assert_eq!(back, rho);
        assert_eq!(
            Partition::identity(2).meet(&Partition::identity(3)),
            Err(Error::CarrierMismatch(2, 3))
        );
    }

    fn partition(n: usize) -> impl Strategy<Value = Partition> {
        prop::collection::vec(0u8..4, n).prop_map(|l| Partition::from_labels(&l))
    }

    proptest! {
        #[test]
        fn join_is_iterated_composition(a in partition(6), b in partition(6)) {
            let join = a.join(&b).unwrap();
            // iterate (a∘b)^k to a fixpoint
            let mut cur = a.compose(&b).unwrap();
            loop {
                let mut next = cur.clone();
                for (x, z) in cur.pairs() {
                    for y in 0..6 {
                        if cur.contains(z, y) {
                            next.insert(x, y);
                        }
                    }
                }
                if next == cur { break; }
                cur = next;
            }
            prop_assert_eq!(cur.as_partition(), Some(join));
        }

        #[test]
        fn meet_is_intersection(a in partition(6), b in partition(6)) {
            let m = a.meet(&b).unwrap();
            for x in 0..6 {
                for y in 0..6 {
                    prop_assert_eq!(m.related(x, y), a.related(x, y) && b.related(x, y));
                }
            }
            prop_assert!(m.leq(&a).unwrap() && m.leq(&b).unwrap());
            prop_assert!(a.leq(&a.join(&b).unwrap()).unwrap());
        }
    }
}
