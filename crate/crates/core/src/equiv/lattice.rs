use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::partition::Partition;
use crate::error::{Error, Result};
use crate::gms::MonoidTable;

fn carrier(sets: &[Partition]) -> Result<usize> {
    let n = sets.first().map_or(0, Partition::len);
    match sets.iter().find(|p| p.len() != n) {
        Some(p) => Err(Error::CarrierMismatch(n, p.len())),
        None => Ok(n),
    }
}

/// Least meet- and join-closed superset, sorted.
pub fn sublattice_closure(generators: &[Partition], guard: usize) -> Result<Vec<Partition>> {
    closure(generators, guard, true)
}

/// Least meet-closed superset, sorted.
pub fn meet_closure(generators: &[Partition], guard: usize) -> Result<Vec<Partition>> {
    closure(generators, guard, false)
}

fn closure(generators: &[Partition], guard: usize, joins: bool) -> Result<Vec<Partition>> {
    carrier(generators)?;
    let mut all: BTreeSet<Partition> = generators.iter().cloned().collect();
    let mut frontier: Vec<Partition> = all.iter().cloned().collect();
    while !frontier.is_empty() {
        let current: Vec<Partition> = all.iter().cloned().collect();
        let mut next = Vec::new();
        for a in &frontier {
            for b in &current {
                let mut candidates = vec![a.meet(b)?];
                if joins {
                    candidates.push(a.join(b)?);
                }
                for c in candidates {
                    if !all.contains(&c) {
                        all.insert(c.clone());
                        next.push(c);
                        if all.len() > guard {
                            return Err(Error::SizeGuard(format!(
                                "closure exceeds {guard} partitions"
                            )));
                        }
                    }
                }
            }
        }
        frontier = next;
    }
    Ok(all.into_iter().collect())
}

/// Checks that `l` is closed under meet and join.
pub fn check_sublattice(l: &[Partition]) -> Result<()> {
    carrier(l)?;
    let members: BTreeSet<&Partition> = l.iter().collect();
    for a in l {
        for b in l {
            for (op, c) in [("meet", a.meet(b)?), ("join", a.join(b)?)] {
                if !members.contains(&c) {
                    return Err(Error::NotSublattice(format!(
                        "{op} of {a:?} and {b:?} is missing"
                    )));
                }
            }
        }
    }
    Ok(())
}

/// A triple with `a ∧ (b ∨ c) ≠ (a ∧ b) ∨ (a ∧ c)`.
pub fn distributivity_failure(
    l: &[Partition],
) -> Result<Option<(Partition, Partition, Partition)>> {
    check_sublattice(l)?;
    for a in l {
        for b in l {
            for c in l {
                if a.meet(&b.join(c)?)? != a.meet(b)?.join(&a.meet(c)?)? {
                    return Ok(Some((a.clone(), b.clone(), c.clone())));
                }
            }
        }
    }
    Ok(None)
}

pub fn is_distributive(l: &[Partition]) -> Result<bool> {
    Ok(distributivity_failure(l)?.is_none())
}

/// Distributive with pairwise commuting members.
pub fn is_arithmetical(l: &[Partition]) -> Result<bool> {
    if !is_distributive(l)? {
        return Ok(false);
    }
    for a in l {
        for b in l {
            if !a.commutes(b)? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Congruences of `ℤ/n`: one per divisor of `n`.
pub fn zn_congruences(n: usize) -> Vec<Partition> {
    (1..=n)
        .filter(|d| n.is_multiple_of(*d))
        .map(|d| Partition::modulo(n, d))
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "status")]
pub enum CrtOutcome {
    Solved {
        x: usize,
    },
    /// Constraints `i` and `j` violate `a_i ≡ a_j (θ_i ∨ θ_j)`.
    PairFails {
        i: usize,
        j: usize,
    },
    /// Pairwise conditions hold yet no element satisfies every constraint.
    NoSolution,
}

impl CrtOutcome {
    pub fn solution(&self) -> Option<usize> {
        match self {
            CrtOutcome::Solved { x } => Some(*x),
            _ => None,
        }
    }
}

/// Solves `x ≡ a_i (θ_i)` by scanning the carrier after checking the pairwise
/// conditions. Each `θ_i` must belong to `l`.
pub fn crt_solve(l: &[Partition], constraints: &[(usize, Partition)]) -> Result<CrtOutcome> {
    let n = carrier(l)?;
    for (a, theta) in constraints {
        if theta.len() != n {
            return Err(Error::CarrierMismatch(n, theta.len()));
        }
        if *a >= n {
            return Err(Error::Malformed(format!(
                "element {a} outside carrier of size {n}"
            )));
        }
        if !l.contains(theta) {
            return Err(Error::Malformed(format!(
                "{theta:?} is not a member of the lattice"
            )));
        }
    }
    Ok(crt_unchecked(n, constraints))
}

fn crt_unchecked(n: usize, constraints: &[(usize, Partition)]) -> CrtOutcome {
    for (i, (ai, ti)) in constraints.iter().enumerate() {
        for (j, (aj, tj)) in constraints.iter().enumerate().skip(i + 1) {
            if !ti.join(tj).expect("same carrier").related(*ai, *aj) {
                return CrtOutcome::PairFails { i, j };
            }
        }
    }
    match (0..n).find(|&x| constraints.iter().all(|(a, t)| t.related(x, *a))) {
        Some(x) => CrtOutcome::Solved { x },
        None => CrtOutcome::NoSolution,
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Extension {
    pub z: usize,
    pub x: usize,
    pub map: BTreeMap<usize, usize>,
    /// Whether the lattice had to be closed under meets first.
    pub meet_closure_added: bool,
}

/// Whether the partial map preserves every member of `l` on its domain.
pub fn preserves_all(
    l: &[Partition],
    f: &BTreeMap<usize, usize>,
) -> Option<(Partition, usize, usize)> {
    for theta in l {
        for (&b1, &v1) in f {
            for (&b2, &v2) in f {
                if theta.related(b1, b2) && !theta.related(v1, v2) {
                    return Some((theta.clone(), b1, b2));
                }
            }
        }
    }
    None
}

/// Extends a partial map preserving every member of an arithmetical lattice
/// to one more point.
///
/// For each `b` in the domain, `θ_b` is the least member relating `b` and `z`;
/// a solution of `x ≡ f(b) (θ_b)` works, since any member relating `b` to `z`
/// contains `θ_b`. Solvability: `b ≡ z ≡ b'` modulo `θ_b ∨ θ_b'`, a member, so
/// `f(b) ≡ f(b')` there too.
pub fn kaarli_extend(l: &[Partition], f: &BTreeMap<usize, usize>, z: usize) -> Result<Extension> {
    let n = carrier(l)?;
    if z >= n || f.iter().any(|(&b, &v)| b >= n || v >= n) {
        return Err(Error::Malformed("point outside the carrier".into()));
    }
    if f.contains_key(&z) {
        return Err(Error::Malformed(format!("{z} is already in the domain")));
    }
    let closed = meet_closure(l, 1 << 16)?;
    let meet_closure_added = closed.len() != l.len();
    if !is_arithmetical(&closed)? {
        return Err(Error::Malformed("lattice is not arithmetical".into()));
    }
    if let Some((theta, b1, b2)) = preserves_all(&closed, f) {
        return Err(Error::PreservationViolated(format!(
            "{theta:?} relates {b1} and {b2} but not their images"
        )));
    }
    let mut constraints = Vec::new();
    for (&b, &v) in f {
        let containing: Vec<&Partition> = closed.iter().filter(|t| t.related(b, z)).collect();
        // least member containing (b, z); none means no constraint
        if let Some(least) = containing
            .iter()
            .find(|t| containing.iter().all(|u| t.leq(u).unwrap_or(false)))
        {
            constraints.push((v, (*least).clone()));
        }
    }
    if let other @ (CrtOutcome::PairFails { .. } | CrtOutcome::NoSolution) =
        crt_unchecked(n, &constraints)
    {
        return Err(Error::Internal(format!(
            "extension system unsolvable: {other:?}"
        )));
    }
    // prefer z itself, then a value already in the image
    let solves = |x: usize| constraints.iter().all(|(a, t)| t.related(x, *a));
    let x = std::iter::once(z)
        .chain(f.values().copied())
        .chain(0..n)
        .find(|&x| solves(x))
        .ok_or_else(|| Error::Internal("extension system unsolvable".into()))?;
    let mut map = f.clone();
    map.insert(z, x);
    if let Some((theta, b1, b2)) = preserves_all(&closed, &map) {
        return Err(Error::Internal(format!(
            "extension breaks {theta:?} on {b1}, {b2}"
        )));
    }
    Ok(Extension {
        z,
        x,
        map,
        meet_closure_added,
    })
}

/// `d_V(x, y) = (x ∖ y) ∨ (y ∖ x)` on a finite lattice given by its order, where
/// `x ∖ y` is the least `z` with `x ≤ y ∨ z`.
pub fn residuated_distance(names: Vec<String>, leq: Vec<Vec<bool>>) -> Result<Vec<Vec<usize>>> {
    let lattice = MonoidTable::from_join_lattice(names, leq).map_err(|e| match e {
        Error::MissingJoin(m) | Error::InvalidMonoid(m) => Error::NotALattice(m),
        other => other,
    })?;
    let n = lattice.len();
    for a in 0..n {
        for b in 0..n {
            lattice.meet_all([a, b]).map_err(|_| {
                Error::NotALattice(format!(
                    "{} ∧ {} is missing",
                    lattice.name(a),
                    lattice.name(b)
                ))
            })?;
        }
    }
    let residual = |x: usize, y: usize| -> Result<usize> {
        let d: Vec<usize> = (0..n)
            .filter(|&z| lattice.leq(x, lattice.oplus(y, z)))
            .collect();
        d.iter()
            .copied()
            .find(|&z| d.iter().all(|&w| lattice.leq(z, w)))
            .ok_or_else(|| {
                Error::NotResiduated(lattice.name(x).to_string(), lattice.name(y).to_string())
            })
    };
    let mut table = vec![vec![0; n]; n];
    for x in 0..n {
        for y in 0..n {
            table[x][y] = lattice.oplus(residual(x, y)?, residual(y, x)?);
        }
    }
    Ok(table)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrthogonalFamily {
    pub n: usize,
    pub block_size: Option<usize>,
    pub size: usize,
    pub family: Vec<Partition>,
}

pub const ORTHOGONAL_GUARD: usize = 8;

/// A maximum family of pairwise orthogonal partitions of an `n`-set other than Δ,
/// optionally restricted to blocks of one size.
///
/// Up to relabelling, the first member may be taken to be the canonical
/// partition of its block shape, so the search branches only over shapes.
pub fn orthogonal_family_search(n: usize, block_size: Option<usize>) -> Result<OrthogonalFamily> {
    if n > ORTHOGONAL_GUARD {
        return Err(Error::SizeGuard(format!(
            "n = {n}; orthogonal search is limited to {ORTHOGONAL_GUARD}"
        )));
    }
    if let Some(k) = block_size {
        if k == 0 || !n.is_multiple_of(k) {
            return Err(Error::Malformed(format!(
                "block size {k} does not divide {n}"
            )));
        }
    }
    let nodes: Vec<Partition> = Partition::all(n)
        .into_iter()
        .filter(|p| !p.is_identity() || n == 0)
        .filter(|p| block_size.is_none_or(|k| p.blocks().iter().all(|b| b.len() == k)))
        .collect();
    if nodes.is_empty() {
        return Ok(OrthogonalFamily {
            n,
            block_size,
            size: 0,
            family: Vec::new(),
        });
    }
    let m = nodes.len();
    let words = m.div_ceil(64);
    let mut adj = vec![vec![0u64; words]; m];
    for i in 0..m {
        for j in i + 1..m {
            if nodes[i].is_orthogonal(&nodes[j])? {
                adj[i][j / 64] |= 1 << (j % 64);
                adj[j][i / 64] |= 1 << (i % 64);
            }
        }
    }
    // canonical representative per block shape: blocks filled left to right
    let mut seeds: BTreeMap<Vec<usize>, usize> = BTreeMap::new();
    for (i, p) in nodes.iter().enumerate() {
        let mut shape: Vec<usize> = p.blocks().iter().map(Vec::len).collect();
        shape.sort_unstable_by(|a, b| b.cmp(a));
        let mut labels = Vec::with_capacity(n);
        for (b, &len) in shape.iter().enumerate() {
            labels.extend(std::iter::repeat_n(b, len));
        }
        if Partition::from_labels(&labels) == *p {
            seeds.insert(shape, i);
        }
    }
    let mut best: Vec<usize> = vec![seeds.values().next().copied().unwrap_or(0)];
    for &seed in seeds.values() {
        let mut chosen = vec![seed];
        let candidates = adj[seed].clone();
        max_clique(&adj, &mut chosen, candidates, &mut best);
    }
    let family: Vec<Partition> = best.iter().map(|&i| nodes[i].clone()).collect();
    Ok(OrthogonalFamily {
        n,
        block_size,
        size: family.len(),
        family,
    })
}

fn max_clique(
    adj: &[Vec<u64>],
    chosen: &mut Vec<usize>,
    candidates: Vec<u64>,
    best: &mut Vec<usize>,
) {
    let count: u32 = candidates.iter().map(|w| w.count_ones()).sum();
    if chosen.len() > best.len() {
        *best = chosen.clone();
    }
    if chosen.len() + count as usize <= best.len() {
        return;
    }
    let mut cand = candidates;
    while let Some(v) = first_bit(&cand) {
        let remaining: u32 = cand.iter().map(|w| w.count_ones()).sum();
        if chosen.len() + remaining as usize <= best.len() {
            return;
        }
        cand[v / 64] &= !(1 << (v % 64));
        let next: Vec<u64> = cand.iter().zip(&adj[v]).map(|(a, b)| a & b).collect();
        chosen.push(v);
        max_clique(adj, chosen, next, best);
        chosen.pop();
    }
}

fn first_bit(words: &[u64]) -> Option<usize> {
    words
        .iter()
        .enumerate()
        .find(|(_, w)| **w != 0)
        .map(|(i, w)| i * 64 + w.trailing_zeros() as usize)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(n: usize, blocks: &[&[usize]]) -> Partition {
        Partition::from_blocks(n, &blocks.iter().map(|b| b.to_vec()).collect::<Vec<_>>()).unwrap()
    }

    fn pairs3() -> Vec<Partition> {
        vec![
            p(3, &[&[0, 1], &[2]]),
            p(3, &[&[0, 2], &[1]]),
            p(3, &[&[0], &[1, 2]]),
        ]
    }

    #[test]
    fn closure_examples() {
        assert_eq!(sublattice_closure(&pairs3(), 100).unwrap().len(), 5);
        assert_eq!(
            sublattice_closure(&[Partition::identity(4)], 100).unwrap(),
            vec![Partition::identity(4)]
        );
        let z6 =
            sublattice_closure(&[Partition::modulo(6, 2), Partition::modulo(6, 3)], 100).unwrap();
        assert_eq!(z6.len(), 4);
        assert!(z6.contains(&Partition::identity(6)) && z6.contains(&Partition::full(6)));
        assert!(matches!(
            sublattice_closure(&pairs3(), 3),
            Err(Error::SizeGuard(_))
        ));
    }

    #[test]
    fn arithmetical_examples() {
        assert!(is_arithmetical(&zn_congruences(12)).unwrap());
        assert_eq!(zn_congruences(12).len(), 6);
        let eqv4 = Partition::all(4);
        assert!(!is_distributive(&eqv4).unwrap());
        assert!(distributivity_failure(&eqv4).unwrap().is_some());
        assert!(is_arithmetical(&[Partition::identity(3), Partition::full(3)]).unwrap());
        assert!(matches!(
            is_distributive(&pairs3()),
            Err(Error::NotSublattice(_))
        ));
        // Eqv(3) is M3: not distributive
        assert!(!is_arithmetical(&Partition::all(3)).unwrap());
    }

    #[test]
    fn crt_examples() {
        let l =
            sublattice_closure(&[Partition::modulo(6, 2), Partition::modulo(6, 3)], 100).unwrap();
        let out = crt_solve(
            &l,
            &[(1, Partition::modulo(6, 2)), (2, Partition::modulo(6, 3))],
        )
        .unwrap();
        assert_eq!(out, CrtOutcome::Solved { x: 5 });
        assert_eq!(
            crt_solve(&l, &[(4, Partition::modulo(6, 2))])
                .unwrap()
                .solution(),
            Some(0)
        );
        let single = crt_solve(&l, &[(4, Partition::identity(6))]).unwrap();
        assert_eq!(single, CrtOutcome::Solved { x: 4 });
        let bad = crt_solve(
            &l,
            &[(0, Partition::modulo(6, 2)), (1, Partition::modulo(6, 2))],
        )
        .unwrap();
        assert_eq!(bad, CrtOutcome::PairFails { i: 0, j: 1 });
        assert!(crt_solve(&l, &[(0, Partition::modulo(6, 6))]).is_ok());
        assert!(crt_solve(&l, &[(0, p(6, &[&[0, 1], &[2], &[3], &[4], &[5]]))]).is_err());
    }

    #[test]
    fn kaarli_groups_by_preimage() {
        // grouping by value would only constrain x by the full relation here
        let l = zn_congruences(6);
        let f: BTreeMap<usize, usize> = [(0, 0), (1, 0)].into();
        let e = kaarli_extend(&l, &f, 2).unwrap();
        assert_eq!(e.x % 2, 0);
        let mut bad = f.clone();
        bad.insert(2, 1);
        assert!(preserves_all(&l, &bad).is_some());
    }

    #[test]
    fn kaarli_without_constraints() {
        let l = vec![Partition::identity(2)];
        let f = BTreeMap::from([(1, 0)]);
        let e = kaarli_extend(&l, &f, 0).unwrap();
        assert_eq!(e.x, 0);
        assert_eq!(crt_solve(&l, &[]).unwrap(), CrtOutcome::Solved { x: 0 });
    }

    #[test]
    fn kaarli_examples() {
        let l = zn_congruences(12);
        let id: BTreeMap<usize, usize> = [(0, 0), (1, 1)].into();
        let e = kaarli_extend(&l, &id, 5).unwrap();
        assert!(preserves_all(&l, &e.map).is_none());
        assert!(!e.meet_closure_added);
        let constant: BTreeMap<usize, usize> = [(0, 7), (3, 7), (8, 7)].into();
        assert_eq!(kaarli_extend(&l, &constant, 5).unwrap().x, 7);
        let broken: BTreeMap<usize, usize> = [(0, 0), (2, 1)].into();
        assert!(matches!(
            kaarli_extend(&l, &broken, 5),
            Err(Error::PreservationViolated(_))
        ));
    }

    #[test]
    fn residuated_examples() {
        // Boolean lattice on {a, b}: ∅, {a}, {b}, {a,b}
        let names: Vec<String> = ["0", "a", "b", "ab"].map(String::from).to_vec();
        let leq: Vec<Vec<bool>> = (0..4usize)
            .map(|x| (0..4usize).map(|y| x & y == x).collect())
            .collect();
        let d = residuated_distance(names, leq).unwrap();
        for x in 0..4 {
            for y in 0..4 {
                assert_eq!(d[x][y], x ^ y);
            }
            assert_eq!(d[0][x], x);
        }
        // M3: 0 < a, b, c < 1
        let names: Vec<String> = ["0", "a", "b", "c", "1"].map(String::from).to_vec();
        let leq: Vec<Vec<bool>> = (0..5)
            .map(|x| (0..5).map(|y| x == y || x == 0 || y == 4).collect())
            .collect();
        assert!(matches!(
            residuated_distance(names, leq),
            Err(Error::NotResiduated(_, _))
        ));
        // not a lattice
        let names: Vec<String> = ["0", "a", "b"].map(String::from).to_vec();
        let leq = vec![
            vec![true, true, true],
            vec![false, true, false],
            vec![false, false, true],
        ];
        assert!(matches!(
            residuated_distance(names, leq),
            Err(Error::NotALattice(_))
        ));
    }

    #[test]
    fn orthogonal_examples() {
        assert_eq!(orthogonal_family_search(2, None).unwrap().size, 1);
        let three = orthogonal_family_search(3, None).unwrap();
        assert_eq!(three.size, 3);
        assert_eq!(
            three.family.iter().cloned().collect::<BTreeSet<_>>(),
            pairs3().into_iter().collect()
        );
        let four = orthogonal_family_search(4, None).unwrap();
        assert!(four.size >= 3);
        for a in &four.family {
            for b in &four.family {
                if a != b {
                    assert!(a.is_orthogonal(b).unwrap());
                }
            }
        }
        assert_eq!(orthogonal_family_search(4, Some(2)).unwrap().size, 3);
        assert!(orthogonal_family_search(9, None).is_err());
        assert!(orthogonal_family_search(4, Some(3)).is_err());
    }

    /// Maximum family size by exhaustive subset search, for tiny n.
    fn brute_orthogonal(n: usize) -> usize {
        let nodes: Vec<Partition> = Partition::all(n)
            .into_iter()
            .filter(|p| !p.is_identity())
            .collect();
        let m = nodes.len();
        let mut best = 0;
        for mask in 1u64..(1 << m) {
            let members: Vec<usize> = (0..m).filter(|&i| mask >> i & 1 == 1).collect();
            if members.len() > best
                && members.iter().all(|&i| {
                    members
                        .iter()
                        .all(|&j| i == j || nodes[i].is_orthogonal(&nodes[j]).unwrap())
                })
            {
                best = members.len();
            }
        }
        best
    }

    #[test]
    fn orthogonal_matches_brute_force() {
        for n in 1..=4 {
            assert_eq!(
                orthogonal_family_search(n, None).unwrap().size,
                brute_orthogonal(n),
                "n = {n}"
            );
        }
    }

    fn random_lattice() -> impl Strategy<Value = Vec<Partition>> {
        (3usize..=6).prop_flat_map(|n| {
            prop::collection::vec(prop::collection::vec(0u8..3, n), 1..=3).prop_map(move |gens| {
                let gens: Vec<Partition> = gens.iter().map(|l| Partition::from_labels(l)).collect();
                sublattice_closure(&gens, 64).unwrap_or(gens)
            })
        })
    }

    fn systems(l: &[Partition], n: usize, size: usize) -> Vec<Vec<(usize, Partition)>> {
        let items: Vec<(usize, Partition)> = (0..n)
            .flat_map(|a| l.iter().map(move |t| (a, t.clone())))
            .collect();
        let mut out = Vec::new();
        for i in 0..items.len() {
            if size == 2 {
                for j in i..items.len() {
                    out.push(vec![items[i].clone(), items[j].clone()]);
                }
            } else {
                for j in i..items.len() {
                    for k in j..items.len() {
                        out.push(vec![items[i].clone(), items[j].clone(), items[k].clone()]);
                    }
                }
            }
        }
        out
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn crt_condition_characterises_arithmetical(l in random_lattice()) {
            prop_assume!(check_sublattice(&l).is_ok() && l.len() <= 8);
            let n = l[0].len();
            let arithmetical = is_arithmetical(&l).unwrap();
            let mut crt_holds = true;
            for size in [2, 3] {
                for sys in systems(&l, n, size) {
                    let out = crt_solve(&l, &sys).unwrap();
                    if out == CrtOutcome::NoSolution {
                        crt_holds = false;
                    }
                    if arithmetical {
                        prop_assert!(out != CrtOutcome::NoSolution);
                    }
                }
            }
            prop_assert_eq!(arithmetical, crt_holds);
        }

        #[test]
        fn kaarli_extension_reverifies(raw in prop::collection::vec(0usize..12, 12), domain in prop::collection::btree_set(0usize..12, 1..5), z in 0usize..12) {
            let l = zn_congruences(12);
            prop_assume!(!domain.contains(&z));
            // restrict a polynomial-like preserving map: x ↦ a + b x mod 12
            let (a, b) = (raw[0], raw[1]);
            let f: BTreeMap<usize, usize> = domain.iter().map(|&x| (x, (a + b * x) % 12)).collect();
            let e = kaarli_extend(&l, &f, z).unwrap();
            prop_assert!(preserves_all(&l, &e.map).is_none());
        }
    }
}
