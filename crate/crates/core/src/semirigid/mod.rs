//! Systems of equivalence relations whose only preserving self-maps are the
//! identity and the constants.

pub mod plane;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::equiv::Partition;
use crate::error::{Error, Result};

pub use plane::{
    band_truncation, has_center_of_symmetry, is_monogenic, plane_system, t_n, t_n2, t_n2_prime, triangles, PlanePoint,
    PlaneSet, Triangle,
};

/// Default carrier bound for the backtracking search.
pub const SEARCH_GUARD: usize = 12;
/// Carrier bound for exhaustive enumeration of all `n^n` maps.
pub const EXHAUSTIVE_GUARD: usize = 7;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EquivSystem {
    pub n: usize,
    pub relations: Vec<Partition>,
}

impl EquivSystem {
    pub fn new(n: usize, relations: Vec<Partition>) -> Result<EquivSystem> {
        if let Some(r) = relations.iter().find(|r| r.len() != n) {
            return Err(Error::CarrierMismatch(n, r.len()));
        }
        Ok(EquivSystem { n, relations })
    }

    /// Accepts `{"n": .., "relations": [..]}` or a bare list of partitions.
    pub fn from_json(s: &str) -> Result<EquivSystem> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Doc {
            Full { n: usize, relations: Vec<Partition> },
            Bare(Vec<Partition>),
        }
        match serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))? {
            Doc::Full { n, relations } => EquivSystem::new(n, relations),
            Doc::Bare(relations) => {
                let n = relations.first().map(|r| r.len()).ok_or_else(|| Error::Parse("empty system".into()))?;
                EquivSystem::new(n, relations)
            }
        }
    }

    pub fn preserved_by(&self, f: &[usize]) -> bool {
        f.len() == self.n && self.relations.iter().all(|r| r.preserved_by(f))
    }
}

fn is_trivial(f: &[usize]) -> bool {
    f.iter().enumerate().all(|(i, &v)| i == v) || f.windows(2).all(|w| w[0] == w[1])
}

type Dom = u64;

struct Csp<'a> {
    n: usize,
    // for each relation, the block mask containing each point
    block_of: Vec<Vec<Dom>>,
    sys: &'a EquivSystem,
}

impl<'a> Csp<'a> {
    fn new(sys: &'a EquivSystem) -> Csp<'a> {
        let n = sys.n;
        let block_of = sys
            .relations
            .iter()
            .map(|r| (0..n).map(|x| (0..n).filter(|&y| r.related(x, y)).fold(0, |m, y| m | 1 << y)).collect())
            .collect();
        Csp { n, block_of, sys }
    }

    /// Arc consistency: for `x ρ y`, `f(y)` lies in a `ρ`-block meeting `D[x]`.
    fn propagate(&self, dom: &mut [Dom]) -> bool {
        loop {
            let mut changed = false;
            for blocks in &self.block_of {
                for x in 0..self.n {
                    let reach = bits(dom[x]).fold(0, |m, a| m | blocks[a]);
                    for y in bits(blocks[x]) {
                        let d = dom[y] & reach;
                        if d == 0 {
                            return false;
                        }
                        if d != dom[y] {
                            dom[y] = d;
                            changed = true;
                        }
                    }
                }
            }
            if !changed {
                return true;
            }
        }
    }

    fn solve(&self, mut dom: Vec<Dom>) -> Option<Vec<usize>> {
        if !self.propagate(&mut dom) {
            return None;
        }
        let open = (0..self.n).filter(|&i| dom[i].count_ones() > 1).min_by_key(|&i| dom[i].count_ones());
        match open {
            None => {
                let f: Vec<usize> = dom.iter().map(|d| d.trailing_zeros() as usize).collect();
                debug_assert!(self.sys.preserved_by(&f));
                Some(f)
            }
            Some(i) => bits(dom[i]).find_map(|v| {
                let mut next = dom.clone();
                next[i] = 1 << v;
                self.solve(next)
            }),
        }
    }
}

fn bits(mut m: Dom) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        (m != 0).then(|| {
            let b = m.trailing_zeros() as usize;
            m &= m - 1;
            b
        })
    })
}

/// Case split making every branch neither the identity nor constant: `x` is
/// the least point moved, `f(x) = v`, and when that alone does not force two
/// distinct values, `y` is the least later point with `f(y) ≠ v`.
fn branches(n: usize) -> Vec<Vec<Dom>> {
    let all: Dom = if n == 64 { u64::MAX } else { (1 << n) - 1 };
    let mut out = Vec::new();
    for x in 0..n {
        for v in (0..n).filter(|&v| v != x) {
            let mut dom = vec![all; n];
            for (i, d) in dom.iter_mut().enumerate().take(x) {
                *d = 1 << i;
            }
            dom[x] = 1 << v;
            // f(0) = 0 ≠ v or f(1) = 1 ≠ v already gives two values
            let forced = (x >= 1 && v != 0) || x >= 2;
            if forced {
                out.push(dom);
                continue;
            }
            for y in x + 1..n {
                let mut d = dom.clone();
                for i in x + 1..y {
                    d[i] = 1 << v;
                }
                d[y] = all & !(1 << v);
                out.push(d);
            }
        }
    }
    out
}

/// A preserving self-map other than the identity and the constants, found
/// by backtracking with propagation; `None` means the system is semirigid.
pub fn semirigid_witness(sys: &EquivSystem, guard: usize) -> Result<Option<Vec<usize>>> {
    if sys.n > guard.min(64) {
        return Err(Error::SizeGuard(format!("carrier of {} points; at most {}", sys.n, guard.min(64))));
    }
    let csp = Csp::new(sys);
    let witness = branches(sys.n).into_par_iter().find_map_first(|dom| csp.solve(dom));
    if let Some(f) = &witness {
        if is_trivial(f) || !sys.preserved_by(f) {
            return Err(Error::Internal(format!("search returned {f:?}")));
        }
    }
    Ok(witness)
}

pub fn is_semirigid(sys: &EquivSystem) -> Result<bool> {
    Ok(semirigid_witness(sys, SEARCH_GUARD)?.is_none())
}

/// Number of preserving self-maps, by enumerating all `n^n` maps.
pub fn count_preserving_maps(sys: &EquivSystem) -> Result<u64> {
    let n = sys.n;
    if n > EXHAUSTIVE_GUARD {
        return Err(Error::SizeGuard(format!("{n}^{n} maps; at most {EXHAUSTIVE_GUARD} points")));
    }
    let total = (n as u64).pow(n as u32);
    Ok((0..total)
        .into_par_iter()
        .filter(|&code| {
            let f: Vec<usize> = (0..n).scan(code, |c, _| {
                let d = (*c % n as u64) as usize;
                *c /= n as u64;
                Some(d)
            }).collect();
            sys.preserved_by(&f)
        })
        .count() as u64)
}

/// Semirigid by exhaustion: the preserving maps are exactly the identity and
/// the `n` constants.
pub fn is_semirigid_exhaustive(sys: &EquivSystem) -> Result<bool> {
    let expected = if sys.n <= 1 { sys.n as u64 } else { sys.n as u64 + 1 };
    Ok(count_preserving_maps(sys)? == expected)
}

/// Zádori's three relations on `{0, …, n−1}`. For even `n = 2k + 2`:
///
/// ρ = {0}, {1 … k}, {k+1 … 2k+1};
/// σ = {0, 1, k+1}, {i, k+i} for 2 ≤ i ≤ k;
/// τ = {i, k+1+i} for 1 ≤ i < k, {0, k, 2k+1};
///
/// unlisted points are singletons. For odd `n` the `n + 1` system loses its
/// point 0 and `i` becomes `i − 1`.
pub fn zadori_system(n: usize) -> Result<EquivSystem> {
    if n < 3 || n == 4 {
        return Err(Error::NoZadoriSystem(n));
    }
    let even = if n.is_multiple_of(2) { n } else { n + 1 };
    let k = (even - 2) / 2;
    let rho = vec![vec![0], (1..=k).collect(), (k + 1..=2 * k + 1).collect()];
    let mut sigma = vec![vec![0, 1, k + 1]];
    sigma.extend((2..=k).map(|i| vec![i, k + i]));
    let mut tau: Vec<Vec<usize>> = (1..k).map(|i| vec![i, k + 1 + i]).collect();
    tau.push(vec![0, k, 2 * k + 1]);
    let build = |blocks: Vec<Vec<usize>>| -> Result<Partition> {
        let mut blocks = blocks;
        let covered: Vec<usize> = blocks.iter().flatten().copied().collect();
        blocks.extend((0..even).filter(|x| !covered.contains(x)).map(|x| vec![x]));
        if n == even {
            return Partition::from_blocks(n, &blocks);
        }
        let shifted: Vec<Vec<usize>> = blocks
            .iter()
            .map(|b| b.iter().filter(|&&x| x != 0).map(|&x| x - 1).collect::<Vec<_>>())
            .filter(|b| !b.is_empty())
            .collect();
        Partition::from_blocks(n, &shifted)
    };
    EquivSystem::new(n, vec![build(rho)?, build(sigma)?, build(tau)?])
}

/// A bijection `φ` of the carriers and a bijection `π` of the relations with
/// `x ρ_i y ⇔ φ(x) ρ'_{π(i)} φ(y)`.
pub fn systems_isomorphic(a: &EquivSystem, b: &EquivSystem) -> Option<(Vec<usize>, Vec<usize>)> {
    let n = a.n;
    if n != b.n || a.relations.len() != b.relations.len() {
        return None;
    }
    permutations(a.relations.len()).into_iter().find_map(|pi| {
        let profile = |s: &EquivSystem, order: &[usize], x: usize| -> Vec<usize> {
            order.iter().map(|&i| (0..n).filter(|&y| s.relations[i].related(x, y)).count()).collect()
        };
        let identity: Vec<usize> = (0..a.relations.len()).collect();
        let pa: Vec<Vec<usize>> = (0..n).map(|x| profile(a, &identity, x)).collect();
        let pb: Vec<Vec<usize>> = (0..n).map(|x| profile(b, &pi, x)).collect();
        let mut phi = vec![usize::MAX; n];
        let mut used = vec![false; n];
        extend_iso(a, b, &pi, &pa, &pb, 0, &mut phi, &mut used).then_some((phi, pi))
    })
}

#[allow(clippy::too_many_arguments)]
fn extend_iso(
    a: &EquivSystem,
    b: &EquivSystem,
    pi: &[usize],
    pa: &[Vec<usize>],
    pb: &[Vec<usize>],
    x: usize,
    phi: &mut [usize],
    used: &mut [bool],
) -> bool {
    if x == a.n {
        return true;
    }
    for y in 0..a.n {
        if used[y] || pa[x] != pb[y] {
            continue;
        }
        let consistent = (0..x).all(|z| {
            a.relations.iter().zip(pi).all(|(r, &j)| r.related(x, z) == b.relations[j].related(y, phi[z]))
        });
        if consistent {
            phi[x] = y;
            used[y] = true;
            if extend_iso(a, b, pi, pa, pb, x + 1, phi, used) {
                return true;
            }
            used[y] = false;
        }
    }
    phi[x] = usize::MAX;
    false
}

fn permutations(k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![Vec::new()];
    }
    permutations(k - 1)
        .into_iter()
        .flat_map(|p| {
            (0..k).map(move |i| {
                let mut q = p.clone();
                q.insert(i, k - 1);
                q
            })
        })
        .collect()
}
