//! Systems of equivalence relations as ultrametric spaces.

use std::sync::Arc;

use super::partition::Partition;
use crate::error::{Error, Result};
use crate::gms::{Elem, FiniteGms, MonoidTable};

pub const MAX_INDEX_SET: usize = 8;

/// Subsets of `{0, …, k-1}` as bitmasks, ordered by inclusion, `⊕ = ∪`,
/// identity involution.
pub fn powerset_monoid(k: usize) -> Result<MonoidTable> {
    if k > MAX_INDEX_SET {
        return Err(Error::SizeGuard(format!(
            "index set of size {k}; at most {MAX_INDEX_SET}"
        )));
    }
    let m = 1usize << k;
    let names = (0..m)
        .map(|s| {
            let items: Vec<String> = (0..k)
                .filter(|i| s >> i & 1 == 1)
                .map(|i| i.to_string())
                .collect();
            format!("{{{}}}", items.join(","))
        })
        .collect();
    let leq = (0..m)
        .map(|a| (0..m).map(|b| a & b == a).collect())
        .collect();
    let oplus = (0..m).map(|a| (0..m).map(|b| a | b).collect()).collect();
    MonoidTable::new(names, leq, oplus, (0..m).collect(), 0)
}

/// `d(x, y) = {i : (x, y) ∉ ρ_i}` over the powerset of the index set. The flag
/// reports whether the relations intersect to Δ, i.e. whether separation holds.
pub fn ultrametric_from_system(relations: &[Partition]) -> Result<(FiniteGms, bool)> {
    let n = relations.first().map_or(0, Partition::len);
    if let Some(p) = relations.iter().find(|p| p.len() != n) {
        return Err(Error::CarrierMismatch(n, p.len()));
    }
    let monoid = Arc::new(powerset_monoid(relations.len())?);
    let dist = (0..n)
        .map(|x| {
            (0..n)
                .map(|y| {
                    relations
                        .iter()
                        .enumerate()
                        .filter(|(_, r)| !r.related(x, y))
                        .fold(0, |m, (i, _)| m | 1 << i)
                })
                .collect()
        })
        .collect();
    let separated =
        (0..n).all(|x| (0..n).all(|y| x == y || relations.iter().any(|r| !r.related(x, y))));
    let space = FiniteGms::new((0..n).map(|i| i.to_string()).collect(), monoid, dist)?;
    Ok((space, separated))
}

/// The relations back from a pre-ultrametric space over a powerset: `ρ_i` relates
/// `x, y` when `i ∉ d(x, y)`.
pub fn system_from_ultrametric(space: &FiniteGms, k: usize) -> Result<Vec<Partition>> {
    let n = space.len();
    (0..k)
        .map(|i| {
            let p = Partition::from_related(n, |x, y| space.d(x, y) >> i & 1 == 0);
            let exact =
                (0..n).all(|x| (0..n).all(|y| p.related(x, y) == (space.d(x, y) >> i & 1 == 0)));
            if exact {
                Ok(p)
            } else {
                Err(Error::AxiomViolation {
                    axiom: "triangle",
                    witness: format!("index {i} is not an equivalence"),
                })
            }
        })
        .collect()
}

/// `d(x, y) = x ∨ y` for `x ≠ y`: the largest ultrametric on a join-semilattice
/// monoid with `d(0, x) = x`.
pub fn join_ultrametric(monoid: Arc<MonoidTable>) -> Result<FiniteGms> {
    let n = monoid.len();
    let dist = (0..n)
        .map(|x| {
            (0..n)
                .map(|y| {
                    if x == y {
                        monoid.zero()
                    } else {
                        monoid.oplus(x, y)
                    }
                })
                .collect()
        })
        .collect();
    FiniteGms::new(monoid.names().to_vec(), monoid, dist)
}

/// `ℤ/n` with `d(a, b) = gcd(a - b, n)` valued in the divisors of `n` ordered by
/// reverse divisibility. Balls are cosets.
pub fn zn_ultrametric(n: usize) -> Result<FiniteGms> {
    let monoid = Arc::new(MonoidTable::divisor_lattice(n as u64)?);
    let index = |d: usize| monoid.element(&d.to_string()).expect("divisor");
    let dist = (0..n)
        .map(|a| {
            (0..n)
                .map(|b| index(num_integer::gcd((a + n - b) % n, n)))
                .collect()
        })
        .collect();
    FiniteGms::new(
        (0..n).map(|i| i.to_string()).collect(),
        monoid.clone(),
        dist,
    )
}

/// `≡_r = {(x, y) : d(x, y) ≤ r}`; `None` if it is not an equivalence.
pub fn threshold_relation(space: &FiniteGms, r: Elem) -> Option<Partition> {
    let n = space.len();
    let m = space.monoid();
    let p = Partition::from_related(n, |x, y| m.leq(space.d(x, y), r));
    (0..n)
        .all(|x| (0..n).all(|y| p.related(x, y) == m.leq(space.d(x, y), r)))
        .then_some(p)
}

/// Whether `≡_r ∘ ≡_s = ≡_s ∘ ≡_r = ≡_{r ∨ s}` for all `r, s`. For ultrametric
/// spaces this holds exactly when the space is convex.
pub fn thresholds_compose_as_joins(space: &FiniteGms) -> Result<bool> {
    let m = space.monoid();
    let k = m.len();
    let rel = (0..k)
        .map(|r| {
            threshold_relation(space, r)
                .ok_or_else(|| Error::Malformed("threshold is not an equivalence".into()))
        })
        .collect::<Result<Vec<_>>>()?;
    for r in 0..k {
        for s in 0..k {
            let j = m
                .join(r, s)
                .ok_or_else(|| Error::MissingJoin(format!("{} ∨ {}", m.name(r), m.name(s))))?;
            let target = rel[j].compose(&Partition::identity(space.len()))?;
            if rel[r].compose(&rel[s])? != target || rel[s].compose(&rel[r])? != target {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::equiv::lattice::zn_congruences;

    #[test]
    fn single_identity_relation() {
        let (g, sep) = ultrametric_from_system(&[Partition::identity(3)]).unwrap();
        assert!(sep);
        for x in 0..3 {
            for y in 0..3 {
                assert_eq!(g.d(x, y), usize::from(x != y));
            }
        }
        assert!(g.check_axioms().passes());
    }

    #[test]
    fn z6_two_relations() {
        let (g, sep) =
            ultrametric_from_system(&[Partition::modulo(6, 2), Partition::modulo(6, 3)]).unwrap();
        assert!(sep);
        assert_eq!(g.d(0, 3), 0b01);
        assert_eq!(g.monoid().name(g.d(0, 3)), "{0}");
        let back = system_from_ultrametric(&g, 2).unwrap();
        assert_eq!(back, vec![Partition::modulo(6, 2), Partition::modulo(6, 3)]);
        let (_, sep) = ultrametric_from_system(&[Partition::modulo(6, 2)]).unwrap();
        assert!(!sep);
    }

    #[test]
    fn divisor_spaces_satisfy_axioms() {
        let d12 = Arc::new(MonoidTable::divisor_lattice(12).unwrap());
        assert!(join_ultrametric(d12).unwrap().check_axioms().passes());
        let z12 = zn_ultrametric(12).unwrap();
        assert!(z12.check_axioms().passes());
        // balls are the cosets of the congruences
        let z = zn_congruences(12);
        for r in 0..z12.monoid().len() {
            let t = threshold_relation(&z12, r).unwrap();
            assert!(z.contains(&t));
        }
    }

    #[test]
    fn z12_thresholds_compose_as_joins() {
        let z12 = zn_ultrametric(12).unwrap();
        assert!(z12.is_convex().unwrap());
        assert!(thresholds_compose_as_joins(&z12).unwrap());
        // d_∨ on the divisor lattice is not convex and the law fails
        let d12 = join_ultrametric(Arc::new(MonoidTable::divisor_lattice(12).unwrap())).unwrap();
        assert_eq!(
            d12.is_convex().unwrap(),
            thresholds_compose_as_joins(&d12).unwrap()
        );
    }

    #[test]
    fn hom_iff_nonexpansive_on_systems() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..50 {
            let n = rng.gen_range(2..=5);
            let m = rng.gen_range(2..=5);
            let k = rng.gen_range(1..=3);
            let r: Vec<Partition> = (0..k)
                .map(|_| {
                    Partition::from_labels(&(0..n).map(|_| rng.gen_range(0..3)).collect::<Vec<_>>())
                })
                .collect();
            let s: Vec<Partition> = (0..k)
                .map(|_| {
                    Partition::from_labels(&(0..m).map(|_| rng.gen_range(0..3)).collect::<Vec<_>>())
                })
                .collect();
            let f: Vec<usize> = (0..n).map(|_| rng.gen_range(0..m)).collect();
            let hom = (0..k).all(|i| {
                (0..n).all(|x| (0..n).all(|y| !r[i].related(x, y) || s[i].related(f[x], f[y])))
            });
            let (er, _) = ultrametric_from_system(&r).unwrap();
            let (es, _) = ultrametric_from_system(&s).unwrap();
            let nonexp =
                (0..n).all(|x| (0..n).all(|y| es.monoid().leq(es.d(f[x], f[y]), er.d(x, y))));
            assert_eq!(hom, nonexp);
        }
    }
}
