//! Extending congruence-preserving partial maps on ℤ.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Least nonnegative `x` with `x ≡ a_i (mod m_i)` for all `i`, together with
/// the lcm of the moduli. Moduli are taken in absolute value; a zero modulus
/// pins `x` exactly. `None` if the system has no solution.
pub fn crt(system: &[(BigInt, BigInt)]) -> Option<(BigInt, BigInt)> {
    let mut x = BigInt::zero();
    let mut m = BigInt::one();
    let mut exact: Option<BigInt> = None;
    for (a, modulus) in system {
        let n = modulus.abs();
        if n.is_zero() {
            match &exact {
                Some(e) if e != a => return None,
                _ => exact = Some(a.clone()),
            }
            continue;
        }
        let g = m.extended_gcd(&n);
        let diff = a - &x;
        if !(&diff % &g.gcd).is_zero() {
            return None;
        }
        let step = &n / &g.gcd;
        let t = (&diff / &g.gcd * &g.x).mod_floor(&step);
        x += &m * t;
        m *= step;
        x = x.mod_floor(&m);
    }
    match exact {
        Some(e) => (e.clone() - &x).is_multiple_of(&m).then_some((e, BigInt::zero())),
        None => Some((x, m)),
    }
}

/// First pair `a, b` of the domain with `(a − b) ∤ (f(a) − f(b))`.
pub fn preservation_failure(f: &BTreeMap<BigInt, BigInt>) -> Option<(BigInt, BigInt)> {
    for (a, fa) in f {
        for (b, fb) in f.range(a..).skip(1) {
            if !(fa - fb).is_multiple_of(&(a - b)) {
                return Some((a.clone(), b.clone()));
            }
        }
    }
    None
}

/// A value `v` with `(z − a) | (v − f(a))` for every `a` in the domain: the
/// least nonnegative solution of the congruences.
pub fn extend_congruence_map(f: &BTreeMap<BigInt, BigInt>, z: &BigInt) -> Result<BigInt> {
    if f.contains_key(z) {
        return Err(Error::Malformed(format!("{z} is already in the domain")));
    }
    if let Some((a, b)) = preservation_failure(f) {
        return Err(Error::PreservationViolated(format!("{a} − {b} does not divide f({a}) − f({b})")));
    }
    let system: Vec<(BigInt, BigInt)> = f.iter().map(|(a, fa)| (fa.clone(), z - a)).collect();
    crt(&system)
        .map(|(v, _)| v)
        .ok_or_else(|| Error::Internal("pairwise compatible system has no solution".into()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn map(pairs: &[(i64, i64)]) -> BTreeMap<BigInt, BigInt> {
        pairs.iter().map(|&(a, b)| (a.into(), b.into())).collect()
    }

    #[test]
    fn extension_examples() {
        let z = BigInt::from(1);
        assert_eq!(extend_congruence_map(&map(&[(0, 0), (2, 4)]), &z).unwrap(), BigInt::from(0));
        assert_eq!(extend_congruence_map(&map(&[(0, 1), (3, 7)]), &z).unwrap(), BigInt::from(1));
        let squares = map(&[(0, 0), (1, 1), (2, 4)]);
        assert_eq!(extend_congruence_map(&squares, &BigInt::from(5)).unwrap(), BigInt::from(25));
        assert!(matches!(
            extend_congruence_map(&map(&[(0, 0), (2, 1)]), &z),
            Err(Error::PreservationViolated(_))
        ));
        assert!(matches!(extend_congruence_map(&map(&[(1, 0)]), &z), Err(Error::Malformed(_))));
    }

    #[test]
    fn crt_against_scan() {
        for m1 in 1..8i64 {
            for m2 in 1..8i64 {
                for a1 in 0..m1 {
                    for a2 in 0..m2 {
                        let sys = [(a1.into(), m1.into()), (a2.into(), m2.into())];
                        let lcm = m1.lcm(&m2);
                        let scan = (0..lcm).find(|x| (x - a1) % m1 == 0 && (x - a2) % m2 == 0);
                        assert_eq!(crt(&sys), scan.map(|x| (BigInt::from(x), BigInt::from(lcm))));
                    }
                }
            }
        }
    }
}
