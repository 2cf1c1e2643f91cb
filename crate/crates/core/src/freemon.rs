//! Unique factorization of nonempty final segments under concatenation.

use std::collections::{BTreeMap, BTreeSet};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::segment::FinalSegment;
use crate::word::Word;

/// Bound on the number of candidate left factors examined per segment.
pub const CANDIDATE_GUARD: usize = 1 << 16;

/// Candidate left factors: antichains of nonempty proper prefixes of the
/// generators that contain a prefix of every generator.
fn left_candidates(f: &FinalSegment) -> Result<Vec<Vec<Word>>> {
    let alphabet = f.alphabet();
    let gens = f.generators();
    let prefixes: Vec<Word> = gens
        .iter()
        .flat_map(|g| (1..g.len()).map(move |i| g.split_at(i).0))
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let mut out = Vec::new();
    let mut chosen: Vec<usize> = Vec::new();
    let mut visited = 0usize;
    fn walk(
        i: usize,
        prefixes: &[Word],
        gens: &[Word],
        chosen: &mut Vec<usize>,
        out: &mut Vec<Vec<Word>>,
        visited: &mut usize,
        embeds: &dyn Fn(&Word, &Word) -> bool,
    ) -> Result<()> {
        *visited += 1;
        if *visited > CANDIDATE_GUARD {
            return Err(Error::SizeGuard(format!("more than {CANDIDATE_GUARD} candidate factors")));
        }
        if i == prefixes.len() {
            let covers = gens.iter().all(|g| chosen.iter().any(|&c| g.letters().starts_with(prefixes[c].letters())));
            if !chosen.is_empty() && covers {
                out.push(chosen.iter().map(|&c| prefixes[c].clone()).collect());
            }
            return Ok(());
        }
        let p = &prefixes[i];
        if chosen.iter().all(|&c| !embeds(&prefixes[c], p) && !embeds(p, &prefixes[c])) {
            chosen.push(i);
            walk(i + 1, prefixes, gens, chosen, out, visited, embeds)?;
            chosen.pop();
        }
        walk(i + 1, prefixes, gens, chosen, out, visited, embeds)
    }
    let embeds = |u: &Word, v: &Word| alphabet.subword_leq(u, v).unwrap_or(false);
    walk(0, &prefixes, gens, &mut chosen, &mut out, &mut visited, &embeds)?;
    Ok(out)
}

/// The least `h` with `F ≤ G ⊕ h`, restricted to suffixes of the generators
/// of `F`; when some `H` has `G ⊕ H = F` this is that `H`.
fn partner(f: &FinalSegment, g: &[Word]) -> Result<FinalSegment> {
    let suffixes: BTreeSet<Word> =
        f.generators().iter().flat_map(|w| (1..w.len()).map(move |i| w.split_at(i).1)).collect();
    let words = suffixes.into_iter().filter(|s| g.iter().all(|p| f.contains(&p.concat(s)))).collect();
    FinalSegment::new(f.alphabet().clone(), words)
}

/// Every pair `(G, H)` of segments other than `0` with `G ⊕ H = F`.
pub fn decompose_once(f: &FinalSegment) -> Result<Vec<(FinalSegment, FinalSegment)>> {
    if f.is_empty() {
        return Err(Error::EmptySegment);
    }
    let candidates = left_candidates(f)?;
    let pairs: Vec<Option<(FinalSegment, FinalSegment)>> = candidates
        .into_par_iter()
        .map(|g| -> Result<Option<(FinalSegment, FinalSegment)>> {
            let h = partner(f, &g)?;
            if h.is_empty() || h.is_zero() {
                return Ok(None);
            }
            let g = FinalSegment::new(f.alphabet().clone(), g)?;
            Ok((g.oplus(&h)? == *f).then_some((g, h)))
        })
        .collect::<Result<_>>()?;
    Ok(pairs.into_iter().flatten().collect())
}

/// Not `0` and not a product of two segments other than `0`. The empty
/// segment is irreducible.
pub fn is_irreducible(f: &FinalSegment) -> Result<bool> {
    if f.is_empty() {
        return Ok(true);
    }
    Ok(!f.is_zero() && decompose_once(f)?.is_empty())
}

/// The irreducible factors of `F` from left to right; `0` has none.
pub fn factorize(f: &FinalSegment) -> Result<Vec<FinalSegment>> {
    if f.is_empty() {
        return Err(Error::EmptySegment);
    }
    if f.is_zero() {
        return Ok(Vec::new());
    }
    let out = match decompose_once(f)?.into_iter().next() {
        None => vec![f.clone()],
        Some((g, h)) => {
            let mut left = factorize(&g)?;
            left.extend(factorize(&h)?);
            left
        }
    };
    let product = out.iter().try_fold(FinalSegment::zero(f.alphabet().clone()), |acc, x| acc.oplus(x))?;
    if product != *f {
        return Err(Error::Internal("factors do not recompose to the input".into()));
    }
    Ok(out)
}

/// The irreducible sequences produced by every maximal decomposition tree.
pub fn all_factorizations(f: &FinalSegment) -> Result<BTreeSet<Vec<Vec<Word>>>> {
    let mut memo = BTreeMap::new();
    all_rec(f, &mut memo)
}

fn all_rec(
    f: &FinalSegment,
    memo: &mut BTreeMap<Vec<Word>, BTreeSet<Vec<Vec<Word>>>>,
) -> Result<BTreeSet<Vec<Vec<Word>>>> {
    if let Some(done) = memo.get(f.generators()) {
        return Ok(done.clone());
    }
    if f.is_empty() {
        return Err(Error::EmptySegment);
    }
    let mut out = BTreeSet::new();
    if f.is_zero() {
        out.insert(Vec::new());
    } else {
        let pairs = decompose_once(f)?;
        if pairs.is_empty() {
            out.insert(vec![f.generators().to_vec()]);
        }
        for (g, h) in pairs {
            let left = all_rec(&g, memo)?;
            let right = all_rec(&h, memo)?;
            for l in &left {
                for r in &right {
                    out.insert(l.iter().chain(r).cloned().collect());
                }
            }
        }
    }
    memo.insert(f.generators().to_vec(), out.clone());
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automaton::Side;
    use crate::word::{Alphabet, Word};

    fn seg(words: &[&str]) -> FinalSegment {
        FinalSegment::signed(words)
    }

    #[test]
    fn decompose_examples() {
        assert_eq!(decompose_once(&seg(&["+-"])).unwrap(), vec![(seg(&["+"]), seg(&["-"]))]);
        assert!(decompose_once(&seg(&["+"])).unwrap().is_empty());
        assert!(decompose_once(&seg(&["+-", "-+"])).unwrap().is_empty());
        let empty = FinalSegment::empty(Alphabet::signed());
        assert_eq!(decompose_once(&empty), Err(Error::EmptySegment));
        let three = decompose_once(&seg(&["+++"])).unwrap();
        assert_eq!(three, vec![(seg(&["+"]), seg(&["++"])), (seg(&["++"]), seg(&["+"]))]);
    }

    #[test]
    fn irreducible_examples() {
        assert!(!is_irreducible(&seg(&[""])).unwrap());
        assert!(is_irreducible(&seg(&["-"])).unwrap());
        assert!(is_irreducible(&FinalSegment::empty(Alphabet::signed())).unwrap());
        assert!(!is_irreducible(&seg(&["++"])).unwrap());
    }

    #[test]
    fn factorize_examples() {
        assert_eq!(factorize(&seg(&["++"])).unwrap(), vec![seg(&["+"]), seg(&["+"])]);
        assert_eq!(factorize(&seg(&["+"])).unwrap(), vec![seg(&["+"])]);
        assert_eq!(factorize(&seg(&["+-"])).unwrap(), vec![seg(&["+"]), seg(&["-"])]);
        // ↑{+, -} · ↑{+-, -+}
        let f = seg(&["+"]).meet(&seg(&["-"])).unwrap().oplus(&seg(&["+-", "-+"])).unwrap();
        assert_eq!(factorize(&f).unwrap(), vec![seg(&["+", "-"]), seg(&["+-", "-+"])]);
    }

    #[test]
    fn partner_is_the_residual() {
        let f = seg(&["++-", "+-+"]);
        for g in left_candidates(&f).unwrap() {
            let gs = FinalSegment::new(f.alphabet().clone(), g.clone()).unwrap();
            let h = partner(&f, &g).unwrap();
            if gs.oplus(&h).unwrap() == f {
                assert_eq!(h, f.residual(&gs, Side::Left).unwrap());
            }
        }
    }

    #[test]
    fn three_letter_alphabet() {
        let a = Alphabet::plain(["a", "b", "c"]).unwrap();
        let f = FinalSegment::parse(a.clone(), &["abc", "acb"]).unwrap();
        let factors = factorize(&f).unwrap();
        assert_eq!(factors, vec![
            FinalSegment::parse(a.clone(), &["a"]).unwrap(),
            FinalSegment::parse(a, &["bc", "cb"]).unwrap()
        ]);
        assert_eq!(all_factorizations(&f).unwrap().len(), 1);
    }

    #[test]
    fn brute_force_decompositions_on_short_words() {
        // every pair of antichains of words of length ≤ 2 whose product is F
        let words: Vec<Word> = crate::word::words_up_to(2, 2).filter(|w| !w.is_empty()).collect();
        let a = Alphabet::signed();
        let antichains: Vec<FinalSegment> = (1u32..1 << words.len())
            .filter_map(|mask| {
                let ws: Vec<Word> = (0..words.len()).filter(|i| mask >> i & 1 == 1).map(|i| words[i].clone()).collect();
                let s = FinalSegment::new(a.clone(), ws.clone()).unwrap();
                (s.generators().len() == ws.len()).then_some(s)
            })
            .collect();
        for f in antichains.iter().take(40) {
            let mut expected: Vec<(FinalSegment, FinalSegment)> = Vec::new();
            for g in &antichains {
                for h in &antichains {
                    if g.oplus(h).unwrap() == *f {
                        expected.push((g.clone(), h.clone()));
                    }
                }
            }
            let mut got = decompose_once(f).unwrap();
            got.sort_by(|x, y| (x.0.generators(), x.1.generators()).cmp(&(y.0.generators(), y.1.generators())));
            expected.sort_by(|x, y| (x.0.generators(), x.1.generators()).cmp(&(y.0.generators(), y.1.generators())));
            // factors of F may need longer words than 2 only if F does
            if f.max_generator_len() <= 2 {
                assert_eq!(got, expected, "{:?}", f.generators());
            }
        }
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn antichain() -> impl Strategy<Value = FinalSegment> {
            proptest::collection::vec(proptest::collection::vec(0u8..2, 0..=3), 1..=4).prop_map(|ws| {
                let words = ws.into_iter().map(|w| Word::from_letters(w.into_iter().collect())).collect();
                FinalSegment::new(Alphabet::signed(), words).unwrap()
            })
        }

        proptest! {
            #[test]
            fn antichain_product_is_a_monoid(a in antichain(), b in antichain(), c in antichain()) {
                let zero = FinalSegment::zero(Alphabet::signed());
                prop_assert_eq!(a.oplus(&b).unwrap().oplus(&c).unwrap(), a.oplus(&b.oplus(&c).unwrap()).unwrap());
                prop_assert_eq!(&zero.oplus(&a).unwrap(), &a);
                prop_assert_eq!(&a.oplus(&zero).unwrap(), &a);
            }

            #[test]
            fn factors_of_products(a in antichain(), b in antichain()) {
                let f = a.oplus(&b).unwrap();
                let mut expected = factorize(&a).unwrap();
                expected.extend(factorize(&b).unwrap());
                prop_assert_eq!(factorize(&f).unwrap(), expected);
            }
        }
    }
}
