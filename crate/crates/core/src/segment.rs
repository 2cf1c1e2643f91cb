//! The involutive quantale of final segments of the free monoid.
//!
//! A final segment is stored as its antichain of minimal words. Sets are
//! ordered by reverse inclusion, so `0 = Λ*` (generated by the empty word) is
//! the least element and the empty segment is the greatest.

use std::collections::{HashMap, VecDeque};
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use crate::automaton::{Automaton, Side, State};
use crate::error::{Error, Result};
use crate::word::{Alphabet, Letter, Word, MINUS, PLUS};

#[derive(Clone)]
pub struct FinalSegment {
    alphabet: Arc<Alphabet>,
    gens: Vec<Word>,
}

impl PartialEq for FinalSegment {
    fn eq(&self, other: &Self) -> bool {
        self.gens == other.gens
            && (Arc::ptr_eq(&self.alphabet, &other.alphabet) || self.alphabet == other.alphabet)
    }
}

impl Eq for FinalSegment {}

impl Hash for FinalSegment {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.gens.hash(state);
    }
}

impl fmt::Debug for FinalSegment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let gens: Vec<String> = self.gens.iter().map(|w| format!("{w:?}")).collect();
        write!(f, "↑{{{}}}", gens.join(","))
    }
}

impl fmt::Display for FinalSegment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let gens: Vec<String> = self
            .gens
            .iter()
            .map(|w| format!("{:?}", self.alphabet.format(w)))
            .collect();
        write!(f, "[{}]", gens.join(", "))
    }
}

/// Result of the MacNeille membership test.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MacNeille {
    pub member: bool,
    /// `(u, v)` with `u+v` and `u-v` in the segment but `uv` not.
    pub witness: Option<(Word, Word)>,
}

/// Keeps the minimal words of `words`, sorted shortlex.
fn minimize(alphabet: &Alphabet, mut words: Vec<Word>) -> Vec<Word> {
    words.sort();
    words.dedup();
    let mut out: Vec<Word> = Vec::with_capacity(words.len());
    // shortlex order puts every proper subword before its superwords
    for w in words {
        if !out.iter().any(|g| alphabet.embeds(g, &w)) {
            out.push(w);
        }
    }
    out
}

impl FinalSegment {
    /// The upward closure of `words`.
    pub fn new(alphabet: Arc<Alphabet>, words: Vec<Word>) -> Result<FinalSegment> {
        for w in &words {
            alphabet.check(w)?;
        }
        let gens = minimize(&alphabet, words);
        Ok(FinalSegment { alphabet, gens })
    }

    /// Segment over the signed alphabet; panics on letters other than `+`, `-`.
    pub fn signed(words: &[&str]) -> FinalSegment {
        let alphabet = Alphabet::signed();
        let words = words
            .iter()
            .map(|s| alphabet.parse(s).expect("signed word"))
            .collect();
        FinalSegment::new(alphabet, words).expect("signed words")
    }

    pub fn parse(alphabet: Arc<Alphabet>, words: &[&str]) -> Result<FinalSegment> {
        let parsed = words
            .iter()
            .map(|s| alphabet.parse(s))
            .collect::<Result<Vec<_>>>()?;
        FinalSegment::new(alphabet, parsed)
    }

    /// `0 = Λ*`.
    pub fn zero(alphabet: Arc<Alphabet>) -> FinalSegment {
        FinalSegment {
            alphabet,
            gens: vec![Word::empty()],
        }
    }

    /// The empty final segment, the top of the order.
    pub fn empty(alphabet: Arc<Alphabet>) -> FinalSegment {
        FinalSegment {
            alphabet,
            gens: Vec::new(),
        }
    }

    pub fn principal(alphabet: Arc<Alphabet>, w: Word) -> Result<FinalSegment> {
        FinalSegment::new(alphabet, vec![w])
    }

    pub fn alphabet(&self) -> &Arc<Alphabet> {
        &self.alphabet
    }

    pub fn generators(&self) -> &[Word] {
        &self.gens
    }

    pub fn is_zero(&self) -> bool {
        self.gens.len() == 1 && self.gens[0].is_empty()
    }

    pub fn is_empty(&self) -> bool {
        self.gens.is_empty()
    }

    pub fn max_generator_len(&self) -> usize {
        self.gens.iter().map(Word::len).max().unwrap_or(0)
    }

    pub fn contains(&self, w: &Word) -> bool {
        self.gens.iter().any(|g| self.alphabet.embeds(g, w))
    }

    pub fn automaton(&self) -> Automaton {
        Automaton::upset(self.alphabet.clone(), &self.gens)
    }

    pub fn from_automaton(a: &Automaton) -> Result<FinalSegment> {
        let gens = a.minimal_antichain()?;
        Ok(FinalSegment {
            alphabet: a.alphabet().clone(),
            gens,
        })
    }

    fn same_alphabet(&self, other: &FinalSegment) -> Result<()> {
        if Arc::ptr_eq(&self.alphabet, &other.alphabet) || self.alphabet == other.alphabet {
            Ok(())
        } else {
            Err(Error::AlphabetMismatch)
        }
    }

    /// `self ≤ other` iff `self ⊇ other` as sets.
    pub fn leq(&self, other: &FinalSegment) -> Result<bool> {
        self.same_alphabet(other)?;
        Ok(other.gens.iter().all(|g| self.contains(g)))
    }

    /// Set union.
    pub fn meet(&self, other: &FinalSegment) -> Result<FinalSegment> {
        self.same_alphabet(other)?;
        let words = self.gens.iter().chain(&other.gens).cloned().collect();
        Ok(FinalSegment {
            alphabet: self.alphabet.clone(),
            gens: minimize(&self.alphabet, words),
        })
    }

    /// Set intersection.
    pub fn join(&self, other: &FinalSegment) -> Result<FinalSegment> {
        self.same_alphabet(other)?;
        if self.is_zero() || other.is_empty() {
            return Ok(other.clone());
        }
        if other.is_zero() || self.is_empty() {
            return Ok(self.clone());
        }
        FinalSegment::from_automaton(&self.automaton().intersect(&other.automaton())?)
    }

    /// Concatenation `↑(X · Y)`.
    pub fn oplus(&self, other: &FinalSegment) -> Result<FinalSegment> {
        self.same_alphabet(other)?;
        let words = self
            .gens
            .iter()
            .flat_map(|u| other.gens.iter().map(move |v| u.concat(v)))
            .collect();
        Ok(FinalSegment {
            alphabet: self.alphabet.clone(),
            gens: minimize(&self.alphabet, words),
        })
    }

    pub fn involution(&self) -> FinalSegment {
        let words = self
            .gens
            .iter()
            .map(|w| self.alphabet.involute(w))
            .collect();
        FinalSegment {
            alphabet: self.alphabet.clone(),
            gens: minimize(&self.alphabet, words),
        }
    }

    pub fn is_self_dual(&self) -> bool {
        self.involution() == *self
    }

    /// Right residual `⌈V ⊕ -B⌉ = {u : u b ∈ V for all b ∈ B}` or the left
    /// residual `⌈-B ⊕ V⌉ = {u : b u ∈ V for all b ∈ B}`.
    ///
    /// Quantifying over the generators of `B` suffices since `V` is upward closed.
    pub fn residual(&self, b: &FinalSegment, side: Side) -> Result<FinalSegment> {
        self.same_alphabet(b)?;
        if b.is_empty() || self.is_zero() {
            return Ok(FinalSegment::zero(self.alphabet.clone()));
        }
        if b.is_zero() {
            return Ok(self.clone());
        }
        let v = self.automaton().determinize().minimize()?;
        let mut acc: Option<Automaton> = None;
        for g in &b.gens {
            let q = v.quotient(g, side);
            acc = Some(match acc {
                None => q,
                Some(a) => a.intersect(&q)?,
            });
        }
        FinalSegment::from_automaton(&acc.expect("B has generators"))
    }

    /// `d_H(p, q) = ⌈p̄ ⊕ -q̄⌉ ∨ ⌈-p ⊕ q⌉`, the least `r` with `p ≤ q ⊕ r̄` and `q ≤ p ⊕ r`.
    pub fn distance(&self, other: &FinalSegment) -> Result<FinalSegment> {
        let d = self.distance_unchecked(other)?;
        debug_assert_eq!(
            d.involution(),
            other.distance_unchecked(self)?,
            "d(p,q) must be the involute of d(q,p)"
        );
        Ok(d)
    }

    fn distance_unchecked(&self, other: &FinalSegment) -> Result<FinalSegment> {
        self.same_alphabet(other)?;
        let a = self
            .involution()
            .residual(&other.involution(), Side::Right)?;
        let b = other.residual(self, Side::Left)?;
        a.join(&b)
    }

    /// Membership in the MacNeille completion of `Λ*`, via the cancellation
    /// rule: `u+v ∈ Z` and `u-v ∈ Z` imply `uv ∈ Z`.
    ///
    /// For every state `q` reached by some `u`, look for a common suffix `v`
    /// leading `(q+, q-, q)` to (accept, accept, reject). The returned witness
    /// minimises `|u| + |v|`.
    pub fn macneille_member(&self) -> Result<MacNeille> {
        if !self.alphabet.is_signed() {
            return Err(Error::RequiresSignedAlphabet);
        }
        if self.is_zero() || self.is_empty() {
            return Ok(MacNeille {
                member: true,
                witness: None,
            });
        }
        let d = self.automaton().determinize().minimize()?;
        let step = |q: State, a: Letter| d.successors(q, a)[0];
        let accepting = |q: State| d.is_accepting(q);

        // shortest u reaching each state
        let n = d.num_states();
        let mut reach: Vec<Option<Word>> = vec![None; n];
        let start = d.initial()[0];
        reach[start as usize] = Some(Word::empty());
        let mut queue = VecDeque::from([start]);
        while let Some(q) = queue.pop_front() {
            for a in [PLUS, MINUS] {
                let t = step(q, a);
                if reach[t as usize].is_none() {
                    let mut u = reach[q as usize].clone().unwrap();
                    u.push(a);
                    reach[t as usize] = Some(u);
                    queue.push_back(t);
                }
            }
        }

        let mut best: Option<(Word, Word)> = None;
        for q in 0..n as State {
            let Some(u) = &reach[q as usize] else {
                continue;
            };
            let triple = (step(q, PLUS), step(q, MINUS), q);
            type Triple = (State, State, State);
            let mut parent: HashMap<Triple, Option<(Triple, Letter)>> = HashMap::new();
            parent.insert(triple, None);
            let mut queue = VecDeque::from([triple]);
            let mut found = None;
            while let Some(t) = queue.pop_front() {
                if accepting(t.0) && accepting(t.1) && !accepting(t.2) {
                    found = Some(t);
                    break;
                }
                for a in [PLUS, MINUS] {
                    let next = (step(t.0, a), step(t.1, a), step(t.2, a));
                    if let std::collections::hash_map::Entry::Vacant(e) = parent.entry(next) {
                        e.insert(Some((t, a)));
                        queue.push_back(next);
                    }
                }
            }
            let Some(mut t) = found else { continue };
            let mut letters = Vec::new();
            while let Some((p, a)) = parent[&t] {
                letters.push(a);
                t = p;
            }
            letters.reverse();
            let v = Word::from_letters(letters);
            let better = match &best {
                None => true,
                Some((bu, bv)) => (u.len() + v.len(), u, &v) < (bu.len() + bv.len(), bu, bv),
            };
            if better {
                best = Some((u.clone(), v));
            }
        }
        Ok(MacNeille {
            member: best.is_none(),
            witness: best,
        })
    }

    /// Some `r` among `candidates` with `v ≰ r` and `v ≤ r ⊕ r̄`.
    pub fn accessibility_witness(
        &self,
        candidates: &[FinalSegment],
    ) -> Result<Option<FinalSegment>> {
        if candidates.is_empty() {
            return Err(Error::Malformed(
                "accessibility needs a nonempty candidate set".into(),
            ));
        }
        for r in candidates {
            if !self.leq(r)? && self.leq(&r.oplus(&r.involution())?)? {
                return Ok(Some(r.clone()));
            }
        }
        Ok(None)
    }

    pub fn is_accessible(&self, candidates: &[FinalSegment]) -> Result<bool> {
        Ok(self.accessibility_witness(candidates)?.is_some())
    }

    /// Principal segments `↑{w}` with `|w|` at most one more than the longest generator.
    pub fn default_candidates(&self) -> Vec<FinalSegment> {
        let k = self.alphabet.len();
        crate::word::words_up_to(k, self.max_generator_len() + 1)
            .map(|w| FinalSegment {
                alphabet: self.alphabet.clone(),
                gens: vec![w],
            })
            .collect()
    }

    /// JSON array of generator words; `0` is `[""]` and the empty segment `[]`.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::Value::Array(
            self.gens
                .iter()
                .map(|w| self.alphabet.word_to_json(w))
                .collect(),
        )
    }

    pub fn from_json(alphabet: Arc<Alphabet>, v: &serde_json::Value) -> Result<FinalSegment> {
        let items = v
            .as_array()
            .ok_or_else(|| Error::Malformed("final segment must be an array of words".into()))?;
        let words = items
            .iter()
            .map(|x| alphabet.word_from_json(x))
            .collect::<Result<Vec<_>>>()?;
        FinalSegment::new(alphabet, words)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::word::{subword_leq, words_up_to};
    use proptest::prelude::*;

    fn fs(words: &[&str]) -> FinalSegment {
        FinalSegment::signed(words)
    }

    fn zero() -> FinalSegment {
        FinalSegment::zero(Alphabet::signed())
    }

    #[test]
    fn lattice_examples() {
        assert_eq!(fs(&["+"]).meet(&fs(&["-"])).unwrap(), fs(&["+", "-"]));
        assert_eq!(fs(&["+"]).join(&fs(&["-"])).unwrap(), fs(&["+-", "-+"]));
        assert_eq!(fs(&["+-"]).meet(&zero()).unwrap(), zero());
        assert!(zero().leq(&fs(&["+"])).unwrap());
        assert!(fs(&["+"]).leq(&fs(&["+-"])).unwrap());
        assert!(!fs(&["+-"]).leq(&fs(&["+"])).unwrap());
        let empty = FinalSegment::empty(Alphabet::signed());
        assert!(fs(&["++"]).leq(&empty).unwrap());
        assert_eq!(fs(&["++"]).join(&empty).unwrap(), empty);
    }

    #[test]
    fn monoid_examples() {
        assert_eq!(fs(&["+"]).oplus(&fs(&["-"])).unwrap(), fs(&["+-"]));
        assert_eq!(fs(&["+", "-+"]).oplus(&zero()).unwrap(), fs(&["+"]));
        assert_eq!(
            fs(&["+", "-"]).oplus(&fs(&["+"])).unwrap(),
            fs(&["++", "-+"])
        );
        assert_eq!(fs(&["++"]).involution(), fs(&["--"]));
        assert_eq!(fs(&["+-"]).involution(), fs(&["+-"]));
        assert_eq!(zero().involution(), zero());
        assert!(fs(&["+-"]).is_self_dual());
    }

    #[test]
    fn residual_examples() {
        assert_eq!(
            fs(&["+-"]).residual(&fs(&["-"]), Side::Right).unwrap(),
            fs(&["+"])
        );
        let v = fs(&["+-", "--+"]);
        assert_eq!(v.residual(&zero(), Side::Right).unwrap(), v);
        assert_eq!(v.residual(&zero(), Side::Left).unwrap(), v);
        assert_eq!(zero().residual(&fs(&["+-"]), Side::Left).unwrap(), zero());
    }

    #[test]
    fn distance_examples() {
        let p = fs(&["+-", "-"]);
        assert_eq!(p.distance(&p).unwrap(), zero());
        assert_eq!(zero().distance(&p).unwrap(), p);
        assert_eq!(fs(&["+"]).distance(&fs(&["-"])).unwrap(), fs(&["-"]));
        assert_eq!(fs(&["-"]).distance(&fs(&["+"])).unwrap(), fs(&["+"]));
    }

    #[test]
    fn macneille_examples() {
        assert_eq!(
            fs(&["+-"]).macneille_member().unwrap(),
            MacNeille {
                member: true,
                witness: None
            }
        );
        let r = fs(&["+", "-"]).macneille_member().unwrap();
        assert!(!r.member);
        assert_eq!(r.witness, Some((Word::empty(), Word::empty())));
        assert!(zero().macneille_member().unwrap().member);
        let plain = FinalSegment::zero(Alphabet::plain(["a"]).unwrap());
        assert_eq!(plain.macneille_member(), Err(Error::RequiresSignedAlphabet));
    }

    #[test]
    fn accessibility_examples() {
        let principal: Vec<FinalSegment> = words_up_to(2, 2)
            .map(|w| FinalSegment::new(Alphabet::signed(), vec![w]).unwrap())
            .collect();
        assert!(!zero().is_accessible(&principal).unwrap());
        assert_eq!(
            fs(&["+-"]).accessibility_witness(&principal).unwrap(),
            Some(fs(&["+"]))
        );
        assert!(fs(&["+-"])
            .is_accessible(&fs(&["+-"]).default_candidates())
            .unwrap());
        assert!(zero().is_accessible(&[]).is_err());
    }

    #[test]
    fn json_forms() {
        assert_eq!(zero().to_json(), serde_json::json!([""]));
        assert_eq!(
            FinalSegment::empty(Alphabet::signed()).to_json(),
            serde_json::json!([])
        );
        let p = fs(&["-+", "+-"]);
        assert_eq!(p.to_json(), serde_json::json!(["+-", "-+"]));
        assert_eq!(
            FinalSegment::from_json(Alphabet::signed(), &p.to_json()).unwrap(),
            p
        );
    }

    #[test]
    fn alphabet_mismatch() {
        let other = FinalSegment::zero(Alphabet::plain(["a", "b"]).unwrap());
        assert_eq!(zero().meet(&other), Err(Error::AlphabetMismatch));
    }

    /// Brute-force cancellation check over short words.
    fn macneille_brute(z: &FinalSegment, max: usize) -> bool {
        for u in words_up_to(2, max) {
            for v in words_up_to(2, max) {
                let plus = u.concat(&Word::signed("+")).concat(&v);
                let minus = u.concat(&Word::signed("-")).concat(&v);
                if z.contains(&plus) && z.contains(&minus) && !z.contains(&u.concat(&v)) {
                    return false;
                }
            }
        }
        true
    }

    #[test]
    fn macneille_agrees_with_brute_force_on_short_antichains() {
        let short: Vec<Word> = words_up_to(2, 2).collect();
        for mask in 0u32..(1 << short.len()) {
            let words: Vec<Word> = (0..short.len())
                .filter(|i| mask >> i & 1 == 1)
                .map(|i| short[i].clone())
                .collect();
            let z = FinalSegment::new(Alphabet::signed(), words).unwrap();
            let got = z.macneille_member().unwrap();
            assert_eq!(got.member, macneille_brute(&z, 4), "{z:?}");
            if let Some((u, v)) = got.witness {
                let plus = u.concat(&Word::signed("+")).concat(&v);
                let minus = u.concat(&Word::signed("-")).concat(&v);
                assert!(z.contains(&plus) && z.contains(&minus) && !z.contains(&u.concat(&v)));
            }
        }
    }

    fn segment() -> impl Strategy<Value = FinalSegment> {
        prop::collection::vec(prop::collection::vec(0u8..2, 0..=3), 0..=3).prop_map(|ws| {
            FinalSegment::new(
                Alphabet::signed(),
                ws.into_iter().map(Word::from_letters).collect(),
            )
            .unwrap()
        })
    }

    fn nonempty_segment() -> impl Strategy<Value = FinalSegment> {
        prop::collection::vec(prop::collection::vec(0u8..2, 0..=3), 1..=3).prop_map(|ws| {
            FinalSegment::new(
                Alphabet::signed(),
                ws.into_iter().map(Word::from_letters).collect(),
            )
            .unwrap()
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn membership_matches_generators(p in segment()) {
            for w in words_up_to(2, 5) {
                prop_assert_eq!(p.contains(&w), p.generators().iter().any(|g| subword_leq(g, &w)));
            }
        }

        #[test]
        fn join_is_intersection(p in segment(), q in segment()) {
            let j = p.join(&q).unwrap();
            for w in words_up_to(2, 6) {
                prop_assert_eq!(j.contains(&w), p.contains(&w) && q.contains(&w));
            }
        }

        #[test]
        fn meet_distributes_over_oplus(p in segment(), q in segment(), r in segment()) {
            let left = p.meet(&q).unwrap().oplus(&r).unwrap();
            prop_assert_eq!(left, p.oplus(&r).unwrap().meet(&q.oplus(&r).unwrap()).unwrap());
            let right = r.oplus(&p.meet(&q).unwrap()).unwrap();
            prop_assert_eq!(right, r.oplus(&p).unwrap().meet(&r.oplus(&q).unwrap()).unwrap());
        }

        #[test]
        fn oplus_associative_and_involution_reverses(p in segment(), q in segment(), r in segment()) {
            prop_assert_eq!(
                p.oplus(&q).unwrap().oplus(&r).unwrap(),
                p.oplus(&q.oplus(&r).unwrap()).unwrap()
            );
            prop_assert_eq!(p.oplus(&q).unwrap().involution(), q.involution().oplus(&p.involution()).unwrap());
        }

        #[test]
        fn distance_axioms(p in segment(), q in segment(), r in segment()) {
            let pq = p.distance(&q).unwrap();
            let qr = q.distance(&r).unwrap();
            let pr = p.distance(&r).unwrap();
            prop_assert!(pr.leq(&pq.oplus(&qr).unwrap()).unwrap());
            prop_assert_eq!(pq.involution(), q.distance(&p).unwrap());
            prop_assert_eq!(p.distance(&p).unwrap(), zero());
        }

        #[test]
        fn distance_is_least_solution(p in nonempty_segment(), q in nonempty_segment()) {
            // d(p,q) is the least r with p ≤ q ⊕ r̄ and q ≤ p ⊕ r
            let d = p.distance(&q).unwrap();
            prop_assert!(p.leq(&q.oplus(&d.involution()).unwrap()).unwrap());
            prop_assert!(q.leq(&p.oplus(&d).unwrap()).unwrap());
            for w in words_up_to(2, 3) {
                let r = FinalSegment::new(Alphabet::signed(), vec![w]).unwrap();
                if p.leq(&q.oplus(&r.involution()).unwrap()).unwrap() && q.leq(&p.oplus(&r).unwrap()).unwrap() {
                    prop_assert!(d.leq(&r).unwrap());
                }
            }
        }

        #[test]
        fn residual_adjunction(v in segment(), b in segment()) {
            let res = v.residual(&b, Side::Right).unwrap();
            prop_assert!(v.leq(&res.oplus(&b).unwrap()).unwrap());
            let left = v.residual(&b, Side::Left).unwrap();
            prop_assert!(v.leq(&b.oplus(&left).unwrap()).unwrap());
            let short: Vec<Word> = words_up_to(2, 2).collect();
            for mask in 1u32..(1 << short.len()) {
                let words = (0..short.len()).filter(|i| mask >> i & 1 == 1).map(|i| short[i].clone()).collect();
                let r = FinalSegment::new(Alphabet::signed(), words).unwrap();
                if v.leq(&r.oplus(&b).unwrap()).unwrap() {
                    prop_assert!(res.leq(&r).unwrap());
                }
                if v.leq(&b.oplus(&r).unwrap()).unwrap() {
                    prop_assert!(left.leq(&r).unwrap());
                }
            }
        }
    }
}
