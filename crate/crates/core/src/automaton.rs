//! Finite automata over an [`Alphabet`].
//!
//! This is the engine behind final segments: an upward-closed language is
//! carried by an acceptor, and its finite set of minimal words is recovered as
//! `L \ ins(L)`, where `ins(L)` is the set of one-letter insertions into `L`.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::word::{Alphabet, Letter, Word};

pub type State = u32;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Left,
    Right,
}

/// A nondeterministic finite acceptor, possibly flagged deterministic.
///
/// When `deterministic` is set there is exactly one initial state and at most
/// one successor per (state, letter).
#[derive(Clone, Debug)]
pub struct Automaton {
    alphabet: Arc<Alphabet>,
    delta: Vec<Vec<Vec<State>>>,
    initial: Vec<State>,
    accepting: Vec<bool>,
    deterministic: bool,
}

impl Automaton {
    /// An automaton with `states` states, no transitions and no initial or accepting state.
    pub fn with_states(alphabet: Arc<Alphabet>, states: usize) -> Automaton {
        let k = alphabet.len();
        Automaton {
            alphabet,
            delta: vec![vec![Vec::new(); k]; states],
            initial: Vec::new(),
            accepting: vec![false; states],
            deterministic: false,
        }
    }

    pub fn add_state(&mut self) -> State {
        self.delta.push(vec![Vec::new(); self.alphabet.len()]);
        self.accepting.push(false);
        (self.delta.len() - 1) as State
    }

    pub fn add_transition(&mut self, from: State, letter: Letter, to: State) {
        let targets = &mut self.delta[from as usize][letter as usize];
        if let Err(pos) = targets.binary_search(&to) {
            targets.insert(pos, to);
        }
        self.deterministic = false;
    }

    pub fn add_initial(&mut self, q: State) {
        if let Err(pos) = self.initial.binary_search(&q) {
            self.initial.insert(pos, q);
        }
        self.deterministic = false;
    }

    pub fn set_accepting(&mut self, q: State, accepting: bool) {
        self.accepting[q as usize] = accepting;
    }

    /// Sets the deterministic flag after validating the shape.
    pub fn mark_deterministic(&mut self) -> Result<()> {
        let ok = self.initial.len() == 1
            && self
                .delta
                .iter()
                .all(|row| row.iter().all(|t| t.len() <= 1));
        if !ok {
            return Err(Error::NotDeterministic);
        }
        self.deterministic = true;
        Ok(())
    }

    pub fn alphabet(&self) -> &Arc<Alphabet> {
        &self.alphabet
    }

    pub fn num_states(&self) -> usize {
        self.delta.len()
    }

    pub fn is_deterministic(&self) -> bool {
        self.deterministic
    }

    pub fn initial(&self) -> &[State] {
        &self.initial
    }

    pub fn is_accepting(&self, q: State) -> bool {
        self.accepting[q as usize]
    }

    pub fn successors(&self, q: State, a: Letter) -> &[State] {
        &self.delta[q as usize][a as usize]
    }

    fn letters(&self) -> std::ops::Range<Letter> {
        0..self.alphabet.len() as Letter
    }

    pub fn empty_language(alphabet: Arc<Alphabet>) -> Automaton {
        let mut a = Automaton::with_states(alphabet, 1);
        a.initial = vec![0];
        for l in a.letters() {
            a.delta[0][l as usize] = vec![0];
        }
        a.deterministic = true;
        a
    }

    pub fn universal(alphabet: Arc<Alphabet>) -> Automaton {
        let mut a = Automaton::empty_language(alphabet);
        a.accepting[0] = true;
        a
    }

    /// Acceptor of the upward closure of `words` in the Higman order.
    ///
    /// One chain per generator: state `i` means the first `i` letters have been
    /// embedded; every state loops on every letter.
    pub fn upset(alphabet: Arc<Alphabet>, words: &[Word]) -> Automaton {
        if words.is_empty() {
            return Automaton::empty_language(alphabet);
        }
        let mut a = Automaton::with_states(alphabet.clone(), 0);
        for w in words {
            let start = a.num_states() as State;
            for _ in 0..=w.len() {
                a.add_state();
            }
            a.initial.push(start);
            for (i, &letter) in w.letters().iter().enumerate() {
                let q = start + i as State;
                for b in alphabet.letters() {
                    a.delta[q as usize][b as usize].push(q);
                    if alphabet.letter_leq(letter, b) {
                        a.delta[q as usize][b as usize].push(q + 1);
                    }
                }
            }
            let last = start + w.len() as State;
            for b in alphabet.letters() {
                a.delta[last as usize][b as usize].push(last);
            }
            a.accepting[last as usize] = true;
        }
        a
    }

    pub fn accepts(&self, w: &Word) -> bool {
        let mut current: BTreeSet<State> = self.initial.iter().copied().collect();
        for &l in w.letters() {
            if l as usize >= self.alphabet.len() {
                return false;
            }
            current = current
                .iter()
                .flat_map(|&q| self.delta[q as usize][l as usize].iter().copied())
                .collect();
            if current.is_empty() {
                return false;
            }
        }
        current.iter().any(|&q| self.accepting[q as usize])
    }

    /// Subset construction. The result is complete: the empty subset becomes a sink.
    pub fn determinize(&self) -> Automaton {
        let k = self.alphabet.len();
        let mut index: HashMap<Vec<State>, State> = HashMap::new();
        let mut subsets: Vec<Vec<State>> = Vec::new();
        let mut delta: Vec<Vec<Vec<State>>> = Vec::new();
        let start = self.initial.clone();
        index.insert(start.clone(), 0);
        subsets.push(start);
        let mut next = 0;
        while next < subsets.len() {
            let current = subsets[next].clone();
            let mut row = Vec::with_capacity(k);
            for l in 0..k {
                let mut target: Vec<State> = current
                    .iter()
                    .flat_map(|&q| self.delta[q as usize][l].iter().copied())
                    .collect();
                target.sort_unstable();
                target.dedup();
                let id = match index.get(&target) {
                    Some(&id) => id,
                    None => {
                        let id = subsets.len() as State;
                        index.insert(target.clone(), id);
                        subsets.push(target);
                        id
                    }
                };
                row.push(vec![id]);
            }
            delta.push(row);
            next += 1;
        }
        let accepting = subsets
            .iter()
            .map(|s| s.iter().any(|&q| self.accepting[q as usize]))
            .collect();
        Automaton {
            alphabet: self.alphabet.clone(),
            delta,
            initial: vec![0],
            accepting,
            deterministic: true,
        }
    }

    /// Adds a sink so that every (state, letter) has exactly one successor.
    fn completed(&self) -> Result<Automaton> {
        if !self.deterministic {
            return Err(Error::NotDeterministic);
        }
        let mut a = self.clone();
        if a.delta.iter().all(|row| row.iter().all(|t| t.len() == 1)) {
            return Ok(a);
        }
        let sink = a.add_state();
        for q in 0..a.num_states() {
            for l in 0..a.alphabet.len() {
                if a.delta[q][l].is_empty() {
                    a.delta[q][l].push(sink);
                }
            }
        }
        a.deterministic = true;
        Ok(a)
    }

    pub fn complement(&self) -> Result<Automaton> {
        let mut a = self.completed()?;
        for acc in a.accepting.iter_mut() {
            *acc = !*acc;
        }
        Ok(a)
    }

    /// Moore partition refinement on the reachable part of a deterministic automaton.
    pub fn minimize(&self) -> Result<Automaton> {
        let a = self.completed()?.trim_unreachable();
        let n = a.num_states();
        let k = a.alphabet.len();
        let mut class: Vec<usize> = a.accepting.iter().map(|&b| b as usize).collect();
        let mut count = class.iter().copied().collect::<BTreeSet<_>>().len();
        loop {
            let mut sig_index: HashMap<(usize, Vec<usize>), usize> = HashMap::new();
            let mut next = vec![0; n];
            for q in 0..n {
                let sig: Vec<usize> = (0..k).map(|l| class[a.delta[q][l][0] as usize]).collect();
                let len = sig_index.len();
                next[q] = *sig_index.entry((class[q], sig)).or_insert(len);
            }
            let new_count = sig_index.len();
            class = next;
            if new_count == count {
                break;
            }
            count = new_count;
        }
        // renumber so the initial state's class is 0, in BFS order
        let mut order = vec![usize::MAX; count];
        let mut reps = Vec::new();
        let mut queue = VecDeque::from([a.initial[0] as usize]);
        order[class[a.initial[0] as usize]] = 0;
        reps.push(a.initial[0] as usize);
        while let Some(q) = queue.pop_front() {
            for l in 0..k {
                let t = a.delta[q][l][0] as usize;
                if order[class[t]] == usize::MAX {
                    order[class[t]] = reps.len();
                    reps.push(t);
                    queue.push_back(t);
                }
            }
        }
        let delta = reps
            .iter()
            .map(|&q| {
                (0..k)
                    .map(|l| vec![order[class[a.delta[q][l][0] as usize]] as State])
                    .collect()
            })
            .collect();
        let accepting = reps.iter().map(|&q| a.accepting[q]).collect();
        Ok(Automaton {
            alphabet: a.alphabet.clone(),
            delta,
            initial: vec![0],
            accepting,
            deterministic: true,
        })
    }

    fn same_alphabet(&self, other: &Automaton) -> Result<()> {
        if Arc::ptr_eq(&self.alphabet, &other.alphabet) || self.alphabet == other.alphabet {
            Ok(())
        } else {
            Err(Error::AlphabetMismatch)
        }
    }

    /// Product construction over reachable pairs.
    pub fn intersect(&self, other: &Automaton) -> Result<Automaton> {
        self.same_alphabet(other)?;
        let k = self.alphabet.len();
        let mut index: HashMap<(State, State), State> = HashMap::new();
        let mut pairs = Vec::new();
        let mut initial = Vec::new();
        for &p in &self.initial {
            for &q in &other.initial {
                index.insert((p, q), pairs.len() as State);
                initial.push(pairs.len() as State);
                pairs.push((p, q));
            }
        }
        let mut delta = Vec::new();
        let mut next = 0;
        while next < pairs.len() {
            let (p, q) = pairs[next];
            let mut row = Vec::with_capacity(k);
            for l in 0..k {
                let mut targets = Vec::new();
                for &p2 in &self.delta[p as usize][l] {
                    for &q2 in &other.delta[q as usize][l] {
                        let id = *index.entry((p2, q2)).or_insert_with(|| {
                            pairs.push((p2, q2));
                            (pairs.len() - 1) as State
                        });
                        targets.push(id);
                    }
                }
                targets.sort_unstable();
                targets.dedup();
                row.push(targets);
            }
            delta.push(row);
            next += 1;
        }
        let accepting = pairs
            .iter()
            .map(|&(p, q)| self.accepting[p as usize] && other.accepting[q as usize])
            .collect();
        let deterministic = self.deterministic && other.deterministic;
        Ok(Automaton {
            alphabet: self.alphabet.clone(),
            delta,
            initial,
            accepting,
            deterministic,
        })
    }

    /// Disjoint union.
    pub fn union(&self, other: &Automaton) -> Result<Automaton> {
        self.same_alphabet(other)?;
        let offset = self.num_states() as State;
        let mut a = self.clone();
        for row in &other.delta {
            a.delta.push(
                row.iter()
                    .map(|t| t.iter().map(|&q| q + offset).collect())
                    .collect(),
            );
        }
        a.accepting.extend_from_slice(&other.accepting);
        a.initial.extend(other.initial.iter().map(|&q| q + offset));
        a.deterministic = false;
        Ok(a)
    }

    fn forward_reachable(&self) -> Vec<bool> {
        let mut seen = vec![false; self.num_states()];
        let mut stack: Vec<State> = self.initial.clone();
        for &q in &stack {
            seen[q as usize] = true;
        }
        while let Some(q) = stack.pop() {
            for targets in &self.delta[q as usize] {
                for &t in targets {
                    if !seen[t as usize] {
                        seen[t as usize] = true;
                        stack.push(t);
                    }
                }
            }
        }
        seen
    }

    fn backward_reachable(&self) -> Vec<bool> {
        let n = self.num_states();
        let mut reverse: Vec<Vec<State>> = vec![Vec::new(); n];
        for (q, row) in self.delta.iter().enumerate() {
            for targets in row {
                for &t in targets {
                    reverse[t as usize].push(q as State);
                }
            }
        }
        let mut seen = self.accepting.clone();
        let mut stack: Vec<usize> = (0..n).filter(|&q| seen[q]).collect();
        while let Some(q) = stack.pop() {
            for &p in &reverse[q] {
                if !seen[p as usize] {
                    seen[p as usize] = true;
                    stack.push(p as usize);
                }
            }
        }
        seen
    }

    fn restrict(&self, keep: &[bool]) -> Automaton {
        let mut renumber = vec![State::MAX; self.num_states()];
        let mut count = 0;
        for (q, &k) in keep.iter().enumerate() {
            if k {
                renumber[q] = count;
                count += 1;
            }
        }
        let delta = (0..self.num_states())
            .filter(|&q| keep[q])
            .map(|q| {
                self.delta[q]
                    .iter()
                    .map(|t| {
                        t.iter()
                            .filter(|&&s| keep[s as usize])
                            .map(|&s| renumber[s as usize])
                            .collect()
                    })
                    .collect()
            })
            .collect();
        let initial: Vec<State> = self
            .initial
            .iter()
            .filter(|&&q| keep[q as usize])
            .map(|&q| renumber[q as usize])
            .collect();
        let accepting = (0..self.num_states())
            .filter(|&q| keep[q])
            .map(|q| self.accepting[q])
            .collect();
        let deterministic = self.deterministic && initial.len() == 1;
        Automaton {
            alphabet: self.alphabet.clone(),
            delta,
            initial,
            accepting,
            deterministic,
        }
    }

    fn trim_unreachable(&self) -> Automaton {
        self.restrict(&self.forward_reachable())
    }

    /// Keeps only states that are both reachable and co-reachable.
    pub fn trim(&self) -> Automaton {
        let fwd = self.forward_reachable();
        let bwd = self.backward_reachable();
        let keep: Vec<bool> = fwd.iter().zip(&bwd).map(|(a, b)| *a && *b).collect();
        self.restrict(&keep)
    }

    pub fn is_empty(&self) -> bool {
        let fwd = self.forward_reachable();
        !fwd.iter().zip(&self.accepting).any(|(r, a)| *r && *a)
    }

    /// Shortest accepted word, least in shortlex order among the shortest.
    pub fn shortest_accepted(&self) -> Option<Word> {
        let d = self.determinize();
        let n = d.num_states();
        let mut parent: Vec<Option<(State, Letter)>> = vec![None; n];
        let mut seen = vec![false; n];
        seen[0] = true;
        let mut queue = VecDeque::from([0 as State]);
        while let Some(q) = queue.pop_front() {
            if d.accepting[q as usize] {
                let mut letters = Vec::new();
                let mut cur = q;
                while let Some((p, l)) = parent[cur as usize] {
                    letters.push(l);
                    cur = p;
                }
                letters.reverse();
                return Some(Word::from_letters(letters));
            }
            for l in d.letters() {
                let t = d.delta[q as usize][l as usize][0];
                if !seen[t as usize] {
                    seen[t as usize] = true;
                    parent[t as usize] = Some((q, l));
                    queue.push_back(t);
                }
            }
        }
        None
    }

    fn has_cycle(&self) -> bool {
        // iterative three-colour DFS
        let n = self.num_states();
        let mut colour = vec![0u8; n];
        for root in 0..n {
            if colour[root] != 0 {
                continue;
            }
            let mut stack: Vec<(usize, usize)> = vec![(root, 0)];
            colour[root] = 1;
            while let Some(&mut (q, ref mut edge)) = stack.last_mut() {
                let succ: Vec<State> = self.delta[q].iter().flatten().copied().collect();
                if *edge < succ.len() {
                    let t = succ[*edge] as usize;
                    *edge += 1;
                    match colour[t] {
                        0 => {
                            colour[t] = 1;
                            stack.push((t, 0));
                        }
                        1 => return true,
                        _ => {}
                    }
                } else {
                    colour[q] = 2;
                    stack.pop();
                }
            }
        }
        false
    }

    pub fn is_finite(&self) -> bool {
        !self.trim().has_cycle()
    }

    /// All accepted words in shortlex order. Requires a finite language.
    pub fn enumerate_finite(&self) -> Result<Vec<Word>> {
        let t = self.trim();
        if t.has_cycle() {
            return Err(Error::InfiniteLanguage);
        }
        let mut out = BTreeSet::new();
        let mut stack: Vec<(State, Vec<Letter>)> =
            t.initial.iter().map(|&q| (q, Vec::new())).collect();
        while let Some((q, prefix)) = stack.pop() {
            if t.accepting[q as usize] {
                out.insert(Word::from_letters(prefix.clone()));
            }
            for l in t.letters() {
                for &s in &t.delta[q as usize][l as usize] {
                    let mut p = prefix.clone();
                    p.push(l);
                    stack.push((s, p));
                }
            }
        }
        Ok(out.into_iter().collect())
    }

    /// Accepts `{ u a v : u v in L, a a letter }`.
    ///
    /// Two copies of the state graph; the only way from the first copy to the
    /// second is reading the inserted letter without moving.
    pub fn insert_one_letter(&self) -> Automaton {
        let n = self.num_states();
        let k = self.alphabet.len();
        let mut delta = Vec::with_capacity(2 * n);
        for q in 0..n {
            delta.push(
                (0..k)
                    .map(|l| {
                        let mut t = self.delta[q][l].clone();
                        t.push((n + q) as State);
                        t.sort_unstable();
                        t.dedup();
                        t
                    })
                    .collect(),
            );
        }
        for q in 0..n {
            delta.push(
                (0..k)
                    .map(|l| self.delta[q][l].iter().map(|&s| s + n as State).collect())
                    .collect(),
            );
        }
        let mut accepting = vec![false; n];
        accepting.extend_from_slice(&self.accepting);
        Automaton {
            alphabet: self.alphabet.clone(),
            delta,
            initial: self.initial.clone(),
            accepting,
            deterministic: false,
        }
    }

    /// Accepts the words obtained from a word of `L` by replacing one letter with
    /// a strictly larger one. Empty for discretely ordered alphabets.
    pub fn raise_one_letter(&self) -> Automaton {
        let n = self.num_states();
        let k = self.alphabet.len();
        let mut delta: Vec<Vec<Vec<State>>> = Vec::with_capacity(2 * n);
        for q in 0..n {
            delta.push(self.delta[q].clone());
        }
        for q in 0..n {
            delta.push(
                (0..k)
                    .map(|l| self.delta[q][l].iter().map(|&s| s + n as State).collect())
                    .collect(),
            );
        }
        for q in 0..n {
            for a in self.letters() {
                for b in self.alphabet.letters_above(a).collect::<Vec<_>>() {
                    for &s in &self.delta[q][a as usize] {
                        let t = &mut delta[q][b as usize];
                        t.push(s + n as State);
                        t.sort_unstable();
                        t.dedup();
                    }
                }
            }
        }
        let mut accepting = vec![false; n];
        accepting.extend_from_slice(&self.accepting);
        Automaton {
            alphabet: self.alphabet.clone(),
            delta,
            initial: self.initial.clone(),
            accepting,
            deterministic: false,
        }
    }

    /// Words one elementary step above some word of `L`.
    fn one_step_above(&self) -> Automaton {
        let ins = self.insert_one_letter();
        if self.alphabet.has_trivial_order() {
            ins
        } else {
            ins.union(&self.raise_one_letter()).expect("same alphabet")
        }
    }

    /// Right quotient `{u : u w in L}` or left quotient `{u : w u in L}`.
    pub fn quotient(&self, w: &Word, side: Side) -> Automaton {
        match side {
            Side::Right => {
                let mut a = self.clone();
                for q in 0..self.num_states() {
                    let mut current = vec![q as State];
                    for &l in w.letters() {
                        current = current
                            .iter()
                            .flat_map(|&s| self.delta[s as usize][l as usize].iter().copied())
                            .collect::<BTreeSet<_>>()
                            .into_iter()
                            .collect();
                    }
                    a.accepting[q] = current.iter().any(|&s| self.accepting[s as usize]);
                }
                a
            }
            Side::Left => {
                let mut current = self.initial.clone();
                for &l in w.letters() {
                    current = current
                        .iter()
                        .flat_map(|&s| self.delta[s as usize][l as usize].iter().copied())
                        .collect::<BTreeSet<_>>()
                        .into_iter()
                        .collect();
                }
                let mut a = self.clone();
                a.deterministic = self.deterministic && current.len() == 1;
                a.initial = current;
                a
            }
        }
    }

    /// A word of `L` with a one-step superword outside `L`, if any.
    ///
    /// Single-letter insertions (and, for ordered alphabets, single-letter
    /// raises) generate the superword relation, so `L` is upward closed iff
    /// `step(L) ⊆ L`.
    pub fn upward_closure_violation(&self) -> Option<Word> {
        let d = self.determinize().minimize().expect("determinized");
        let outside = d.complement().expect("determinized");
        d.one_step_above()
            .intersect(&outside)
            .expect("same alphabet")
            .shortest_accepted()
    }

    pub fn is_upward_closed(&self) -> bool {
        self.upward_closure_violation().is_none()
    }

    /// The finite antichain `Min(L)` of an upward-closed language.
    pub fn minimal_antichain(&self) -> Result<Vec<Word>> {
        let d = self.determinize().minimize()?;
        let outside = d.complement()?;
        let step = d.one_step_above();
        if let Some(w) = step.intersect(&outside)?.shortest_accepted() {
            return Err(Error::NotUpwardClosed(self.alphabet.format(&w)));
        }
        let residual = d.intersect(&step.determinize().complement()?)?;
        match residual.enumerate_finite() {
            Ok(words) => Ok(words),
            Err(Error::InfiniteLanguage) => Err(Error::Internal(
                "minimal words of an upward-closed language form an infinite set".into(),
            )),
            Err(e) => Err(e),
        }
    }

    pub fn to_doc(&self) -> AutomatonDoc {
        let mut transitions = Vec::new();
        for (q, row) in self.delta.iter().enumerate() {
            for (l, targets) in row.iter().enumerate() {
                for &t in targets {
                    transitions.push((q as State, self.alphabet.name(l as Letter).to_string(), t));
                }
            }
        }
        AutomatonDoc {
            alphabet: self.alphabet.names().to_vec(),
            states: self.num_states(),
            transitions,
            initial: self.initial.clone(),
            accepting: (0..self.num_states() as State)
                .filter(|&q| self.accepting[q as usize])
                .collect(),
            deterministic: self.deterministic,
        }
    }

    pub fn from_doc(doc: &AutomatonDoc, alphabet: Arc<Alphabet>) -> Result<Automaton> {
        if alphabet.names() != doc.alphabet.as_slice() {
            return Err(Error::AlphabetMismatch);
        }
        let mut a = Automaton::with_states(alphabet.clone(), doc.states);
        let check = |q: State| {
            if (q as usize) < doc.states {
                Ok(q)
            } else {
                Err(Error::Malformed(format!("state {q} out of range")))
            }
        };
        for (p, l, q) in &doc.transitions {
            a.add_transition(check(*p)?, alphabet.letter(l)?, check(*q)?);
        }
        for &q in &doc.initial {
            a.add_initial(check(q)?);
        }
        for &q in &doc.accepting {
            a.set_accepting(check(q)?, true);
        }
        if doc.deterministic {
            a.mark_deterministic()?;
        }
        Ok(a)
    }
}

/// Debugging dump of an automaton; not a stable format.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AutomatonDoc {
    pub alphabet: Vec<String>,
    pub states: usize,
    pub transitions: Vec<(State, String, State)>,
    pub initial: Vec<State>,
    pub accepting: Vec<State>,
    pub deterministic: bool,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::word::{subword_leq, words_up_to};

    fn w(s: &str) -> Word {
        Word::signed(s)
    }

    fn up(words: &[&str]) -> Automaton {
        Automaton::upset(
            Alphabet::signed(),
            &words.iter().map(|s| w(s)).collect::<Vec<_>>(),
        )
    }

    #[test]
    fn upset_membership() {
        let a = up(&["+"]);
        for s in ["+", "-+", "+-"] {
            assert!(a.accepts(&w(s)), "{s}");
        }
        assert!(!a.accepts(&w("-")));
        assert!(!a.accepts(&w("")));
        assert!(up(&[]).is_empty());
        let all = up(&[""]);
        assert!(words_up_to(2, 4).all(|x| all.accepts(&x)));
        for x in words_up_to(2, 5) {
            assert_eq!(
                up(&["+-", "--"]).accepts(&x),
                subword_leq(&w("+-"), &x) || subword_leq(&w("--"), &x)
            );
        }
    }

    #[test]
    fn insertion_examples() {
        let ins = up(&["+"]).insert_one_letter();
        assert!(ins.accepts(&w("+-")));
        assert!(!ins.accepts(&w("+")));
        assert!(!ins.accepts(&w("--")));

        // L = {□}
        let mut only_empty = Automaton::with_states(Alphabet::signed(), 1);
        only_empty.add_initial(0);
        only_empty.set_accepting(0, true);
        let ins = only_empty.insert_one_letter();
        for x in words_up_to(2, 3) {
            assert_eq!(ins.accepts(&x), x.len() == 1);
        }
        assert!(up(&[]).insert_one_letter().is_empty());
    }

    #[test]
    fn minimal_antichain_examples() {
        assert_eq!(up(&["+", "-+"]).minimal_antichain().unwrap(), vec![w("+")]);
        assert_eq!(
            Automaton::universal(Alphabet::signed())
                .minimal_antichain()
                .unwrap(),
            vec![w("")]
        );
        assert_eq!(up(&[]).minimal_antichain().unwrap(), Vec::<Word>::new());
        assert_eq!(
            up(&["-+", "+-", "++"]).minimal_antichain().unwrap(),
            vec![w("++"), w("+-"), w("-+")]
        );
    }

    #[test]
    fn not_upward_closed_is_rejected() {
        let mut exactly_plus = Automaton::with_states(Alphabet::signed(), 2);
        exactly_plus.add_initial(0);
        exactly_plus.add_transition(0, 0, 1);
        exactly_plus.set_accepting(1, true);
        assert!(!exactly_plus.is_upward_closed());
        assert!(matches!(
            exactly_plus.minimal_antichain(),
            Err(Error::NotUpwardClosed(_))
        ));
        assert!(up(&["+-"]).is_upward_closed());
    }

    #[test]
    fn quotient_examples() {
        let q = up(&["+-"]).quotient(&w("-"), Side::Right);
        for x in words_up_to(2, 3) {
            assert_eq!(q.accepts(&x), subword_leq(&w("+"), &x), "{x:?}");
        }
        let l = up(&["+-"]);
        let same = l.quotient(&w(""), Side::Left);
        for x in words_up_to(2, 4) {
            assert_eq!(same.accepts(&x), l.accepts(&x));
        }
        assert!(up(&[]).quotient(&w("+"), Side::Right).is_empty());
        // left quotient: {u : -u ∈ ↑{+-}} = ↑{+-} ∪ ↑{... }  checked against brute force
        let left = up(&["-+-"]).quotient(&w("-"), Side::Left);
        for x in words_up_to(2, 4) {
            assert_eq!(left.accepts(&x), subword_leq(&w("-+-"), &w("-").concat(&x)));
        }
    }

    #[test]
    fn boolean_operations() {
        let both = up(&["+"]).intersect(&up(&["-"])).unwrap();
        for x in words_up_to(2, 4) {
            let has_plus = x.letters().contains(&0);
            let has_minus = x.letters().contains(&1);
            assert_eq!(both.accepts(&x), has_plus && has_minus);
        }
        let all = Automaton::universal(Alphabet::signed());
        assert!(all.complement().unwrap().is_empty());
        assert_eq!(up(&["+"]).complement().err(), Some(Error::NotDeterministic));
        let either = up(&["++"]).union(&up(&["--"])).unwrap();
        assert!(either.accepts(&w("-+-")) && !either.accepts(&w("+-")));
        assert!(!up(&["+"]).is_finite());
        let fin = up(&["+"])
            .intersect(
                &up(&["+"])
                    .insert_one_letter()
                    .determinize()
                    .complement()
                    .unwrap(),
            )
            .unwrap();
        assert!(fin.is_finite());
        assert_eq!(fin.enumerate_finite().unwrap(), vec![w("+")]);
        assert_eq!(
            up(&["+"]).enumerate_finite().err(),
            Some(Error::InfiniteLanguage)
        );
    }

    #[test]
    fn alphabet_mismatch() {
        let other = Automaton::universal(Alphabet::plain(["a", "b", "c"]).unwrap());
        assert_eq!(
            up(&["+"]).intersect(&other).err(),
            Some(Error::AlphabetMismatch)
        );
    }

    #[test]
    fn minimize_preserves_language() {
        let a = up(&["+-", "-+", "++"]).determinize();
        let m = a.minimize().unwrap();
        assert!(m.num_states() <= a.num_states());
        for x in words_up_to(2, 6) {
            assert_eq!(a.accepts(&x), m.accepts(&x));
        }
    }

    #[test]
    fn ordered_alphabet_minimal_words() {
        let ab =
            Alphabet::new(vec!["a".into(), "b".into()], vec![0, 1], Some(vec![(0, 1)])).unwrap();
        let words = vec![ab.parse("a").unwrap(), ab.parse("bb").unwrap()];
        let a = Automaton::upset(ab.clone(), &words);
        assert!(a.accepts(&ab.parse("b").unwrap()));
        assert!(a.is_upward_closed());
        assert_eq!(a.minimal_antichain().unwrap(), vec![ab.parse("a").unwrap()]);
    }

    #[test]
    fn doc_round_trip() {
        let a = up(&["+-"]).determinize();
        let doc = a.to_doc();
        let json = serde_json::to_string(&doc).unwrap();
        let back: AutomatonDoc = serde_json::from_str(&json).unwrap();
        let b = Automaton::from_doc(&back, Alphabet::signed()).unwrap();
        assert_eq!(b.to_doc(), doc);
        assert!(b.is_deterministic());
    }
}
