//! Reflexive digraphs as metric spaces over final segments.
//!
//! `d(x, y)` is the set of words `u` over `{+, -}` such that the zigzag path
//! spelled by `u` maps homomorphically into the graph from `x` to `y`.
//!
//! The midpoint condition (`uv ∈ d(x,y)` implies some `z` with `u ∈ d(x,z)`
//! and `v ∈ d(z,y)`) only needs checking on splits of minimal words: if `w'`
//! lies above a minimal `w`, any split `w' = u'v'` restricts to a split
//! `w = uv` with `u ≤ u'` and `v ≤ v'`, and distances are upward closed.

use std::collections::{HashMap, VecDeque};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::automaton::{Automaton, State};
use crate::error::{Error, Result};
use crate::segment::FinalSegment;
use crate::word::{Alphabet, Word, MINUS, PLUS};

/// A digraph with a loop at every vertex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReflexiveDigraph {
    names: Vec<String>,
    adj: Vec<Vec<bool>>,
    loops_added: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphDoc {
    pub vertices: Vec<String>,
    #[serde(default)]
    pub edges: Vec<(String, String)>,
}

impl ReflexiveDigraph {
    /// Builds the graph, adding any missing loops.
    pub fn new(vertices: Vec<String>, edges: &[(usize, usize)]) -> Result<ReflexiveDigraph> {
        let n = vertices.len();
        let mut index = HashMap::new();
        for (i, v) in vertices.iter().enumerate() {
            if index.insert(v.clone(), i).is_some() {
                return Err(Error::Malformed(format!("duplicate vertex {v}")));
            }
        }
        let mut adj = vec![vec![false; n]; n];
        for &(a, b) in edges {
            if a >= n || b >= n {
                return Err(Error::UnknownVertex(format!("{}", a.max(b))));
            }
            adj[a][b] = true;
        }
        let loops_added = (0..n).any(|v| !adj[v][v]);
        for (v, row) in adj.iter_mut().enumerate() {
            row[v] = true;
        }
        Ok(ReflexiveDigraph {
            names: vertices,
            adj,
            loops_added,
        })
    }

    /// Vertices named `0..n`.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<ReflexiveDigraph> {
        ReflexiveDigraph::new((0..n).map(|i| i.to_string()).collect(), edges)
    }

    pub fn from_doc(doc: &GraphDoc) -> Result<ReflexiveDigraph> {
        let index: HashMap<&str, usize> = doc
            .vertices
            .iter()
            .enumerate()
            .map(|(i, v)| (v.as_str(), i))
            .collect();
        let lookup = |v: &str| {
            index
                .get(v)
                .copied()
                .ok_or_else(|| Error::UnknownVertex(v.to_string()))
        };
        let edges = doc
            .edges
            .iter()
            .map(|(a, b)| Ok((lookup(a)?, lookup(b)?)))
            .collect::<Result<Vec<_>>>()?;
        ReflexiveDigraph::new(doc.vertices.clone(), &edges)
    }

    /// Loops are left implicit.
    pub fn to_doc(&self) -> GraphDoc {
        let mut edges = Vec::new();
        for a in 0..self.len() {
            for b in 0..self.len() {
                if a != b && self.adj[a][b] {
                    edges.push((self.names[a].clone(), self.names[b].clone()));
                }
            }
        }
        GraphDoc {
            vertices: self.names.clone(),
            edges,
        }
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

    pub fn vertex(&self, name: &str) -> Result<usize> {
        self.names
            .iter()
            .position(|v| v == name)
            .ok_or_else(|| Error::UnknownVertex(name.to_string()))
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.adj[a][b]
    }

    /// Whether construction had to add loops.
    pub fn loops_added(&self) -> bool {
        self.loops_added
    }

    /// States are vertices; `+` follows an edge forwards, `-` backwards.
    pub fn acceptor(&self, x: usize, y: usize) -> Automaton {
        let n = self.len();
        let mut a = Automaton::with_states(Alphabet::signed(), n);
        for p in 0..n {
            for q in 0..n {
                if self.adj[p][q] {
                    a.add_transition(p as State, PLUS, q as State);
                    a.add_transition(q as State, MINUS, p as State);
                }
            }
        }
        a.add_initial(x as State);
        a.set_accepting(y as State, true);
        a
    }

    fn check_vertex(&self, v: usize) -> Result<()> {
        if v < self.len() {
            Ok(())
        } else {
            Err(Error::UnknownVertex(v.to_string()))
        }
    }

    pub fn distance(&self, x: usize, y: usize) -> Result<FinalSegment> {
        self.check_vertex(x)?;
        self.check_vertex(y)?;
        if x == y {
            return Ok(FinalSegment::zero(Alphabet::signed()));
        }
        let acceptor = self.acceptor(x, y);
        debug_assert!(
            acceptor.is_upward_closed(),
            "loops make zigzag languages upward closed"
        );
        FinalSegment::from_automaton(&acceptor)
    }

    pub fn distance_matrix(&self) -> Result<DistanceMatrix> {
        let n = self.len();
        let pairs: Vec<(usize, usize)> = (0..n).flat_map(|x| (0..n).map(move |y| (x, y))).collect();
        let flat = pairs
            .par_iter()
            .map(|&(x, y)| self.distance(x, y))
            .collect::<Result<Vec<_>>>()?;
        let entries = flat.chunks(n.max(1)).map(<[_]>::to_vec).take(n).collect();
        Ok(DistanceMatrix {
            names: self.names.clone(),
            entries,
        })
    }

    /// Whether `f` maps edges to edges.
    pub fn is_hom_to(&self, target: &ReflexiveDigraph, f: &[usize]) -> Result<bool> {
        check_map(f, self.len(), target.len())?;
        Ok((0..self.len())
            .all(|a| (0..self.len()).all(|b| !self.adj[a][b] || target.adj[f[a]][f[b]])))
    }

    /// Shortest alternating words in `d(x, y)`: `(n, m)` for the shapes `+-+-…`
    /// and `-+-+…`. Lengths count letters; `None` when no such word exists.
    pub fn fence_distance(&self, x: usize, y: usize) -> Result<(Option<usize>, Option<usize>)> {
        self.check_vertex(x)?;
        self.check_vertex(y)?;
        self.check_poset()?;
        if x == y {
            return Ok((Some(0), Some(0)));
        }
        let shortest = |first: usize| {
            // state: (vertex, index of the next letter: 0 for +, 1 for -)
            let mut dist = vec![[usize::MAX; 2]; self.len()];
            dist[x][first] = 0;
            let mut queue = VecDeque::from([(x, first)]);
            while let Some((v, letter)) = queue.pop_front() {
                let d = dist[v][letter];
                if v == y {
                    return Some(d);
                }
                for w in 0..self.len() {
                    let ok = if letter == 0 {
                        self.adj[v][w]
                    } else {
                        self.adj[w][v]
                    };
                    if ok && dist[w][1 - letter] == usize::MAX {
                        dist[w][1 - letter] = d + 1;
                        queue.push_back((w, 1 - letter));
                    }
                }
            }
            None
        };
        Ok((shortest(0), shortest(1)))
    }

    fn check_poset(&self) -> Result<()> {
        let n = self.len();
        for a in 0..n {
            for b in 0..n {
                if a != b && self.adj[a][b] && self.adj[b][a] {
                    return Err(Error::NotAPoset(format!(
                        "{} and {} are mutually related",
                        self.names[a], self.names[b]
                    )));
                }
                for c in 0..n {
                    if self.adj[a][b] && self.adj[b][c] && !self.adj[a][c] {
                        return Err(Error::NotAPoset(format!(
                            "{} ≤ {} ≤ {} but not {} ≤ {}",
                            self.names[a],
                            self.names[b],
                            self.names[c],
                            self.names[a],
                            self.names[c]
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// Whether every distance lies in the MacNeille completion; otherwise the
    /// first failing pair with its cancellation witness.
    pub fn oriented_embeddable(&self) -> Result<Embeddability> {
        let m = self.distance_matrix()?;
        for x in 0..self.len() {
            for y in 0..self.len() {
                if x == y {
                    continue;
                }
                let r = m.entries[x][y].macneille_member()?;
                if let Some(witness) = r.witness {
                    return Ok(Embeddability {
                        embeddable: false,
                        failing: Some((x, y, witness)),
                    });
                }
            }
        }
        Ok(Embeddability {
            embeddable: true,
            failing: None,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Embeddability {
    pub embeddable: bool,
    /// `(x, y, (u, v))`: `d(x,y)` fails cancellation on `u±v`.
    pub failing: Option<(usize, usize, (Word, Word))>,
}

fn check_map(f: &[usize], from: usize, to: usize) -> Result<()> {
    if f.len() != from {
        return Err(Error::Malformed(format!(
            "map has {} values for {} points",
            f.len(),
            from
        )));
    }
    if let Some(&bad) = f.iter().find(|&&v| v >= to) {
        return Err(Error::UnknownVertex(bad.to_string()));
    }
    Ok(())
}

/// All pairwise distances of a finite space valued in final segments.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DistanceMatrix {
    pub names: Vec<String>,
    pub entries: Vec<Vec<FinalSegment>>,
}

/// A failing split for the midpoint condition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MidpointFailure {
    pub x: usize,
    pub y: usize,
    pub u: Word,
    pub v: Word,
}

impl DistanceMatrix {
    pub fn new(names: Vec<String>, entries: Vec<Vec<FinalSegment>>) -> Result<DistanceMatrix> {
        if entries.len() != names.len() || entries.iter().any(|row| row.len() != names.len()) {
            return Err(Error::Malformed("distance matrix must be square".into()));
        }
        Ok(DistanceMatrix { names, entries })
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn get(&self, x: usize, y: usize) -> &FinalSegment {
        &self.entries[x][y]
    }

    /// Zero diagonal, `d(y,x) = d̄(x,y)` and the triangle inequality.
    pub fn check_axioms(&self) -> Result<()> {
        let n = self.len();
        let name = |i: usize| &self.names[i];
        for x in 0..n {
            if !self.entries[x][x].is_zero() {
                return Err(Error::AxiomViolation {
                    axiom: "zero diagonal",
                    witness: name(x).clone(),
                });
            }
            for y in 0..n {
                if self.entries[y][x] != self.entries[x][y].involution() {
                    return Err(Error::AxiomViolation {
                        axiom: "involution symmetry",
                        witness: format!("({}, {})", name(x), name(y)),
                    });
                }
                for z in 0..n {
                    let bound = self.entries[x][z].oplus(&self.entries[z][y])?;
                    if !self.entries[x][y].leq(&bound)? {
                        return Err(Error::AxiomViolation {
                            axiom: "triangle inequality",
                            witness: format!("({}, {}, {})", name(x), name(z), name(y)),
                        });
                    }
                }
            }
        }
        Ok(())
    }

    /// Checks that every split of every minimal word has a midpoint; returns the
    /// first failure.
    pub fn midpoint_failure(&self) -> Result<Option<MidpointFailure>> {
        self.check_axioms()?;
        let n = self.len();
        for x in 0..n {
            for y in 0..n {
                for w in self.entries[x][y].generators() {
                    for i in 0..=w.len() {
                        let (u, v) = w.split_at(i);
                        let ok = (0..n).any(|z| {
                            self.entries[x][z].contains(&u) && self.entries[z][y].contains(&v)
                        });
                        if !ok {
                            return Ok(Some(MidpointFailure { x, y, u, v }));
                        }
                    }
                }
            }
        }
        Ok(None)
    }

    pub fn satisfies_graph_condition(&self) -> Result<bool> {
        Ok(self.midpoint_failure()?.is_none())
    }

    /// `d'(f x, f y) ≤ d(x, y)` for all pairs.
    pub fn is_nonexpansive_to(&self, target: &DistanceMatrix, f: &[usize]) -> Result<bool> {
        check_map(f, self.len(), target.len())?;
        for x in 0..self.len() {
            for y in 0..self.len() {
                if !target.entries[f[x]][f[y]].leq(&self.entries[x][y])? {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "vertices": self.names,
            "distances": self.entries.iter().map(|row| row.iter().map(FinalSegment::to_json).collect::<Vec<_>>()).collect::<Vec<_>>(),
        })
    }
}
