use std::collections::BTreeMap;
use std::path::PathBuf;

use clap::Subcommand;
use gmetric::equiv::{
    crt_solve, distributivity_failure, kaarli_extend, orthogonal_family_search, sublattice_closure, CrtOutcome, Partition,
};
use serde_json::{json, Value};

use super::CmdResult;
use crate::formats::{read_doc, read_lattice, CrtDoc, ExtendDoc};
use crate::report::{Inputs, Outcome};

const CLOSURE_GUARD: usize = 1 << 12;

#[derive(Debug, Subcommand)]
pub enum EqvCmd {
    /// Whether a sublattice of partitions is distributive with commuting members.
    Arithmetical { lattice: PathBuf },
    /// Solves x ≡ a_i (θ_i) for constraints over a lattice of partitions.
    Crt { system: PathBuf },
    /// Extends a partial map preserving every member of the lattice by one point.
    Extend { input: PathBuf },
    /// A largest family of pairwise orthogonal partitions of an n-set.
    Orthogonal {
        n: usize,
        #[arg(long)]
        block_size: Option<usize>,
    },
}

fn show(p: &Partition) -> String {
    serde_json::to_string(p).expect("partition serializes")
}

fn val(p: &Partition) -> Value {
    serde_json::to_value(p).expect("partition serializes")
}

pub fn run(cmd: &EqvCmd) -> CmdResult {
    match cmd {
        EqvCmd::Arithmetical { lattice } => {
            let mut inputs = Inputs::new(&["eqv", "arithmetical"]);
            let l = read_lattice(&inputs.file(lattice)?)?;
            let outcome = match distributivity_failure(&l)? {
                Some((a, b, c)) => Outcome::property(
                    false,
                    json!({ "arithmetical": false, "distributive": false }),
                    format!("arithmetical: false\nwitness: not distributive, a = {}, b = {}, c = {}", show(&a), show(&b), show(&c)),
                )
                .with_witness(json!({ "kind": "distributivity", "a": val(&a), "b": val(&b), "c": val(&c) })),
                None => {
                    let mut pair = None;
                    'outer: for a in &l {
                        for b in &l {
                            if !a.commutes(b)? {
                                pair = Some((a, b));
                                break 'outer;
                            }
                        }
                    }
                    match pair {
                        None => Outcome::property(true, json!({ "arithmetical": true, "distributive": true }), "arithmetical: true"),
                        Some((a, b)) => Outcome::property(
                            false,
                            json!({ "arithmetical": false, "distributive": true }),
                            format!("arithmetical: false\nwitness: not permuting, {} and {}", show(a), show(b)),
                        )
                        .with_witness(json!({ "kind": "permutability", "a": val(a), "b": val(b) })),
                    }
                }
            };
            Ok((outcome, inputs))
        }
        EqvCmd::Crt { system } => {
            let mut inputs = Inputs::new(&["eqv", "crt"]);
            let doc: CrtDoc = read_doc("crt system", &inputs.file(system)?)?;
            let lattice = match &doc.lattice {
                Some(l) => l.clone(),
                None => {
                    let gens: Vec<Partition> = doc.constraints.iter().map(|c| c.1.clone()).collect();
                    sublattice_closure(&gens, CLOSURE_GUARD)?
                }
            };
            let outcome = match crt_solve(&lattice, &doc.constraints)? {
                CrtOutcome::Solved { x } => Outcome::property(true, json!({ "solved": true, "x": x }), format!("solution: {x}")),
                CrtOutcome::PairFails { i, j } => Outcome::property(
                    false,
                    json!({ "solved": false }),
                    format!("no solution\nwitness: constraints {i} and {j} disagree modulo the join of their relations"),
                )
                .with_witness(json!({ "kind": "pair", "i": i, "j": j })),
                CrtOutcome::NoSolution => Outcome::property(
                    false,
                    json!({ "solved": false }),
                    "no solution\nwitness: pairwise conditions hold but no element satisfies all constraints",
                )
                .with_witness(json!({ "kind": "global" })),
            };
            Ok((outcome, inputs))
        }
        EqvCmd::Extend { input } => {
            let mut inputs = Inputs::new(&["eqv", "extend"]);
            let doc: ExtendDoc = read_doc("extension input", &inputs.file(input)?)?;
            let f: BTreeMap<usize, usize> = doc.map.iter().copied().collect();
            if f.len() != doc.map.len() {
                return Err(crate::CliError::Input("a point is mapped twice".into()));
            }
            let e = kaarli_extend(&doc.lattice, &f, doc.z)?;
            let map: Vec<(usize, usize)> = e.map.into_iter().collect();
            let text = format!("f({}) = {}", e.z, e.x);
            let result = json!({ "z": e.z, "x": e.x, "map": map, "meet_closure_added": e.meet_closure_added });
            Ok((Outcome::computed(result, text), inputs))
        }
        EqvCmd::Orthogonal { n, block_size } => {
            let mut inputs = Inputs::new(&["eqv", "orthogonal"]);
            inputs.arg("n", n);
            if let Some(k) = block_size {
                inputs.arg("block_size", k);
            }
            let fam = orthogonal_family_search(*n, *block_size)?;
            let mut text = format!("{} pairwise orthogonal partitions", fam.size);
            for p in &fam.family {
                text.push_str(&format!("\n{}", show(p)));
            }
            Ok((Outcome::computed(serde_json::to_value(&fam).expect("family serializes"), text), inputs))
        }
    }
}
