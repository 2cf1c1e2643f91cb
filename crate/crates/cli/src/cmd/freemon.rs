use std::path::PathBuf;

use clap::Subcommand;
use gmetric::freemon::{decompose_once, factorize, is_irreducible};
use gmetric::FinalSegment;
use serde_json::{json, Value};

use super::CmdResult;
use crate::formats::read_antichain;
use crate::report::{Inputs, Outcome};

#[derive(Debug, Subcommand)]
pub enum FreemonCmd {
    /// Irreducible factors of the final segment generated by an antichain.
    Factor { antichain: PathBuf },
    /// Whether the final segment is not a product of two segments other than 0.
    Irreducible { antichain: PathBuf },
}

fn show(f: &FinalSegment) -> String {
    f.to_json().to_string()
}

pub fn run(cmd: &FreemonCmd) -> CmdResult {
    match cmd {
        FreemonCmd::Factor { antichain } => {
            let mut inputs = Inputs::new(&["freemon", "factor"]);
            let f = read_antichain(&inputs.file(antichain)?)?;
            let factors = factorize(&f)?;
            let shown: Vec<String> = factors.iter().map(show).collect();
            let text = if shown.is_empty() { "no factors (the unit 0)".to_string() } else { shown.join(" · ") };
            let result = json!({ "factors": factors.iter().map(FinalSegment::to_json).collect::<Vec<Value>>() });
            Ok((Outcome::computed(result, text), inputs))
        }
        FreemonCmd::Irreducible { antichain } => {
            let mut inputs = Inputs::new(&["freemon", "irreducible"]);
            let f = read_antichain(&inputs.file(antichain)?)?;
            let ok = is_irreducible(&f)?;
            let mut outcome = Outcome::property(ok, json!({ "irreducible": ok }), format!("irreducible: {ok}"));
            if !ok {
                match decompose_once(&f)?.into_iter().next() {
                    Some((g, h)) => {
                        outcome.text.push_str(&format!("\nwitness: {} · {}", show(&g), show(&h)));
                        outcome = outcome.with_witness(json!({ "left": g.to_json(), "right": h.to_json() }));
                    }
                    None => {
                        outcome.text.push_str("\nwitness: the unit 0");
                        outcome = outcome.with_witness(json!({ "unit": true }));
                    }
                }
            }
            Ok((outcome, inputs))
        }
    }
}
