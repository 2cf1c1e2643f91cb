use std::path::PathBuf;

use clap::Subcommand;
use gmetric::zcong::extend::preservation_failure;
use gmetric::zcong::{
    abelian_square_check, cgg_generator, extend_congruence_map, is_congruence_preserving, zn_affine_check, AffineOutcome,
    SquareOutcome,
};
use num_bigint::BigInt;
use serde_json::json;

use super::CmdResult;
use crate::formats::{read_doc, read_grid, read_pairs, read_poly, write_poly, SquareDoc};
use crate::report::{Inputs, Outcome};
use crate::CliError;

#[derive(Debug, Subcommand)]
pub enum ZcongCmd {
    /// Whether k divides P(x + k) - P(x) for all integers x and k.
    Check {
        #[arg(allow_hyphen_values = true)]
        poly: String,
    },
    /// The generator lcm(1..n)·C(x, n).
    Gen { n: usize },
    /// Extends a finite congruence-preserving partial map to one more point.
    #[command(allow_negative_numbers = true)]
    Extend { pairs: PathBuf, z: String },
    /// Whether a map on a box of Z^n is x ↦ a + m·x.
    Affine { grid: PathBuf },
    /// Whether a map on A × A preserves the sum and projection kernels.
    Square { input: PathBuf },
}

pub fn run(cmd: &ZcongCmd) -> CmdResult {
    match cmd {
        ZcongCmd::Check { poly } => {
            let mut inputs = Inputs::new(&["zcong", "check"]);
            inputs.arg("poly", poly);
            let p = read_poly(poly)?;
            let (ok, witness) = is_congruence_preserving(&p);
            let mut outcome = Outcome::property(ok, json!({ "preserving": ok, "poly": write_poly(&p) }), ok.to_string());
            if let Some((x, k)) = witness {
                outcome.text.push_str(&format!("\nwitness: ({x}, {k}): {k} does not divide P({x} + {k}) - P({x})"));
                outcome = outcome.with_witness(json!({ "x": x, "k": k }));
            }
            Ok((outcome, inputs))
        }
        ZcongCmd::Gen { n } => {
            let mut inputs = Inputs::new(&["zcong", "gen"]);
            inputs.arg("n", n);
            let g = cgg_generator(*n);
            let standard: Vec<String> = g.to_standard().iter().map(ToString::to_string).collect();
            let text = format!("{g}\nstandard coefficients: {}", standard.join(", "));
            let result = json!({ "poly": write_poly(&g), "standard": standard, "display": g.to_string() });
            Ok((Outcome::computed(result, text), inputs))
        }
        ZcongCmd::Extend { pairs, z } => {
            let mut inputs = Inputs::new(&["zcong", "extend"]);
            let f = read_pairs(&inputs.file(pairs)?)?;
            inputs.arg("z", z);
            let z: BigInt = z.trim().parse().map_err(|_| CliError::Input(format!("not an integer: {z}")))?;
            if let Some((a, b)) = preservation_failure(&f) {
                let outcome = Outcome::property(
                    false,
                    json!({ "extendable": false }),
                    format!("not congruence preserving\nwitness: {a} - {b} does not divide f({a}) - f({b})"),
                )
                .with_witness(json!({ "a": a.to_string(), "b": b.to_string() }));
                return Ok((outcome, inputs));
            }
            let v = extend_congruence_map(&f, &z)?;
            let outcome = Outcome::property(true, json!({ "extendable": true, "z": z.to_string(), "value": v.to_string() }), format!("f({z}) = {v}"));
            Ok((outcome, inputs))
        }
        ZcongCmd::Affine { grid } => {
            let mut inputs = Inputs::new(&["zcong", "affine"]);
            let g = read_grid(&inputs.file(grid)?)?;
            let out = zn_affine_check(&g)?;
            let result = serde_json::to_value(&out).expect("outcome serializes");
            let outcome = match &out {
                AffineOutcome::Affine { a, m } => Outcome::property(true, result, format!("affine: true\ng(x) = ({}) + {m}·x", a.join(", "))),
                AffineOutcome::NotAffine { witness } => {
                    let w = serde_json::to_value(witness).expect("witness serializes");
                    Outcome::property(false, result, format!("affine: false\nwitness: {w}")).with_witness(w)
                }
            };
            Ok((outcome, inputs))
        }
        ZcongCmd::Square { input } => {
            let mut inputs = Inputs::new(&["zcong", "square"]);
            let doc: SquareDoc = read_doc("square input", &inputs.file(input)?)?;
            let out = abelian_square_check(&doc.group, &doc.map)?;
            let result = serde_json::to_value(&out).expect("outcome serializes");
            let outcome = match &out {
                SquareOutcome::Decomposition { x0, y0, h } => Outcome::property(
                    true,
                    result,
                    format!("decomposes: true\nf(x, y) = ({x0}, {y0}) + (h(x), h(y)) with h = {h:?}"),
                ),
                _ => Outcome::property(false, result.clone(), format!("decomposes: false\nwitness: {result}")).with_witness(result),
            };
            Ok((outcome, inputs))
        }
    }
}
