use std::path::PathBuf;

use clap::Subcommand;
use serde_json::json;

use super::CmdResult;
use crate::formats::read_space;
use crate::report::{Inputs, Outcome};

#[derive(Debug, Subcommand)]
pub enum GmsCmd {
    /// The three distance axioms.
    Check { space: PathBuf },
    /// Convexity together with the 2-Helly property.
    Hyperconvex { space: PathBuf },
    /// Whether every non-expansive self map has a fixed point.
    Fpp { space: PathBuf },
    /// Whether 0 is the only inaccessible value below the diameter.
    Bounded { space: PathBuf },
}

pub fn run(cmd: &GmsCmd) -> CmdResult {
    match cmd {
        GmsCmd::Check { space } => {
            let mut inputs = Inputs::new(&["gms", "check"]);
            let g = read_space(&inputs.file(space)?)?;
            let report = g.check_axioms();
            let ok = report.passes();
            let mut outcome = Outcome::property(ok, json!({ "axioms": ok }), format!("axioms: {ok}"));
            for v in &report.violations {
                let pts: Vec<&str> = v.points.iter().map(|&p| g.names()[p].as_str()).collect();
                outcome.text.push_str(&format!("\nwitness: axiom {} fails at {}", v.axiom, pts.join(", ")));
                outcome = outcome.with_witness(json!({ "axiom": v.axiom, "points": pts }));
            }
            Ok((outcome, inputs))
        }
        GmsCmd::Hyperconvex { space } => {
            let mut inputs = Inputs::new(&["gms", "hyperconvex"]);
            let g = read_space(&inputs.file(space)?)?;
            let ok = g.is_hyperconvex()?;
            let m = g.monoid();
            let name = |p: usize| g.names()[p].clone();
            let mut outcome = Outcome::property(ok, json!({ "hyperconvex": ok }), format!("hyperconvex: {ok}"));
            if let Some((x, y, p, q)) = g.convexity_failure() {
                let (x, y, p, q) = (name(x), name(y), m.name(p), m.name(q));
                outcome.text.push_str(&format!("\nwitness: not convex, d({x}, {y}) <= {p} + {q} with no point between"));
                outcome = outcome.with_witness(json!({ "kind": "convexity", "x": x, "y": y, "p": p, "q": q }));
            } else if let Some(balls) = g.helly_failure() {
                let balls: Vec<(String, &str)> = balls.iter().map(|&(c, r)| (name(c), m.name(r))).collect();
                let shown: Vec<String> = balls.iter().map(|(c, r)| format!("B({c}, {r})")).collect();
                outcome.text.push_str(&format!("\nwitness: not 2-Helly, {} meet pairwise but not together", shown.join(", ")));
                outcome = outcome.with_witness(json!({ "kind": "helly", "balls": balls }));
            }
            Ok((outcome, inputs))
        }
        GmsCmd::Fpp { space } => {
            let mut inputs = Inputs::new(&["gms", "fpp"]);
            let g = read_space(&inputs.file(space)?)?;
            let r = g.fpp_check()?;
            let mut outcome = Outcome::property(r.has_fpp, json!({ "fpp": r.has_fpp }), format!("fixed point property: {}", r.has_fpp));
            if let Some(f) = r.witness {
                let map: Vec<(&str, &str)> = f.iter().enumerate().map(|(x, &y)| (g.names()[x].as_str(), g.names()[y].as_str())).collect();
                let shown: Vec<String> = map.iter().map(|(x, y)| format!("{x}->{y}")).collect();
                outcome.text.push_str(&format!("\nwitness: fixed-point-free non-expansive map {}", shown.join(" ")));
                outcome = outcome.with_witness(json!({ "map": map }));
            }
            Ok((outcome, inputs))
        }
        GmsCmd::Bounded { space } => {
            let mut inputs = Inputs::new(&["gms", "bounded"]);
            let g = read_space(&inputs.file(space)?)?;
            let ok = g.is_bounded()?;
            let diameter = g.monoid().name(g.diameter()?).to_string();
            let text = format!("bounded: {ok}\ndiameter: {diameter}");
            Ok((Outcome::property(ok, json!({ "bounded": ok, "diameter": diameter }), text), inputs))
        }
    }
}
