use std::path::PathBuf;

use clap::Subcommand;
use gmetric::semirigid::{
    count_preserving_maps, has_center_of_symmetry, is_monogenic, plane_system, semirigid_witness, triangles,
    zadori_system, EquivSystem, PlanePoint, PlaneSet, SEARCH_GUARD,
};
use num_rational::BigRational;
use serde_json::{json, Value};

use super::CmdResult;
use crate::formats::{read_plane, read_system, write_system};
use crate::report::{Inputs, Outcome};

#[derive(Debug, Subcommand)]
pub enum SemirigidCmd {
    /// Whether the identity and the constants are the only preserving maps.
    Check {
        system: PathBuf,
        /// Also count all n^n maps (n ≤ 7).
        #[arg(long)]
        exhaustive: bool,
        /// Largest carrier the search accepts.
        #[arg(long, default_value_t = SEARCH_GUARD)]
        guard: usize,
    },
    /// The four-relation system of Zádori on n points.
    Zadori {
        n: usize,
        /// Decide semirigidity instead of printing the system.
        #[arg(long)]
        check: bool,
    },
    /// The triangle system of a finite plane set: kernels of x, y and x + y.
    Plane {
        points: PathBuf,
        /// Whether two points generate the set through triangles.
        #[arg(long)]
        monogenic: bool,
        /// Whether the set has a center of symmetry.
        #[arg(long)]
        symmetry: bool,
        /// Whether the triangle system is semirigid.
        #[arg(long)]
        check: bool,
    },
}

/// Appends the semirigidity verdict of `sys` to `outcome`.
fn decide(sys: &EquivSystem, guard: usize, outcome: &mut Outcome, summary: &mut Value) -> Result<bool, crate::CliError> {
    let witness = semirigid_witness(sys, guard)?;
    let ok = witness.is_none();
    summary["semirigid"] = json!(ok);
    outcome.text.push_str(&format!("semirigid: {ok}"));
    if let Some(f) = witness {
        outcome.text.push_str(&format!("\nwitness: preserving map {f:?}"));
        outcome.witnesses.push(json!({ "map": f }));
    }
    Ok(ok)
}

/// The midpoint of the lexicographically least and greatest points, which is
/// the only possible center, with a point whose reflection is not in the set.
fn asymmetry_witness(c: &PlaneSet) -> Option<(PlanePoint, PlanePoint)> {
    let lo = c.points().iter().min()?;
    let hi = c.points().iter().max()?;
    let two = BigRational::from_integer(2.into());
    let m = ((&lo.0 + &hi.0) / &two, (&lo.1 + &hi.1) / &two);
    let p = c.points().iter().find(|p| c.index(&(&m.0 * &two - &p.0, &m.1 * &two - &p.1)).is_none())?;
    Some((m, p.clone()))
}

pub fn run(cmd: &SemirigidCmd) -> CmdResult {
    match cmd {
        SemirigidCmd::Check { system, exhaustive, guard } => {
            let mut inputs = Inputs::new(&["semirigid", "check"]);
            let sys = read_system(&inputs.file(system)?)?;
            inputs.arg("guard", guard);
            let mut outcome = Outcome::property(true, Value::Null, "");
            let mut summary = json!({});
            let ok = decide(&sys, *guard, &mut outcome, &mut summary)?;
            if *exhaustive {
                inputs.arg("exhaustive", true);
                let count = count_preserving_maps(&sys)?;
                summary["preserving_maps"] = json!(count);
                outcome.text.push_str(&format!("\npreserving maps: {count}"));
            }
            outcome.holds = Some(ok);
            outcome.result = summary;
            Ok((outcome, inputs))
        }
        SemirigidCmd::Zadori { n, check } => {
            let mut inputs = Inputs::new(&["semirigid", "zadori"]);
            inputs.arg("n", n);
            let sys = zadori_system(*n)?;
            if !*check {
                let v = write_system(&sys);
                let text = serde_json::to_string(&v).expect("system serializes");
                return Ok((Outcome::computed(json!({ "system": v }), text), inputs));
            }
            inputs.arg("check", true);
            let mut outcome = Outcome::property(true, Value::Null, "");
            let mut summary = json!({ "system": write_system(&sys) });
            outcome.holds = Some(decide(&sys, SEARCH_GUARD, &mut outcome, &mut summary)?);
            outcome.result = summary;
            Ok((outcome, inputs))
        }
        SemirigidCmd::Plane { points, monogenic, symmetry, check } => {
            let mut inputs = Inputs::new(&["semirigid", "plane"]);
            let c = read_plane(&inputs.file(points)?)?;
            let sys = plane_system(&c);
            let tri = triangles(&c);
            let mut summary = json!({ "points": c.len(), "triangles": tri.len(), "system": write_system(&sys) });
            let mut outcome = Outcome::computed(Value::Null, format!("points: {}\ntriangles: {}", c.len(), tri.len()));
            let mut holds = true;
            let point = |i: usize| {
                let (x, y) = &c.points()[i];
                format!("({x}, {y})")
            };
            if *monogenic {
                inputs.arg("monogenic", true);
                let seed = is_monogenic(&c);
                summary["monogenic"] = json!(seed.is_some());
                outcome.text.push_str(&format!("\nmonogenic: {}", seed.is_some()));
                match &seed {
                    Some(seed) => {
                        let shown: Vec<String> = seed.iter().map(|&i| point(i)).collect();
                        outcome.text.push_str(&format!("\ngenerated by: {}", shown.join(", ")));
                        summary["generators"] = json!(shown);
                    }
                    None => {
                        outcome.text.push_str("\nwitness: no set of at most two points closes to the whole set");
                        outcome.witnesses.push(json!({ "generators": null }));
                    }
                }
                holds &= seed.is_some();
            }
            if *symmetry {
                inputs.arg("symmetry", true);
                let center = has_center_of_symmetry(&c);
                summary["symmetric"] = json!(center.is_some());
                outcome.text.push_str(&format!("\ncenter of symmetry: {}", center.as_ref().map_or("none".into(), |(x, y)| format!("({x}, {y})"))));
                match &center {
                    Some((x, y)) => summary["center"] = json!([x.to_string(), y.to_string()]),
                    None => {
                        if let Some((m, p)) = asymmetry_witness(&c) {
                            outcome.text.push_str(&format!(
                                "\nwitness: the only candidate center is ({}, {}) and the reflection of ({}, {}) is missing",
                                m.0, m.1, p.0, p.1
                            ));
                            outcome.witnesses.push(json!({
                                "candidate": [m.0.to_string(), m.1.to_string()],
                                "point": [p.0.to_string(), p.1.to_string()],
                            }));
                        }
                    }
                }
                holds &= center.is_some();
            }
            if *check {
                inputs.arg("check", true);
                outcome.text.push('\n');
                holds &= decide(&sys, SEARCH_GUARD, &mut outcome, &mut summary)?;
            }
            if *monogenic || *symmetry || *check {
                outcome.holds = Some(holds);
            }
            outcome.result = summary;
            Ok((outcome, inputs))
        }
    }
}
