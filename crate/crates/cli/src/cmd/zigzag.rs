use std::path::PathBuf;

use clap::Subcommand;
use gmetric::Alphabet;
use serde_json::json;

use super::CmdResult;
use crate::formats::read_graph;
use crate::report::{Inputs, Outcome};

#[derive(Debug, Subcommand)]
pub enum ZigzagCmd {
    /// Distance matrix of a graph, or one distance with --from and --to.
    Dist {
        graph: PathBuf,
        #[arg(long, requires = "to")]
        from: Option<String>,
        #[arg(long, requires = "from")]
        to: Option<String>,
    },
    /// Whether every distance satisfies the cancellation rule.
    Embeddable { graph: PathBuf },
    /// Shortest up-first and down-first fences between two poset elements.
    Fence {
        poset: PathBuf,
        #[arg(long)]
        from: String,
        #[arg(long)]
        to: String,
    },
}

pub fn run(cmd: &ZigzagCmd) -> CmdResult {
    match cmd {
        ZigzagCmd::Dist { graph, from, to } => {
            let mut inputs = Inputs::new(&["zigzag", "dist"]);
            let g = read_graph(&inputs.file(graph)?)?;
            let outcome = match (from, to) {
                (Some(a), Some(b)) => {
                    inputs.arg("from", a);
                    inputs.arg("to", b);
                    let d = g.distance(g.vertex(a)?, g.vertex(b)?)?;
                    let text = format!("d({a}, {b}) = {}", d.to_json());
                    Outcome::computed(json!({ "from": a, "to": b, "distance": d.to_json() }), text)
                }
                _ => {
                    let m = g.distance_matrix()?.to_json();
                    let rows: Vec<String> = m["distances"].as_array().expect("rows").iter().map(|r| format!("    {r}")).collect();
                    let text = format!("{{\n  \"vertices\": {},\n  \"distances\": [\n{}\n  ]\n}}", m["vertices"], rows.join(",\n"));
                    Outcome::computed(m, text)
                }
            };
            Ok((outcome, inputs))
        }
        ZigzagCmd::Embeddable { graph } => {
            let mut inputs = Inputs::new(&["zigzag", "embeddable"]);
            let g = read_graph(&inputs.file(graph)?)?;
            let e = g.oriented_embeddable()?;
            let mut outcome =
                Outcome::property(e.embeddable, json!({ "embeddable": e.embeddable }), format!("embeddable: {}", e.embeddable));
            if let Some((x, y, (u, v))) = e.failing {
                let a = Alphabet::signed();
                let (x, y, u, v) = (&g.names()[x], &g.names()[y], a.format(&u), a.format(&v));
                outcome.text.push_str(&format!("\nwitness: u = {u:?}, v = {v:?}: d({x}, {y}) contains u+v and u-v but not uv"));
                outcome = outcome.with_witness(json!({ "x": x, "y": y, "u": u, "v": v }));
            }
            Ok((outcome, inputs))
        }
        ZigzagCmd::Fence { poset, from, to } => {
            let mut inputs = Inputs::new(&["zigzag", "fence"]);
            let g = read_graph(&inputs.file(poset)?)?;
            inputs.arg("from", from);
            inputs.arg("to", to);
            let (up, down) = g.fence_distance(g.vertex(from)?, g.vertex(to)?)?;
            let show = |d: Option<usize>| d.map_or("none".to_string(), |d| d.to_string());
            let text = format!("fence {from} -> {to}: up-first {}, down-first {}", show(up), show(down));
            Ok((Outcome::computed(json!({ "from": from, "to": to, "up_first": up, "down_first": down }), text), inputs))
        }
    }
}
