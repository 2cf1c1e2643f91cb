use std::process::Command;

use gmetric_cli::formats::*;
use gmetric_cli::run;
use proptest::prelude::*;

fn fixture(name: &str) -> String {
    format!("{}/fixtures/{name}", env!("CARGO_MANIFEST_DIR"))
}

fn gm(args: &[&str]) -> gmetric_cli::Rendered {
    let argv = std::iter::once("gmetric".to_string()).chain(args.iter().map(|a| {
        if a.ends_with(".json") {
            fixture(a)
        } else {
            a.to_string()
        }
    }));
    run(argv)
}

fn json(args: &[&str]) -> serde_json::Value {
    let mut with = vec!["--json"];
    with.extend_from_slice(args);
    serde_json::from_str(&gm(&with).stdout).expect("json report")
}

#[test]
fn zigzag_dist_on_the_two_chain() {
    let out = gm(&["zigzag", "dist", "chain2.json"]);
    assert_eq!(out.code, 0);
    let m: serde_json::Value = serde_json::from_str(&out.stdout).unwrap();
    assert_eq!(m["vertices"], serde_json::json!(["a", "b"]));
    assert_eq!(m["distances"], serde_json::json!([[[""], ["+"]], [["-"], [""]]]));
    let one = gm(&["zigzag", "dist", "cycle3.json", "--from", "a", "--to", "b"]);
    assert_eq!(one.stdout.trim(), r#"d(a, b) = ["+","--"]"#);
}

#[test]
fn zadori_six_check() {
    let out = gm(&["semirigid", "zadori", "6", "--check"]);
    assert_eq!((out.code, out.stdout.trim()), (0, "semirigid: true"));
}

#[test]
fn binomial_two_is_rejected() {
    let out = gm(&["zcong", "check", "x^2/2 - x/2"]);
    assert_eq!(out.code, 1);
    let mut lines = out.stdout.lines();
    assert_eq!(lines.next(), Some("false"));
    assert!(lines.next().unwrap().starts_with("witness: (0, 2)"));
    let r = json(&["zcong", "check", "x^2/2 - x/2"]);
    assert_eq!(r["witnesses"][0], serde_json::json!({ "x": 0, "k": 2 }));
    assert_eq!(gm(&["zcong", "check", "x^2*(x-1)^2/2"]).code, 0);
    assert_eq!(gm(&["zcong", "check", "-x"]).code, 0);
}

#[test]
fn exit_codes() {
    let cases: &[(&[&str], i32)] = &[
        (&["zigzag", "embeddable", "cycle3.json"], 1),
        (&["zigzag", "embeddable", "zigzag4.json"], 0),
        (&["zigzag", "fence", "crown.json", "--from", "a", "--to", "b"], 0),
        (&["zigzag", "fence", "cycle3.json", "--from", "a", "--to", "b"], 2),
        (&["gms", "check", "vee_space.json"], 0),
        (&["gms", "hyperconvex", "chain2_space.json"], 0),
        (&["gms", "hyperconvex", "divisors12.json"], 1),
        (&["gms", "fpp", "divisors12.json"], 1),
        (&["gms", "bounded", "vee_space.json"], 0),
        (&["eqv", "arithmetical", "z6_lattice.json"], 0),
        (&["eqv", "arithmetical", "m3_lattice.json"], 1),
        (&["eqv", "crt", "crt_z6.json"], 0),
        (&["eqv", "extend", "extend_z6.json"], 0),
        (&["eqv", "orthogonal", "4"], 0),
        (&["zcong", "gen", "4"], 0),
        (&["zcong", "extend", "pairs.json", "5"], 0),
        (&["zcong", "extend", "pairs_bad.json", "1"], 1),
        (&["zcong", "extend", "pairs.json", "1"], 2),
        (&["zcong", "affine", "affine2.json"], 0),
        (&["zcong", "affine", "swap2.json"], 1),
        (&["zcong", "square", "klein_square.json"], 0),
        (&["zcong", "check", "x/2"], 2),
        (&["semirigid", "check", "zadori6.json"], 0),
        (&["semirigid", "check", "m3_lattice.json"], 1),
        (&["semirigid", "zadori", "4"], 2),
        (&["semirigid", "plane", "t2.json", "--monogenic", "--check"], 0),
        (&["semirigid", "plane", "t2.json", "--symmetry"], 1),
        (&["freemon", "factor", "antichain_product.json"], 0),
        (&["freemon", "irreducible", "antichain.json"], 0),
        (&["freemon", "irreducible", "antichain_product.json"], 1),
        (&["freemon", "factor", "missing.json"], 2),
        (&["bogus"], 2),
        (&["zcong"], 2),
        (&["--jobs", "0", "zcong", "gen", "2"], 2),
    ];
    for (args, code) in cases {
        let out = gm(args);
        assert_eq!(out.code, *code, "{args:?}: {out:?}");
        if *code == 1 {
            assert!(out.stdout.contains("witness"), "{args:?}: {}", out.stdout);
        }
    }
}

#[test]
fn command_results() {
    assert_eq!(json(&["zcong", "extend", "pairs.json", "5"])["result"]["value"], "25");
    assert_eq!(json(&["zcong", "extend", "pairs.json", "-3"])["result"]["value"], "9");
    assert_eq!(json(&["eqv", "crt", "crt_z6.json"])["result"]["x"], 5);
    let e = json(&["eqv", "extend", "extend_z6.json"]);
    assert_eq!(e["result"]["x"].as_u64().unwrap() % 2, 0);
    let a = json(&["zcong", "affine", "affine2.json"]);
    assert_eq!(a["result"], serde_json::json!({ "status": "affine", "a": ["2", "-1"], "m": "3" }));
    let f = json(&["freemon", "factor", "antichain_abc.json"]);
    assert_eq!(f["result"]["factors"], serde_json::json!([["a"], ["bc", "cb"]]));
    let p = json(&["semirigid", "plane", "t2.json", "--monogenic", "--symmetry", "--check"]);
    assert_eq!(p["result"]["triangles"], 5);
    assert_eq!(p["result"]["monogenic"], true);
    assert_eq!(p["result"]["symmetric"], false);
    assert_eq!(p["result"]["semirigid"], true);
    let s = json(&["semirigid", "check", "zadori6.json", "--exhaustive"]);
    assert_eq!(s["result"]["preserving_maps"], 7);
}

#[test]
fn reports_are_deterministic() {
    let runs: &[&[&str]] = &[
        &["zigzag", "dist", "cycle3.json"],
        &["gms", "fpp", "divisors12.json"],
        &["semirigid", "check", "m3_lattice.json"],
        &["eqv", "orthogonal", "5"],
        &["freemon", "factor", "antichain_product.json"],
    ];
    for args in runs {
        let a = json(args);
        let b = json(args);
        assert_eq!(a, b);
        let mut jobs = vec!["--jobs", "4"];
        jobs.extend_from_slice(args);
        assert_eq!(json(&jobs), a, "{args:?}");
        assert!(a.get("timing_ms").is_none());
    }
    let timed = json(&["--timing", "zcong", "gen", "3"]);
    assert!(timed["timing_ms"].is_u64());
}

#[test]
fn digest_tracks_inputs() {
    let a = json(&["zcong", "check", "x^2"]);
    let b = json(&["zcong", "check", "x^3"]);
    let c = json(&["--seed", "7", "zcong", "check", "x^2"]);
    assert_ne!(a["inputs"], b["inputs"]);
    assert_ne!(a["inputs"], c["inputs"]);
    assert_eq!(c["seed"], 7);
    assert_eq!(a["inputs"].as_str().unwrap().len(), 64);
}

#[test]
fn binary_prints_and_exits() {
    let out = Command::new(env!("CARGO_BIN_EXE_gmetric"))
        .args(["zcong", "check", "x^2/2 - x/2"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8(out.stdout).unwrap().starts_with("false\n"));
    let out = Command::new(env!("CARGO_BIN_EXE_gmetric")).args(["semirigid", "zadori", "4"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8(out.stderr).unwrap().starts_with("error:"));
}

fn read(name: &str) -> String {
    std::fs::read_to_string(fixture(name)).unwrap()
}

macro_rules! round_trip {
    ($reader:expr, $writer:expr, $text:expr) => {{
        let first = $reader(&$text).unwrap();
        let again = $reader(&format!("{}", $writer(&first))).unwrap();
        assert_eq!(first, again);
    }};
}

#[test]
fn fixtures_round_trip() {
    for g in ["chain2.json", "cycle3.json", "zigzag4.json", "crown.json"] {
        round_trip!(read_graph, write_graph, read(g));
    }
    for s in ["chain2_space.json", "vee_space.json", "divisors12.json"] {
        round_trip!(read_space, write_space, read(s));
    }
    for s in ["zadori6.json", "z6_lattice.json", "m3_lattice.json"] {
        round_trip!(read_system, write_system, read(s));
    }
    for a in ["antichain.json", "antichain_product.json", "antichain_abc.json"] {
        round_trip!(read_antichain, write_antichain, read(a));
    }
    for g in ["affine2.json", "swap2.json"] {
        round_trip!(read_grid, write_grid, read(g));
    }
    round_trip!(read_plane, write_plane, read("t2.json"));
    round_trip!(read_pairs, write_pairs, read("pairs.json"));
    round_trip!(|s: &str| read_doc::<CrtDoc>("crt", s), write_doc, read("crt_z6.json"));
    round_trip!(|s: &str| read_doc::<ExtendDoc>("extend", s), write_doc, read("extend_z6.json"));
    round_trip!(|s: &str| read_doc::<SquareDoc>("square", s), write_doc, read("klein_square.json"));
    for p in ["x^2/2 - x/2", "3*C(x,4) - 7", r#"{"binomial": ["1", "0", "-2"]}"#] {
        round_trip!(read_poly, write_poly, p);
        assert_eq!(read_poly(&read_poly(p).unwrap().to_string()).unwrap(), read_poly(p).unwrap());
    }
}

proptest! {
    #[test]
    fn polynomials_round_trip(coeffs in proptest::collection::vec(-50i64..50, 0..7)) {
        let p = gmetric::IntPoly::from_i64(&coeffs);
        prop_assert_eq!(read_poly(&write_poly(&p).to_string()).unwrap(), p.clone());
        prop_assert_eq!(read_poly(&p.to_string()).unwrap(), p);
    }

    #[test]
    fn pairs_round_trip(pairs in proptest::collection::btree_map(-1000i64..1000, -1000i64..1000, 0..6)) {
        let text = serde_json::to_string(&pairs.iter().collect::<Vec<_>>()).unwrap();
        round_trip!(read_pairs, write_pairs, text);
    }

    #[test]
    fn plane_sets_round_trip(points in proptest::collection::btree_set((-5i64..5, 1i64..4, -5i64..5), 1..8)) {
        let pts: Vec<serde_json::Value> =
            points.iter().map(|(x, d, y)| serde_json::json!([format!("{x}/{d}"), y])).collect();
        let text = serde_json::to_string(&pts).unwrap();
        if let Ok(first) = read_plane(&text) {
            prop_assert_eq!(read_plane(&write_plane(&first).to_string()).unwrap(), first);
        }
    }

    #[test]
    fn antichains_round_trip(words in proptest::collection::vec("[+-]{0,4}", 1..5)) {
        round_trip!(read_antichain, write_antichain, serde_json::to_string(&words).unwrap());
    }

    #[test]
    fn systems_round_trip(labels in proptest::collection::vec(proptest::collection::vec(0usize..3, 5), 1..4)) {
        let relations: Vec<gmetric::Partition> = labels.iter().map(|l| gmetric::Partition::from_labels(l)).collect();
        let text = serde_json::to_string(&relations).unwrap();
        round_trip!(read_system, write_system, text);
    }
}
