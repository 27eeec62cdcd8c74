use std::path::PathBuf;
use std::process::{Command, Output};

use flexilab::generators::generate;
use flexilab::poly::cayley_menger::cayley_menger_tet;
use flexilab::poly::multipoly::PolyJson;
use flexilab::poly::volpoly::{classify, variable_names, ClassLabels};
use flexilab::poly::MultiPoly;
use serde_json::Value;

fn flexilab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_flexilab")).args(args).output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).expect("json output")
}

#[test]
fn analyze_regular_octahedron_is_rigid() {
    let o = flexilab(&["analyze", "--gen", "regular-octahedron", "--mode", "exact", "--no-family"]);
    assert_eq!(code(&o), 0);
    let r = json(&o);
    assert_eq!(r["schema"], "flexilab/report/v1");
    assert_eq!(r["flexibility"]["flex_dim"], 0);
    assert_eq!(r["flexibility"]["rank"], 12);
}

#[test]
fn analyze_flat_octahedron_is_planar_and_flexible() {
    let o = flexilab(&["analyze", "--gen", "flat-octahedron", "--no-family"]);
    assert_eq!(code(&o), 0);
    let r = json(&o);
    assert_eq!(r["planar_flag"], true);
    assert_eq!(r["flexibility"]["flexible"], true);
}

#[test]
fn validation_errors_exit_2() {
    assert_eq!(code(&flexilab(&["analyze", "nonexistent.json"])), 2);
    assert_eq!(code(&flexilab(&["analyze", "--gen", "no-such-generator"])), 2);
    assert_eq!(code(&flexilab(&["analyze", "--gen", "tetrahedron", "--eps", "0"])), 2);
    assert_eq!(code(&flexilab(&["analyze", "--gen", "tetrahedron", "--tol", "-1"])), 2);
    assert_eq!(code(&flexilab(&["analyze"])), 2);
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, r#"{"n": 4, "faces": [[1,2,3],[1,2,4]], "coords": []}"#).unwrap();
    let o = flexilab(&["analyze", bad.to_str().unwrap()]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("error"));
}

#[test]
fn ambiguous_tolerance_exits_3() {
    // a threshold of 0.3·σ_max lands within a factor 10 of nonzero singular values
    let o = flexilab(&["analyze", "--gen", "regular-octahedron", "--mode", "floating", "--tol", "0.3"]);
    assert_eq!(code(&o), 3, "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn volpoly_exit_codes_and_multiplicity() {
    assert_eq!(code(&flexilab(&["volpoly", "--gen", "steffen"])), 4);
    assert_eq!(code(&flexilab(&["volpoly", "--gen", "csaszar-torus"])), 4);
    assert_eq!(code(&flexilab(&["volpoly", "--gen", "regular-octahedron", "--symbolic"])), 4);
    let o = flexilab(&["volpoly", "--gen", "regular-octahedron", "--format", "text"]);
    assert_eq!(code(&o), 0);
    assert!(String::from_utf8_lossy(&o.stdout).contains("multiplicity 1 "));
}

fn golden_dir() -> PathBuf {
    std::env::var_os("FLEXILAB_GOLDEN_DIR")
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden"))
}

#[test]
fn bipyramid_symbolic_polynomial_matches_golden_file() {
    let o = flexilab(&["volpoly", "--gen", "bipyramid3", "--symbolic"]);
    assert_eq!(code(&o), 0);
    let golden = std::fs::read(golden_dir().join("bipyramid3_symbolic.json")).expect("golden file");
    assert_eq!(o.stdout, golden);
}

/// `(288V² − CM_a − CM_b)² − 4 CM_a CM_b` over the two tetrahedra of the bipyramid.
#[test]
fn golden_bipyramid_polynomial_matches_hand_algebra() {
    let inst = generate("bipyramid3", 0).unwrap();
    let s = &inst.surface;
    let ClassLabels::Bipyramid3 { equator, poles } = classify(s).unwrap() else { panic!("bipyramid") };
    let names = variable_names(s.edges().len());
    let vars: Vec<&str> = names.iter().map(String::as_str).collect();
    let l = |a: usize, b: usize| MultiPoly::var(&vars, vars[1 + s.edge_position(a, b).unwrap()]).unwrap();
    let cm = |p: usize| {
        let [e0, e1, e2] = equator;
        let d = [l(e0, e1), l(e0, e2), l(e0, p), l(e1, e2), l(e1, p), l(e2, p)];
        cayley_menger_tet([&d[0], &d[1], &d[2], &d[3], &d[4], &d[5]]).unwrap()
    };
    let (a, b) = (cm(poles.0), cm(poles.1));
    let v = MultiPoly::var(&vars, "V").unwrap();
    let w288 = (&v * &v).scale(&flexilab::numeric::int(288));
    let inner = &(&w288 - &a) - &b;
    let hand = &(&inner * &inner) - &(&a * &b).scale(&flexilab::numeric::int(4));

    let golden: Value =
        serde_json::from_slice(&std::fs::read(golden_dir().join("bipyramid3_symbolic.json")).unwrap()).unwrap();
    let pj: PolyJson = serde_json::from_value(golden["symbolic"].clone()).unwrap();
    let q = MultiPoly::from_json(&pj).unwrap();
    assert_eq!(q, hand.primitive_integer());
}

#[test]
fn verify_examples() {
    let o = flexilab(&["verify", "--gen", "bricard1", "--no-family"]);
    assert_eq!(code(&o), 0);
    assert!(String::from_utf8_lossy(&o.stdout).contains("verdict: Pass"));
    let o = flexilab(&["verify", "--gen", "generic-octahedron", "--seed", "7", "--no-family"]);
    assert_eq!(code(&o), 0);
    let out = String::from_utf8_lossy(&o.stdout);
    assert!(out.contains("verdict: NotApplicable") && out.contains("multiplicity: 1 "), "{out}");
    let o = flexilab(&["verify", "--gen", "flat-octahedron", "--no-family"]);
    assert_eq!(code(&o), 0);
    assert!(String::from_utf8_lossy(&o.stdout).contains("verdict: Pass"));
}

#[test]
fn generate_round_trips_through_files() {
    let dir = tempfile::tempdir().unwrap();
    for ext in ["json", "off"] {
        let path = dir.path().join(format!("bricard.{ext}"));
        let p = path.to_str().unwrap();
        assert_eq!(code(&flexilab(&["generate", "--gen", "bricard1", "--output", p])), 0);
        let mode = if ext == "off" { "floating" } else { "exact" };
        let o = flexilab(&["analyze", "--input", p, "--mode", mode, "--no-family"]);
        assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
        assert_eq!(json(&o)["flexibility"]["flex_dim"], 1);
    }
}

#[test]
fn outputs_are_written_to_files_identically() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    for p in [&a, &b] {
        let o = flexilab(&["analyze", "--gen", "tetrahedron", "--output", p.to_str().unwrap()]);
        assert_eq!(code(&o), 0);
    }
    assert_eq!(std::fs::read(a).unwrap(), std::fs::read(b).unwrap());
}
