use flexilab::generators::generate;
use flexilab::verify::{analyze, render_text, AnalysisOptions, AnalysisReport, Mode, ProofPath, Verdict};

fn run(name: &str, seed: u64, mode: Mode, family_identity: bool) -> AnalysisReport {
    let inst = generate(name, seed).unwrap();
    let opts = AnalysisOptions { mode, family_identity, jobs: 4, ..Default::default() };
    analyze(&inst.name, &inst.params, &inst.surface, &inst.embedding, &opts).unwrap()
}

#[test]
fn bricard_report_passes_with_family_identity() {
    let r = run("bricard1", 1, Mode::Exact, true);
    assert_eq!(r.theorem_verdict, Verdict::Pass);
    assert_eq!(r.flexibility.flex_dim, 1);
    assert_eq!(r.flexes[0].proof_path, ProofPath::ThirdOrder);
    let w = r.flexes[0].two_root_witness.as_ref().unwrap();
    assert!(w.odd_part_identity);
    assert!(r.diagonal_witness.is_some());
    assert!(r.flexes[0].parity.iter().all(|p| p.identity_holds && p.nonzero_odd_parts > 0));
    let m = r.multiplicity.as_ref().unwrap();
    assert!(m.raw >= 2 && m.squarefree >= 2 && m.double_root);
    assert_eq!(m.raw, m.raw_via_v);
    let f = r.family_identity.as_ref().unwrap();
    assert!(f.composed_is_zero && f.all_zero);
    assert_eq!(f.rows.len(), 7);
    assert!(render_text(&r).contains("Pass"));
}

#[test]
fn bipyramid_family_identity_along_a_rotation() {
    let r = run("bipyramid3", 0, Mode::Exact, true);
    assert_eq!(r.theorem_verdict, Verdict::NotApplicable);
    let f = r.family_identity.as_ref().unwrap();
    assert!(f.flex_index.is_none());
    assert!(f.composed_is_zero && f.all_zero);
    assert!(r.volume_polynomial.as_ref().unwrap().symbolic.is_some());
}

#[test]
fn flat_octahedron_passes_without_diagonal_witness() {
    let r = run("flat-octahedron", 0, Mode::Exact, false);
    assert!(r.planar_flag);
    assert_eq!(r.theorem_verdict, Verdict::Pass);
    assert!(r.diagonal_witness.is_none());
    assert!(r.flexes.iter().all(|f| f.nonzero_rate_count == 0));
}

#[test]
fn rigid_and_unsupported_instances_are_not_applicable() {
    let r = run("generic-octahedron", 7, Mode::Exact, false);
    assert_eq!(r.theorem_verdict, Verdict::NotApplicable);
    assert_eq!(r.multiplicity.as_ref().unwrap().squarefree, 1);
    let r = run("steffen", 0, Mode::Exact, false);
    assert_eq!(r.flexibility.flex_dim, 2);
    assert_eq!(r.theorem_verdict, Verdict::NotApplicable);
    assert!(r.volume_polynomial.is_none() && r.volume_polynomial_note.is_some());
}

#[test]
fn floating_passes_are_reproduced_exactly() {
    for name in ["bricard1", "flat-octahedron"] {
        let f = run(name, 0, Mode::Floating, false);
        assert_eq!(f.theorem_verdict, Verdict::Pass, "{name}");
        assert_eq!(run(name, 0, Mode::Exact, false).theorem_verdict, Verdict::Pass, "{name}");
    }
}

#[test]
fn reports_are_deterministic() {
    let a = run("flat-octahedron", 1, Mode::Exact, true).to_json();
    let b = run("flat-octahedron", 1, Mode::Exact, true).to_json();
    assert_eq!(a, b);
    assert!(a.contains("\"schema\": \"flexilab/report/v1\""));
}

#[test]
fn options_change_the_instance_hash() {
    let a = run("tetrahedron", 0, Mode::Exact, false);
    let b = run("tetrahedron", 0, Mode::Floating, false);
    assert_ne!(a.instance.hash, b.instance.hash);
}
