mod common;

use common::{random_points, rng};
use flexilab::generators::{generate, tetrahedron};
use flexilab::numeric::int;
use flexilab::poly::diagonal::{diagonal_polynomial, DiagonalChoice};
use flexilab::poly::multiplicity::{multiplicity_exact, multiplicity_in_v};
use flexilab::poly::octahedron::generic_w_polynomial;
use flexilab::poly::volpoly::{
    classify, specialize, variable_names, volume_polynomial, ClassLabels, PolyClass, SpecializeOptions,
};
use flexilab::rigidity::flex_analysis_exact;
use flexilab::volume::oriented_volume;
use flexilab::{CombinatorialSurface, Embedding, Rational};

fn surface_of(name: &str) -> CombinatorialSurface {
    generate(name, 0).unwrap().surface
}

fn symbolic_vanishes(name: &str, seed: u64, count: usize) {
    let s = surface_of(name);
    let q = volume_polynomial(&s).unwrap();
    assert!(q.is_even());
    let names = variable_names(s.edges().len());
    let mut r = rng(seed);
    for _ in 0..count {
        let e = Embedding::new(random_points(&mut r, s.vertex_count(), 20, 3));
        let v = oriented_volume(&s, &e);
        let mut vals: Vec<(&str, Rational)> = vec![("V", v)];
        vals.extend(names[1..].iter().map(String::as_str).zip(e.squared_edge_lengths(&s)));
        assert_eq!(q.poly().evaluate(&vals).unwrap(), int(0), "{name}");
    }
}

#[test]
fn tetrahedron_polynomial_vanishes_on_random_embeddings() {
    symbolic_vanishes("tetrahedron", 101, 100);
}

#[test]
fn bipyramid_polynomial_vanishes_on_random_embeddings() {
    symbolic_vanishes("bipyramid3", 102, 100);
}

#[test]
fn octahedron_polynomial_vanishes_on_random_embeddings() {
    let s = surface_of("regular-octahedron");
    let mut r = rng(103);
    let opts = SpecializeOptions { jobs: 4, ..Default::default() };
    for _ in 0..25 {
        let e = Embedding::new(random_points(&mut r, 6, 9, 1));
        let v = oriented_volume(&s, &e);
        let q = specialize(&s, &e.squared_edge_lengths(&s), &opts).unwrap();
        assert_eq!(q.raw.degree(), 8);
        assert_eq!(q.raw.eval(&(&v * &v)), int(0));
        assert_eq!(q.squarefree.eval(&(&v * &v)), int(0));
    }
}

#[test]
fn tetrahedron_polynomial_is_the_cayley_menger_relation() {
    let q = volume_polynomial(&tetrahedron().surface).unwrap();
    assert_eq!(q.class(), PolyClass::Tetrahedron);
    assert_eq!(q.half_degree(), 1);
    let e = tetrahedron().embedding.to_exact().unwrap();
    let w = q.specialize(&e.squared_edge_lengths(&tetrahedron().surface)).unwrap();
    // unit right corner: V² = 1/36
    assert_eq!(w.monic().coeffs(), &[Rational::new((-1).into(), 36.into()), int(1)]);
}

#[test]
fn bipyramid_polynomial_has_degree_four() {
    let q = volume_polynomial(&surface_of("bipyramid3")).unwrap();
    assert_eq!(q.poly().degree("V").unwrap(), 4);
    assert_eq!(q.coefficients().len(), 3);
}

#[test]
fn symbolic_octahedron_polynomial_is_not_materialized() {
    assert!(volume_polynomial(&surface_of("regular-octahedron")).is_err());
}

#[test]
fn modular_and_exact_octahedron_evaluators_agree() {
    let inst = generate("generic-octahedron", 3).unwrap();
    let e = inst.embedding.to_exact().unwrap();
    let ClassLabels::Octahedron(lab) = classify(&inst.surface).unwrap() else { panic!("octahedron") };
    let l = e.squared_edge_lengths(&inst.surface);
    let exact = generic_w_polynomial(&inst.surface, &lab, &l).expect("generic lengths");
    let modular = specialize(&inst.surface, &l, &SpecializeOptions::default()).unwrap();
    assert_eq!(exact.monic(), modular.raw);
}

#[test]
fn specialization_is_independent_of_the_interpolation_line() {
    let inst = generate("bricard1", 0).unwrap();
    let l = inst.embedding.to_exact().unwrap().squared_edge_lengths(&inst.surface);
    let a = specialize(&inst.surface, &l, &SpecializeOptions { seed: 1, jobs: 4 }).unwrap();
    let b = specialize(&inst.surface, &l, &SpecializeOptions { seed: 2, jobs: 4 }).unwrap();
    assert_eq!(a, b);
}

fn multiplicities(name: &str, seed: u64) -> (usize, usize, usize) {
    let inst = generate(name, seed).unwrap();
    let e = inst.embedding.to_exact().unwrap();
    let v0 = oriented_volume(&inst.surface, &e);
    let q = specialize(&inst.surface, &e.squared_edge_lengths(&inst.surface), &SpecializeOptions { jobs: 4, ..Default::default() })
        .unwrap();
    (multiplicity_exact(&q.raw, &v0), multiplicity_exact(&q.squarefree, &v0), multiplicity_in_v(&q.raw_in_v(), &v0))
}

#[test]
fn flexible_octahedra_have_a_multiple_root() {
    for name in ["bricard1", "flat-octahedron"] {
        let (raw, sqf, via_v) = multiplicities(name, 0);
        assert!(raw >= 2 && sqf >= 2, "{name}: {raw} {sqf}");
        assert_eq!(raw, via_v, "{name}");
    }
}

#[test]
fn rigid_generic_octahedra_have_a_simple_root() {
    for seed in 0..20 {
        let inst = generate("generic-octahedron", seed).unwrap();
        let e = inst.embedding.to_exact().unwrap();
        assert_eq!(flex_analysis_exact(&inst.surface, &e).unwrap().flex_dim, 0);
        assert_eq!(common::oracle_rank(&inst.surface, e.coords()), 12);
        let (raw, sqf, via_v) = multiplicities("generic-octahedron", seed);
        assert_eq!((raw, sqf, via_v), (1, 1, 1), "seed {seed}");
    }
}

#[test]
fn diagonal_relations_vanish_at_the_actual_diagonals() {
    let mut instances = vec![generate("bricard1", 0).unwrap().embedding.to_exact().unwrap()];
    let mut r = rng(104);
    instances.extend((0..3).map(|_| Embedding::new(random_points(&mut r, 6, 9, 1))));
    let s = surface_of("regular-octahedron");
    for e in instances {
        let v = oriented_volume(&s, &e);
        let l = e.squared_edge_lengths(&s);
        for which in [DiagonalChoice::T1, DiagonalChoice::T2] {
            let g = diagonal_polynomial(&s, &l, which, 4).unwrap();
            let (a, b) = g.endpoints();
            assert_eq!(g.evaluate(&v, &e.squared_distance(a, b)).unwrap(), int(0), "{which:?}");
            assert!(g.degree() >= 1);
        }
    }
}
