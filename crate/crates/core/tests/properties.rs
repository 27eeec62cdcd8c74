use flexilab::io::{parse_json, parse_off, to_json, to_off};
use flexilab::generators::{generate, GENERATORS};
use flexilab::numeric::int;
use flexilab::poly::resultant::{resultant, sylvester_resultant};
use flexilab::poly::MultiPoly;
use flexilab::{AnyEmbedding, Rational};
use proptest::prelude::*;

const VARS: [&str; 2] = ["x", "y"];

/// Polynomial in `x, y` from small integer coefficients indexed by `(i, j)`.
fn poly(coeffs: &[(u32, u32, i64)]) -> MultiPoly {
    MultiPoly::from_terms(&VARS, coeffs.iter().map(|&(i, j, c)| (vec![i, j], int(c))))
}

fn small_poly(max_x: u32) -> impl Strategy<Value = MultiPoly> {
    prop::collection::vec((0..=max_x, 0..=2u32, -5i64..=5), 1..6)
        .prop_map(|c| poly(&c))
        .prop_filter("nonzero", |p| !p.is_zero())
}

/// Genuinely involves `x`, so resultants in `x` are defined.
fn x_poly(max_x: u32) -> impl Strategy<Value = MultiPoly> {
    small_poly(max_x).prop_filter("depends on x", |p| p.degree("x").unwrap() >= 1)
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn resultant_is_multiplicative(f in x_poly(2), g in x_poly(2), h in x_poly(3)) {
        let fg = &f * &g;
        let lhs = resultant(&fg, &h, "x").unwrap();
        let rhs = &resultant(&f, &h, "x").unwrap() * &resultant(&g, &h, "x").unwrap();
        // the identity needs the x-degrees to add up
        let deg = |p: &MultiPoly| p.degree("x").unwrap();
        prop_assume!(deg(&fg) == deg(&f) + deg(&g));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn subresultant_matches_sylvester(f in x_poly(3), g in x_poly(3)) {
        prop_assert_eq!(resultant(&f, &g, "x").unwrap(), sylvester_resultant(&f, &g, "x").unwrap());
    }

    #[test]
    fn substitution_commutes_with_evaluation(p in small_poly(3), q in small_poly(2), x in -4i64..=4, y in -4i64..=4) {
        let at = |r: &MultiPoly| r.evaluate(&[("x", int(x)), ("y", int(y))]).unwrap();
        let composed = p.compose("x", &q).unwrap();
        let direct = p.evaluate(&[("x", at(&q)), ("y", int(y))]).unwrap();
        prop_assert_eq!(at(&composed), direct);
    }

    #[test]
    fn json_round_trip_of_exact_coordinates(
        nums in prop::collection::vec((-1000i64..1000, 1i64..50), 18)
    ) {
        let inst = generate("regular-octahedron", 0).unwrap();
        let coords: Vec<[Rational; 3]> = nums
            .chunks(3)
            .map(|c| std::array::from_fn(|k| Rational::new(c[k].0.into(), c[k].1.into())))
            .collect();
        let emb = AnyEmbedding::Exact(flexilab::Embedding::new(coords));
        let (s, e) = parse_json(&to_json(&inst.surface, &emb)).unwrap();
        prop_assert_eq!(s.faces(), inst.surface.faces());
        prop_assert_eq!(e, emb);
    }
}

#[test]
fn every_generator_round_trips_through_json_and_off() {
    for g in GENERATORS {
        let inst = generate(g.name, 5).unwrap();
        let (s, e) = parse_json(&to_json(&inst.surface, &inst.embedding)).unwrap();
        assert_eq!(s.faces(), inst.surface.faces(), "{}", g.name);
        assert_eq!(e, inst.embedding, "{}", g.name);
        let floating = AnyEmbedding::Floating(inst.embedding.to_floating());
        let (s, e) = parse_off(&to_off(&inst.surface, &floating)).unwrap();
        assert_eq!(s.faces(), inst.surface.faces(), "{}", g.name);
        assert_eq!(e, floating, "{}", g.name);
    }
}

#[test]
fn malformed_inputs_are_rejected() {
    assert!(parse_json("{").is_err());
    assert!(parse_json(r#"{"n": 4, "faces": [[1,2,3]], "coords": []}"#).is_err());
    assert!(parse_off("OFF\n4 1 0\n0 0 0\n1 0 0\n0 1 0\n0 0 1\n4 0 1 2 3\n").is_err());
    assert!(parse_off("OFF\n3 1 0\n0 0 0\n1 0 0\n").is_err());
}
