//! One line per acceptance criterion; the test fails if any line is red.

#[path = "../../core/tests/common/mod.rs"]
mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::Command;
use std::time::{Duration, Instant};

use common::{cubic_through, oracle_rank, random_points, rng};
use flexilab::generators::{generate, GENERATORS};
use flexilab::numeric::{cross3, int, norm2, rat, sub3};
use flexilab::poly::multiplicity::{multiplicity_exact, multiplicity_in_v};
use flexilab::poly::volpoly::{specialize, variable_names, volume_polynomial, SpecializeOptions};
use flexilab::rigidity::{
    flex_analysis_exact, flex_analysis_floating, is_trivial_exact, trivial_generators, DEFAULT_TOLERANCE,
};
use flexilab::verify::{default_eps, eps_identity_check, AnalysisOptions};
use flexilab::volume::{diagonal_rates, oriented_volume, perturb, volume_expansion};
use flexilab::{CombinatorialSurface, Embedding, Rational};
use num_traits::Zero;

/// Relative tolerance of the floating finite-difference check.
const FD_REL_TOL: f64 = 1e-9;
const NEGATIVE_CONTROL_SEEDS: u64 = 20;
const RANDOM_SYMBOLIC: usize = 100;
const RANDOM_OCTAHEDRA: usize = 25;

fn exact(name: &str, seed: u64) -> (CombinatorialSurface, Embedding<Rational>) {
    let inst = generate(name, seed).unwrap();
    (inst.surface, inst.embedding.to_exact().unwrap())
}

fn check(ok: bool, msg: impl Into<String>) -> Result<(), String> {
    ok.then_some(()).ok_or_else(|| msg.into())
}

fn c1_edge_law() -> Result<String, String> {
    for name in ["regular-octahedron", "tetrahedron", "bipyramid3", "steffen", "csaszar-torus"] {
        let (s, _) = exact(name, 0);
        let (n, g, e) = (s.vertex_count(), s.genus(), s.edges().len());
        check(e + 6 == 3 * n + 6 * g, format!("{name}: |E|={e}, n={n}, g={g}"))?;
    }
    Ok("|E| = 3n + 6g − 6 exactly on 5 face lists".into())
}

fn c2_rigidity() -> Result<String, String> {
    let (s, e) = exact("regular-octahedron", 0);
    let fa = flex_analysis_exact(&s, &e).map_err(|e| e.to_string())?;
    check(fa.rank == 12 && fa.flex_dim == 0 && oracle_rank(&s, e.coords()) == 12, "regular octahedron")?;
    for name in ["flat-octahedron", "bricard1"] {
        let (s, e) = exact(name, 0);
        let fa = flex_analysis_exact(&s, &e).map_err(|e| e.to_string())?;
        let oracle = oracle_rank(&s, e.coords());
        check(fa.flex_dim >= 1 && fa.rank == oracle, format!("{name}: flex_dim {} rank {} oracle {oracle}", fa.flex_dim, fa.rank))?;
    }
    Ok("regular rank 12/flex 0; flat and bricard1 flex ≥ 1; ranks equal the independent oracle".into())
}

fn c3_perturbation_law() -> Result<String, String> {
    let mut checked = 0;
    for g in GENERATORS {
        let (s, e) = exact(g.name, 0);
        let base = e.squared_edge_lengths(&s);
        for f in flex_analysis_exact(&s, &e).unwrap().nontrivial_basis {
            for eps in [rat(1, 10), rat(-1, 10), rat(1, 1000), rat(-1, 1000)] {
                let moved = perturb(&e, &f.vectors, &eps).squared_edge_lengths(&s);
                for (k, &(i, j)) in s.edges().iter().enumerate() {
                    let l2 = norm2(&sub3(&f.vectors[i], &f.vectors[j]));
                    check((&moved[k] - &base[k] - &eps * &eps * l2).is_zero(), format!("{} edge {k}", g.name))?;
                    checked += 1;
                }
            }
        }
    }
    Ok(format!("l²(ε) − l² − ε²L² = 0 exactly on {checked} (edge, ε, flex) triples"))
}

fn c4_expansion() -> Result<String, String> {
    let (s, e) = exact("regular-octahedron", 0);
    let v0 = oriented_volume(&s, &e);
    let zero = vec![[int(0), int(0), int(0)]; 6];
    check(volume_expansion(&s, &e, &zero).coeffs == [v0.clone(), int(0), int(0), int(0)], "zero field")?;
    let gens = trivial_generators(&e);
    for t in &gens[..3] {
        let c = volume_expansion(&s, &e, t).coeffs;
        check(c[1].is_zero() && c[2].is_zero() && c[3].is_zero(), "translation")?;
    }
    let omega = [int(2), int(-1), int(3)];
    let rot: Vec<[Rational; 3]> = e.coords().iter().map(|x| cross3(&omega, x)).collect();
    let c = volume_expansion(&s, &e, &rot).coeffs;
    check(c[1].is_zero() && c[3].is_zero() && c[2] == &v0 * norm2(&omega), "rotation: V2 ≠ |ω|²V0")?;

    let xs = [int(-2), int(-1), int(1), int(3)];
    let mut worst: f64 = 0.0;
    for g in GENERATORS {
        let (s, e) = exact(g.name, 0);
        let mut fields: Vec<_> = flex_analysis_exact(&s, &e).unwrap().nontrivial_basis.into_iter().map(|f| f.vectors).collect();
        fields.push(random_points(&mut rng(4), s.vertex_count(), 9, 4));
        for z in &fields {
            let ys = xs.clone().map(|x| oriented_volume(&s, &perturb(&e, z, &x)));
            check(cubic_through(&xs, &ys) == volume_expansion(&s, &e, z).coeffs, format!("{} exact", g.name))?;
        }
        let ef = e.to_floating();
        let ff = flex_analysis_floating(&s, &ef, DEFAULT_TOLERANCE).unwrap();
        let mut ffields: Vec<Vec<[f64; 3]>> = ff.nontrivial_basis.into_iter().map(|f| f.vectors).collect();
        ffields.extend(fields.iter().map(|z| z.iter().map(flexilab::numeric::to_f64_3).collect()));
        for z in &ffields {
            let v = |t: f64| oriented_volume(&s, &perturb(&ef, z, &t));
            let (p1, m1, p2, m2) = (v(1.0), v(-1.0), v(2.0), v(-2.0));
            let fd = [(8.0 * (p1 - m1) - (p2 - m2)) / 12.0, (p1 + m1) / 2.0 - v(0.0), ((p2 - m2) - 2.0 * (p1 - m1)) / 12.0];
            let sym = volume_expansion(&s, &ef, z).coeffs;
            let scale = sym.iter().map(|c| c.abs()).fold(1.0, f64::max);
            for k in 0..3 {
                worst = worst.max((fd[k] - sym[k + 1]).abs() / scale);
            }
        }
    }
    check(worst <= FD_REL_TOL, format!("floating finite differences off by {worst:e}"))?;
    Ok(format!("zero/translation/rotation laws exact; finite differences exact (exact mode), max rel {worst:.1e} ≤ {FD_REL_TOL:e} (floating)"))
}

fn symbolic_vanishing(name: &str, seed: u64) -> Result<(), String> {
    let (s, _) = exact(name, 0);
    let q = volume_polynomial(&s).map_err(|e| e.to_string())?;
    let names = variable_names(s.edges().len());
    let mut r = rng(seed);
    for k in 0..RANDOM_SYMBOLIC {
        let e = Embedding::new(random_points(&mut r, s.vertex_count(), 20, 3));
        let mut vals: Vec<(&str, Rational)> = vec![("V", oriented_volume(&s, &e))];
        vals.extend(names[1..].iter().map(String::as_str).zip(e.squared_edge_lengths(&s)));
        check(q.poly().evaluate(&vals).unwrap().is_zero(), format!("{name} sample {k}"))?;
    }
    Ok(())
}

fn c5_identity_vanishing() -> Result<String, String> {
    symbolic_vanishing("tetrahedron", 501)?;
    symbolic_vanishing("bipyramid3", 502)?;
    let (s, _) = exact("regular-octahedron", 0);
    let mut r = rng(503);
    let opts = SpecializeOptions { jobs: 4, ..Default::default() };
    for k in 0..RANDOM_OCTAHEDRA {
        let e = Embedding::new(random_points(&mut r, 6, 9, 1));
        let v = oriented_volume(&s, &e);
        let q = specialize(&s, &e.squared_edge_lengths(&s), &opts).map_err(|e| e.to_string())?;
        check(q.raw.eval(&(&v * &v)).is_zero(), format!("octahedron sample {k}"))?;
    }
    Ok(format!("exact zero on {RANDOM_SYMBOLIC} tetrahedra, {RANDOM_SYMBOLIC} bipyramids, {RANDOM_OCTAHEDRA} octahedra"))
}

fn multiplicities(name: &str, seed: u64) -> (usize, usize, usize) {
    let (s, e) = exact(name, seed);
    let v0 = oriented_volume(&s, &e);
    let q = specialize(&s, &e.squared_edge_lengths(&s), &SpecializeOptions { jobs: 4, ..Default::default() }).unwrap();
    (multiplicity_exact(&q.raw, &v0), multiplicity_exact(&q.squarefree, &v0), multiplicity_in_v(&q.raw_in_v(), &v0))
}

fn c6_multiple_root() -> Result<String, String> {
    let mut detail = Vec::new();
    for name in ["bricard1", "flat-octahedron"] {
        let (raw, sqf, via_v) = multiplicities(name, 0);
        check(raw >= 2 && sqf >= 2 && raw == via_v, format!("{name}: raw {raw}, square-free {sqf}, via V {via_v}"))?;
        detail.push(format!("{name} {raw}/{sqf}"));
    }
    for seed in 0..NEGATIVE_CONTROL_SEEDS {
        let (s, e) = exact("generic-octahedron", seed);
        check(oracle_rank(&s, e.coords()) == 12, format!("generic seed {seed} not rigid"))?;
        let (_, sqf, _) = multiplicities("generic-octahedron", seed);
        check(sqf == 1, format!("negative control seed {seed}: square-free multiplicity {sqf}"))?;
    }
    Ok(format!(
        "multiplicity raw/square-free: {}; {NEGATIVE_CONTROL_SEEDS} rigid generic octahedra all 1",
        detail.join(", ")
    ))
}

fn c7_diagonals() -> Result<String, String> {
    let (s, e) = exact("bricard1", 0);
    for f in flex_analysis_exact(&s, &e).unwrap().nontrivial_basis {
        check(diagonal_rates(&s, &e, &f.vectors).iter().any(|r| !r.degenerate && !r.rate.dot.is_zero()), "bricard1")?;
    }
    let (s, e) = exact("flat-octahedron", 0);
    let fa = flex_analysis_exact(&s, &e).unwrap();
    check(fa.flex_dim >= 1, "flat octahedron rigid")?;
    for f in fa.nontrivial_basis {
        check(!is_trivial_exact(&e, &f.vectors), "flat flex trivial")?;
        check(diagonal_rates(&s, &e, &f.vectors).iter().all(|r| r.rate.dot.is_zero()), "flat diagonal moves")?;
    }
    Ok("bricard1 moves a small diagonal; every flat-octahedron flex keeps all small diagonals still".into())
}

fn c8_family_identity() -> Result<String, String> {
    let opts = AnalysisOptions { jobs: 4, ..Default::default() };
    let mut cases: Vec<(String, CombinatorialSurface, Embedding<Rational>, Vec<[Rational; 3]>)> = Vec::new();
    let (s, e) = exact("bricard1", 0);
    let z = flex_analysis_exact(&s, &e).unwrap().nontrivial_basis[0].vectors.clone();
    cases.push(("bricard1".into(), s, e, z));
    let (s, e) = exact("bipyramid3", 0);
    let mut r = rng(801);
    let mut embeddings = vec![e];
    embeddings.extend((0..3).map(|_| Embedding::new(random_points(&mut r, 5, 9, 2))));
    for (k, e) in embeddings.into_iter().enumerate() {
        // rigid: the family follows an infinitesimal rotation
        let z = trivial_generators(&e).swap_remove(5);
        cases.push((format!("bipyramid3#{k}"), s.clone(), e, z));
    }
    for (name, s, e, z) in &cases {
        let q = volume_polynomial(s).ok();
        let rep = eps_identity_check(s, e, z, q.as_ref(), &default_eps(), &opts).map_err(|e| e.to_string())?;
        check(rep.composed_is_zero, format!("{name}: composed identity nonzero"))?;
        for row in &rep.rows {
            check(row.lengths_law, format!("{name}: length law at ε={}", row.eps))?;
            check(row.residual == "0", format!("{name}: residual {} at ε={}", row.residual, row.eps))?;
            check(row.derivative_residual == "0", format!("{name}: derivative residual at ε={}", row.eps))?;
        }
    }
    Ok(format!("Q(V(P_ε), l(ε)) ≡ 0 in ε and its ε-derivative is 0 at all default ε for {} instances", cases.len()))
}

fn c9_determinism() -> Result<String, String> {
    let dir = std::env::temp_dir().join(format!("flexilab-acceptance-{}", std::process::id()));
    std::fs::create_dir_all(&dir).map_err(|e| e.to_string())?;
    let mut outputs = Vec::new();
    for k in 0..2 {
        let report = dir.join(format!("report{k}.json"));
        let o = Command::new(env!("CARGO_BIN_EXE_flexilab"))
            .args(["verify", "--gen", "bricard1", "--seed", "1", "--mode", "exact", "--output"])
            .arg(&report)
            .output()
            .map_err(|e| e.to_string())?;
        check(o.status.success(), format!("exit {:?}", o.status.code()))?;
        outputs.push((o.stdout, std::fs::read(&report).map_err(|e| e.to_string())?));
    }
    let _ = std::fs::remove_dir_all(&dir);
    check(outputs[0] == outputs[1], "reports differ")?;
    Ok(format!("two runs byte-identical ({} report bytes)", outputs[0].1.len()))
}

/// Bypasses libtest's output capture so the lines show in a plain `cargo test`.
fn report(line: String) {
    use std::io::Write;
    let _ = writeln!(std::io::stderr(), "{line}");
}

#[test]
fn acceptance() {
    type Criterion = (u32, &'static str, Duration, fn() -> Result<String, String>);
    let criteria: [Criterion; 9] = [
        (1, "edge-count law", Duration::from_secs(1), c1_edge_law),
        (2, "rigidity verdicts", Duration::from_secs(5), c2_rigidity),
        (3, "perturbation law", Duration::from_secs(5), c3_perturbation_law),
        (4, "volume expansion", Duration::from_secs(5), c4_expansion),
        (5, "identity vanishing", Duration::from_secs(600), c5_identity_vanishing),
        (6, "multiple root + negative control", Duration::from_secs(900), c6_multiple_root),
        (7, "small diagonals", Duration::from_secs(5), c7_diagonals),
        (8, "family identity", Duration::from_secs(120), c8_family_identity),
        (9, "determinism", Duration::from_secs(600), c9_determinism),
    ];
    let mut failed = Vec::new();
    for (n, title, budget, run) in criteria {
        let t = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|_| Err("panicked".into()));
        let elapsed = t.elapsed();
        let outcome = match outcome {
            Ok(_) if elapsed > budget => Err(format!("over budget {:.0?}", budget)),
            o => o,
        };
        match outcome {
            Ok(detail) => report(format!("criterion {n} [{title}]: PASS — {detail} ({:.2}s)", elapsed.as_secs_f64())),
            Err(why) => {
                report(format!("criterion {n} [{title}]: FAIL — {why} ({:.2}s)", elapsed.as_secs_f64()));
                failed.push(n);
            }
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
