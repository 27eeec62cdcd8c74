//! Built-in instances.
//!
//! Every generator is deterministic in its name, parameters and seed; the
//! parameters are recorded on the instance so reports can hash them.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::embedding::{AnyEmbedding, Embedding};
use crate::error::GeneratorError;
use crate::numeric::{cross3, dot3, format_rational, int, rat, scale3, sub3, Rational};
use crate::rigidity::flex_analysis_exact;
use crate::surface::{catalog, CombinatorialSurface};

/// A named surface with coordinates.
#[derive(Debug, Clone)]
pub struct Instance {
    pub name: String,
    /// Generator parameters as `(key, value)` pairs, in a fixed order.
    pub params: Vec<(String, String)>,
    pub surface: CombinatorialSurface,
    pub embedding: AnyEmbedding,
}

#[derive(Debug, Clone, Serialize)]
pub struct GeneratorInfo {
    pub name: &'static str,
    pub description: &'static str,
}

pub const GENERATORS: &[GeneratorInfo] = &[
    GeneratorInfo { name: "regular-octahedron", description: "vertices (±1,0,0), (0,±1,0), (0,0,±1)" },
    GeneratorInfo { name: "generic-octahedron", description: "seeded rational perturbation of the regular octahedron" },
    GeneratorInfo { name: "flat-octahedron", description: "octahedron with all vertices in the plane z = 0" },
    GeneratorInfo { name: "bricard1", description: "line-symmetric flexible octahedron (self-certified)" },
    GeneratorInfo { name: "bipyramid3", description: "triangular bipyramid" },
    GeneratorInfo { name: "tetrahedron", description: "tetrahedron with a unit right corner" },
    GeneratorInfo { name: "steffen", description: "9-vertex, 14-face flexible polyhedron glued from two line-symmetric octahedra" },
    GeneratorInfo { name: "csaszar-torus", description: "7-vertex torus, vertices on the moment curve" },
];

fn pt(x: i64, y: i64, z: i64) -> [Rational; 3] {
    [int(x), int(y), int(z)]
}

fn point_param(p: &[Rational; 3]) -> String {
    format!("({},{},{})", format_rational(&p[0]), format_rational(&p[1]), format_rational(&p[2]))
}

fn build(name: &str, n: usize, faces: Vec<[usize; 3]>, coords: Vec<[Rational; 3]>, params: Vec<(String, String)>) -> Instance {
    let surface = CombinatorialSurface::new(n, faces).expect("catalog faces are valid");
    Instance { name: name.into(), params, surface, embedding: AnyEmbedding::Exact(Embedding::new(coords)) }
}

/// Generates an instance by name. `seed` only affects seeded generators.
pub fn generate(name: &str, seed: u64) -> Result<Instance, GeneratorError> {
    match name {
        "regular-octahedron" => Ok(regular_octahedron()),
        "generic-octahedron" => Ok(generic_octahedron(seed)),
        "flat-octahedron" => Ok(flat_octahedron()),
        "bricard1" => bricard1(&BricardParams::default()),
        "bipyramid3" | "bipyramid" => Ok(bipyramid3(&BIPYRAMID_DEFAULT)),
        "tetrahedron" => Ok(tetrahedron()),
        "steffen" => steffen(&BricardParams::default()),
        "csaszar-torus" => Ok(csaszar_torus()),
        other => Err(GeneratorError::UnknownName(other.into())),
    }
}

pub fn regular_octahedron() -> Instance {
    let c = vec![pt(1, 0, 0), pt(0, 1, 0), pt(-1, 0, 0), pt(0, -1, 0), pt(0, 0, 1), pt(0, 0, -1)];
    build("regular-octahedron", 6, catalog::OCTAHEDRON.to_vec(), c, Vec::new())
}

/// Each coordinate of the regular octahedron moved by `k/97`, `|k| ≤ 20`.
pub fn generic_octahedron(seed: u64) -> Instance {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let base = regular_octahedron();
    let AnyEmbedding::Exact(e) = &base.embedding else { unreachable!() };
    let coords = e
        .coords()
        .iter()
        .map(|p| {
            let mut q = p.clone();
            for c in q.iter_mut() {
                *c += rat(rng.gen_range(-20i64..=20), 97);
            }
            q
        })
        .collect();
    build("generic-octahedron", 6, catalog::OCTAHEDRON.to_vec(), coords, vec![("seed".into(), seed.to_string())])
}

pub fn flat_octahedron() -> Instance {
    let c = vec![pt(0, 0, 0), pt(7, 1, 0), pt(8, 6, 0), pt(1, 7, 0), pt(3, 4, 0), pt(5, 2, 0)];
    build("flat-octahedron", 6, catalog::OCTAHEDRON.to_vec(), c, Vec::new())
}

/// A line-symmetric octahedron: with the half-turn `R` about the z-axis,
/// the vertices are `a, b, R(a), R(b)` (equator) and `c, R(c)` (poles), so
/// every pair of opposite vertices is swapped by `R`.
#[derive(Debug, Clone, PartialEq)]
pub struct BricardParams {
    pub a: [Rational; 3],
    pub b: [Rational; 3],
    pub c: [Rational; 3],
}

impl Default for BricardParams {
    fn default() -> Self {
        Self { a: pt(2, 1, 1), b: pt(-1, 3, 2), c: pt(1, -2, 3) }
    }
}

fn half_turn_z(p: &[Rational; 3]) -> [Rational; 3] {
    [-p[0].clone(), -p[1].clone(), p[2].clone()]
}

fn bricard_coords(p: &BricardParams) -> Vec<[Rational; 3]> {
    vec![p.a.clone(), p.b.clone(), half_turn_z(&p.a), half_turn_z(&p.b), p.c.clone(), half_turn_z(&p.c)]
}

fn bricard_params(p: &BricardParams) -> Vec<(String, String)> {
    vec![("a".into(), point_param(&p.a)), ("b".into(), point_param(&p.b)), ("c".into(), point_param(&p.c))]
}

fn certify(inst: Instance) -> Result<Instance, GeneratorError> {
    let AnyEmbedding::Exact(e) = &inst.embedding else { unreachable!("generators are exact") };
    let fa = flex_analysis_exact(&inst.surface, e).map_err(|err| GeneratorError::CertificationFailed(err.to_string()))?;
    if fa.flex_dim == 0 {
        return Err(GeneratorError::CertificationFailed(format!(
            "{} is infinitesimally rigid (rank {})",
            inst.name, fa.rank
        )));
    }
    Ok(inst)
}

/// Line-symmetric flexible octahedron; refuses parameters that give a rigid
/// (or degenerate) embedding.
pub fn bricard1(p: &BricardParams) -> Result<Instance, GeneratorError> {
    let coords = bricard_coords(p);
    for i in 0..coords.len() {
        for j in i + 1..coords.len() {
            if coords[i] == coords[j] {
                return Err(GeneratorError::BadParams("coincident vertices".into()));
            }
        }
    }
    certify(build("bricard1", 6, catalog::OCTAHEDRON.to_vec(), coords, bricard_params(p)))
}

pub const BIPYRAMID_DEFAULT: [[i64; 3]; 5] = [[0, 0, 0], [4, 1, 0], [1, 3, 1], [2, 1, 3], [1, 2, -2]];

pub fn bipyramid3(points: &[[i64; 3]; 5]) -> Instance {
    let c = points.iter().map(|p| pt(p[0], p[1], p[2])).collect();
    let params = points.iter().enumerate().map(|(k, p)| (format!("p{k}"), format!("({},{},{})", p[0], p[1], p[2]))).collect();
    build("bipyramid3", 5, catalog::BIPYRAMID3.to_vec(), c, params)
}

pub fn tetrahedron() -> Instance {
    let c = vec![pt(0, 0, 0), pt(1, 0, 0), pt(0, 1, 0), pt(0, 0, 1)];
    build("tetrahedron", 4, catalog::TETRAHEDRON.to_vec(), c, Vec::new())
}

/// Seven-vertex torus with vertex `i` at `(i, i², i³)`.
pub fn csaszar_torus() -> Instance {
    let c = (0..7i64).map(|i| pt(i, i * i, i * i * i)).collect();
    build("csaszar-torus", 7, catalog::csaszar_torus(), c, Vec::new())
}

/// Reflection in the plane through `a`, `b`, `c`.
fn reflect(p: &[Rational; 3], a: &[Rational; 3], b: &[Rational; 3], c: &[Rational; 3]) -> [Rational; 3] {
    let n = cross3(&sub3(b, a), &sub3(c, a));
    let k = dot3(&sub3(p, a), &n) / dot3(&n, &n);
    sub3(p, &scale3(&(int(2) * k), &n))
}

/// Face list of the 9-vertex flexible polyhedron. Vertices: `0 = A`,
/// `1 = B`, `2 = C`, `3 = C'`, `4, 5` the remaining octahedron vertices, and
/// `6, 7, 8` the mirror images of `3, 4, 5`.
pub fn steffen_faces() -> Vec<[usize; 3]> {
    // octahedron index -> vertex, for both halves
    let first = [0, 1, 4, 5, 2, 3];
    let second = [0, 1, 7, 8, 2, 6];
    let mut faces = Vec::with_capacity(14);
    for f in catalog::OCTAHEDRON {
        if f.contains(&0) && f.contains(&1) {
            continue;
        }
        faces.push([first[f[0]], first[f[1]], first[f[2]]]);
        // the mirrored half carries the opposite orientation
        faces.push([second[f[0]], second[f[2]], second[f[1]]]);
    }
    faces.push([1, 0, 3]);
    faces.push([0, 1, 6]);
    faces
}

/// Two copies of a line-symmetric octahedron, each with the two faces at
/// the hinge `AB` removed, the second reflected in the plane `ABC` and glued
/// to the first along `A–C–B`; the hole is closed by two triangles on `AB`.
/// Both halves flex together (the reflection keeps the triangle `ABC`
/// fixed), so the result is flexible; it is not embedded.
pub fn steffen(p: &BricardParams) -> Result<Instance, GeneratorError> {
    let oct = bricard_coords(p);
    // octahedron roles: A = e0, B = e1, C = north, C' = south
    let (a, b, c) = (&oct[0], &oct[1], &oct[4]);
    let m = |q: &[Rational; 3]| reflect(q, a, b, c);
    let coords = vec![
        a.clone(),
        b.clone(),
        c.clone(),
        oct[5].clone(),
        oct[2].clone(),
        oct[3].clone(),
        m(&oct[5]),
        m(&oct[2]),
        m(&oct[3]),
    ];
    let surface = CombinatorialSurface::new(9, steffen_faces()).map_err(|e| GeneratorError::BadParams(e.to_string()))?;
    certify(Instance {
        name: "steffen".into(),
        params: bricard_params(p),
        surface,
        embedding: AnyEmbedding::Exact(Embedding::new(coords)),
    })
}
