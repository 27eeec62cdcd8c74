//! Volume polynomials `Q(V, l)`: monic, even in `V`, coefficients polynomial
//! in the squared edge lengths, vanishing on every embedding of the class.
//!
//! Tetrahedra and triangular bipyramids are built symbolically from
//! Cayley–Menger determinants. Octahedra are only available specialized at
//! a length vector: the coefficients are recovered exactly by interpolation
//! along a generic line through that vector (each coefficient of `W^(D−i)`,
//! `W = V²`, is homogeneous of degree `3i` in the lengths).

use std::fmt;

use num_traits::One;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::PolyError;
use crate::numeric::{int, Rational};
use crate::poly::cayley_menger::cayley_menger_tet;
use crate::poly::multipoly::MultiPoly;
use crate::poly::octahedron::{self, OctaLabels, OCTAHEDRON_W_DEGREE};
use crate::poly::unipoly::{interpolate, UniPoly};
use crate::surface::CombinatorialSurface;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum PolyClass {
    Tetrahedron,
    Bipyramid3,
    Octahedron,
}

impl PolyClass {
    pub fn name(&self) -> &'static str {
        match self {
            PolyClass::Tetrahedron => "tetrahedron",
            PolyClass::Bipyramid3 => "bipyramid3",
            PolyClass::Octahedron => "octahedron",
        }
    }

    /// Degree of the volume polynomial in `W = V²`.
    pub fn w_degree(&self) -> usize {
        match self {
            PolyClass::Tetrahedron => 1,
            PolyClass::Bipyramid3 => 2,
            PolyClass::Octahedron => OCTAHEDRON_W_DEGREE,
        }
    }
}

impl fmt::Display for PolyClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A supported class together with the roles of the vertices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ClassLabels {
    Tetrahedron([usize; 4]),
    /// Equatorial triangle and the two apexes.
    Bipyramid3 { equator: [usize; 3], poles: (usize, usize) },
    Octahedron(OctaLabels),
}

impl ClassLabels {
    pub fn class(&self) -> PolyClass {
        match self {
            ClassLabels::Tetrahedron(_) => PolyClass::Tetrahedron,
            ClassLabels::Bipyramid3 { .. } => PolyClass::Bipyramid3,
            ClassLabels::Octahedron(_) => PolyClass::Octahedron,
        }
    }
}

/// Recognizes the combinatorial class of a surface.
pub fn classify(surface: &CombinatorialSurface) -> Result<ClassLabels, PolyError> {
    let n = surface.vertex_count();
    let f = surface.faces().len();
    if surface.genus() != 0 {
        return Err(PolyError::UnsupportedClass);
    }
    match (n, f) {
        (4, 4) => Ok(ClassLabels::Tetrahedron([0, 1, 2, 3])),
        (5, 6) => {
            let poles: Vec<usize> = (0..n).filter(|&v| surface.vertex_degree(v) == 3).collect();
            if poles.len() != 2 || surface.has_edge(poles[0], poles[1]) {
                return Err(PolyError::UnsupportedClass);
            }
            let eq: Vec<usize> = (0..n).filter(|v| !poles.contains(v)).collect();
            Ok(ClassLabels::Bipyramid3 { equator: [eq[0], eq[1], eq[2]], poles: (poles[0], poles[1]) })
        }
        (6, 8) if (0..n).all(|v| surface.vertex_degree(v) == 4) => {
            let &(north, south) = surface.non_edges().last().ok_or(PolyError::UnsupportedClass)?;
            let link = surface.link_cycle(north);
            if link.len() != 4 {
                return Err(PolyError::UnsupportedClass);
            }
            Ok(ClassLabels::Octahedron(OctaLabels { equator: [link[0], link[1], link[2], link[3]], north, south }))
        }
        _ => Err(PolyError::UnsupportedClass),
    }
}

/// Like [`classify`], but insists on a particular class.
pub fn classify_as(surface: &CombinatorialSurface, class: PolyClass) -> Result<ClassLabels, PolyError> {
    match classify(surface) {
        Ok(l) if l.class() == class => Ok(l),
        _ => Err(PolyError::ClassMismatch(class.name().into())),
    }
}

/// Names of the polynomial variables: `V`, then `l_1..l_m` in edge order.
pub fn variable_names(edge_count: usize) -> Vec<String> {
    std::iter::once("V".to_string()).chain((1..=edge_count).map(|k| format!("l_{k}"))).collect()
}

/// Symbolic volume polynomial with integer coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct VolumePolynomial {
    poly: MultiPoly,
    class: PolyClass,
}

impl VolumePolynomial {
    /// The polynomial with coprime integer coefficients (positive leading
    /// coefficient in `V`).
    pub fn poly(&self) -> &MultiPoly {
        &self.poly
    }
    pub fn class(&self) -> PolyClass {
        self.class
    }
    /// `N` with `deg_V Q = 2N`.
    pub fn half_degree(&self) -> usize {
        self.class.w_degree()
    }
    /// Constant leading coefficient in `V`.
    pub fn leading_coefficient(&self) -> Rational {
        let cs = self.poly.coefficients_in("V").expect("has V");
        cs.last().expect("nonzero").constant_term()
    }
    /// `Q` normalized to be monic in `V`.
    pub fn monic(&self) -> MultiPoly {
        self.poly.scale(&(Rational::one() / self.leading_coefficient()))
    }
    /// True when only even powers of `V` occur.
    pub fn is_even(&self) -> bool {
        let i = self.poly.var_index("V").expect("has V");
        self.poly.terms().all(|(e, _)| e[i] % 2 == 0)
    }
    /// Monic coefficients `a_0 = 1, a_1, ..., a_N` of `V^(2N − 2i)`.
    pub fn coefficients(&self) -> Vec<MultiPoly> {
        let cs = self.monic().coefficients_in("V").expect("has V");
        (0..=self.half_degree()).map(|i| cs[2 * (self.half_degree() - i)].clone()).collect()
    }
    /// Substitutes squared edge lengths; the result is monic in `W = V²`.
    pub fn specialize(&self, lengths: &[Rational]) -> Result<UniPoly, PolyError> {
        let names = variable_names(lengths.len());
        let vals: Vec<(&str, Rational)> = names[1..].iter().map(|s| s.as_str()).zip(lengths.iter().cloned()).collect();
        let p = self.monic().substitute_values(&vals)?;
        let v = UniPoly::from_multipoly(&p, "V")?;
        v.even_to_square().ok_or_else(|| PolyError::ConstructionDegenerate("odd powers of V".into()))
    }
}

fn edge_var(surface: &CombinatorialSurface, vars: &[&str], a: usize, b: usize) -> Result<MultiPoly, PolyError> {
    let k = surface
        .edge_position(a, b)
        .ok_or_else(|| PolyError::ClassMismatch(format!("missing edge {a}-{b}")))?;
    MultiPoly::var(vars, vars[k + 1])
}

/// `288·V²` of the tetrahedron on four mutually adjacent vertices.
fn tet_cm(surface: &CombinatorialSurface, vars: &[&str], p: [usize; 4]) -> Result<MultiPoly, PolyError> {
    let e = |a, b| edge_var(surface, vars, p[a], p[b]);
    cayley_menger_tet([&e(0, 1)?, &e(0, 2)?, &e(0, 3)?, &e(1, 2)?, &e(1, 3)?, &e(2, 3)?])
}

/// Symbolic volume polynomial for tetrahedra and bipyramids.
pub fn volume_polynomial(surface: &CombinatorialSurface) -> Result<VolumePolynomial, PolyError> {
    let labels = classify(surface)?;
    let names = variable_names(surface.edges().len());
    let vars: Vec<&str> = names.iter().map(|s| s.as_str()).collect();
    let v = MultiPoly::var(&vars, "V")?;
    let w288 = (&v * &v).scale(&int(288));
    let poly = match &labels {
        ClassLabels::Tetrahedron(p) => &w288 - &tet_cm(surface, &vars, *p)?,
        ClassLabels::Bipyramid3 { equator: [a, b, c], poles: (n, s) } => {
            // with x = 288W, A = CM_a, B = CM_b: (x − A − B)² − 4AB
            let ca = tet_cm(surface, &vars, [*n, *a, *b, *c])?;
            let cb = tet_cm(surface, &vars, [*s, *a, *b, *c])?;
            let x = &(&w288 - &ca) - &cb;
            &(&x * &x) - &(&ca * &cb).scale(&int(4))
        }
        ClassLabels::Octahedron(_) => return Err(PolyError::SymbolicUnavailable(PolyClass::Octahedron.name().into())),
    };
    Ok(VolumePolynomial { poly: poly.primitive_integer(), class: labels.class() })
}

/// Options for the line-interpolation specialization.
#[derive(Debug, Clone)]
pub struct SpecializeOptions {
    /// Seeds the direction of the interpolation line.
    pub seed: u64,
    /// Worker threads used for independent samples.
    pub jobs: usize,
}

impl Default for SpecializeOptions {
    fn default() -> Self {
        Self { seed: 0x5eed, jobs: 1 }
    }
}

/// The volume polynomial at a fixed length vector, in `W = V²`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpecializedVolumePolynomial {
    pub class: PolyClass,
    /// Specialization of the constructed polynomial, monic.
    pub raw: UniPoly,
    /// Specialization of the square-free part of the generic polynomial
    /// (taken over the field of rational functions in the lengths), monic.
    pub squarefree: UniPoly,
}

impl SpecializedVolumePolynomial {
    pub fn raw_in_v(&self) -> UniPoly {
        self.raw.in_square()
    }
    pub fn squarefree_in_v(&self) -> UniPoly {
        self.squarefree.in_square()
    }
}

/// Evaluates the monic `W`-polynomial at a length vector where the
/// construction is well defined.
pub(crate) struct GenericEvaluator<'a> {
    surface: &'a CombinatorialSurface,
    labels: ClassLabels,
    symbolic: Option<VolumePolynomial>,
}

impl<'a> GenericEvaluator<'a> {
    pub(crate) fn new(surface: &'a CombinatorialSurface) -> Result<Self, PolyError> {
        let labels = classify(surface)?;
        let symbolic = match labels.class() {
            PolyClass::Octahedron => None,
            _ => Some(volume_polynomial(surface)?),
        };
        Ok(Self { surface, labels, symbolic })
    }

    pub(crate) fn class(&self) -> PolyClass {
        self.labels.class()
    }

    pub(crate) fn symbolic(&self) -> Option<&VolumePolynomial> {
        self.symbolic.as_ref()
    }

    fn eval(&self, l: &[Rational]) -> Option<UniPoly> {
        match (&self.labels, &self.symbolic) {
            (ClassLabels::Octahedron(lab), _) => octahedron::generic_w_polynomial(self.surface, lab, l),
            (_, Some(q)) => q.specialize(l).ok(),
            _ => None,
        }
    }
}

/// Deterministic direction with small positive rational entries.
fn line_direction(m: usize, seed: u64) -> Vec<Rational> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..m).map(|_| Rational::new(rng.gen_range(1i64..=13).into(), 7.into())).collect()
}

/// Runs `f` over `items` on up to `jobs` threads, preserving order.
pub(crate) fn par_map<T: Sync, R: Send>(items: &[T], jobs: usize, f: impl Fn(&T) -> R + Sync) -> Vec<R> {
    let jobs = jobs.max(1).min(items.len().max(1));
    if jobs == 1 {
        return items.iter().map(&f).collect();
    }
    let chunk = items.len().div_ceil(jobs);
    std::thread::scope(|scope| {
        let handles: Vec<_> = items.chunks(chunk).map(|c| scope.spawn(|| c.iter().map(&f).collect::<Vec<R>>())).collect();
        handles.into_iter().flat_map(|h| h.join().expect("worker panicked")).collect()
    })
}

/// Interpolates per-coefficient sample values at `x = 0`, checking that the
/// coefficient of `W^k` has degree at most `3(D − k)` in the line parameter.
fn interpolate_at_zero(samples: &[(Rational, UniPoly)], d: usize) -> Result<UniPoly, PolyError> {
    let mut out = Vec::with_capacity(d + 1);
    for k in 0..=d {
        let pts: Vec<(Rational, Rational)> = samples.iter().map(|(s, p)| (s.clone(), p.coeff(k))).collect();
        let c = interpolate(&pts);
        if !c.is_zero() && c.degree() > 3 * (d - k) {
            return Err(PolyError::ConstructionDegenerate(format!(
                "coefficient of W^{k} has degree {} along the line, expected at most {}",
                c.degree(),
                3 * (d - k)
            )));
        }
        out.push(c.coeff(0));
    }
    Ok(UniPoly::new(out))
}

const EXTRA_SAMPLES: usize = 2;

impl GenericEvaluator<'_> {
    /// Raw and square-free `W`-polynomials at `l` by interpolation along
    /// `l + s·δ`, sampled at `s = 1, 2, ...`.
    pub(crate) fn along_line(
        &self,
        l: &[Rational],
        opts: &SpecializeOptions,
    ) -> Result<SpecializedVolumePolynomial, PolyError> {
        let d = self.class().w_degree();
        let needed = 3 * d + 1 + EXTRA_SAMPLES;
        for attempt in 0..3u64 {
            let delta = line_direction(l.len(), opts.seed.wrapping_add(attempt));
            if let ClassLabels::Octahedron(lab) = &self.labels {
                match octahedron::specialize_modular(self.surface, lab, l, &delta, opts.jobs) {
                    Ok((raw, squarefree)) => {
                        return Ok(SpecializedVolumePolynomial { class: self.class(), raw, squarefree })
                    }
                    Err(_) => continue,
                }
            }
            let mut raw: Vec<(Rational, UniPoly)> = Vec::new();
            let mut sqf: Vec<(Rational, UniPoly)> = Vec::new();
            let mut next = 1i64;
            while raw.len() < needed && next <= 4 * needed as i64 {
                let batch: Vec<i64> = (next..next + (needed - raw.len()) as i64).collect();
                next += batch.len() as i64;
                let results = par_map(&batch, opts.jobs, |&s| {
                    let s = int(s);
                    let point: Vec<Rational> = l.iter().zip(&delta).map(|(a, b)| a + &s * b).collect();
                    self.eval(&point).map(|p| (s, p))
                });
                for (s, p) in results.into_iter().flatten() {
                    if p.degree() != d {
                        continue;
                    }
                    sqf.push((s.clone(), p.squarefree_part()));
                    raw.push((s, p));
                }
            }
            if raw.len() < needed {
                continue;
            }
            let raw_poly = interpolate_at_zero(&raw, d)?;
            let target = sqf.iter().map(|(_, p)| p.degree()).max().unwrap_or(0);
            let sqf_samples: Vec<_> = sqf.into_iter().filter(|(_, p)| p.degree() == target).collect();
            let sqf_poly = if target == d {
                interpolate_at_zero(&sqf_samples, d)?
            } else if sqf_samples.len() >= 3 * target + 1 + EXTRA_SAMPLES {
                interpolate_at_zero(&sqf_samples, target)?
            } else {
                continue;
            };
            return Ok(SpecializedVolumePolynomial { class: self.class(), raw: raw_poly, squarefree: sqf_poly });
        }
        Err(PolyError::ConstructionDegenerate("no generic interpolation line found".into()))
    }
}

/// The volume polynomial of `surface`'s class specialized at squared edge
/// lengths `lengths` (edge order of `surface`).
pub fn specialize(
    surface: &CombinatorialSurface,
    lengths: &[Rational],
    opts: &SpecializeOptions,
) -> Result<SpecializedVolumePolynomial, PolyError> {
    let ev = GenericEvaluator::new(surface)?;
    let line = ev.along_line(lengths, opts)?;
    if let Some(q) = ev.symbolic() {
        // direct substitution must agree with the interpolated form
        let direct = q.specialize(lengths)?;
        if direct != line.raw {
            return Err(PolyError::ConstructionDegenerate("interpolation disagrees with substitution".into()));
        }
    }
    Ok(line)
}

/// Monic `W`-coefficients of the volume polynomial along the family
/// `l + σ·L`, as polynomials in `σ` (ascending powers of `W`).
#[derive(Debug, Clone, PartialEq)]
pub struct FamilyPolynomial {
    pub class: PolyClass,
    pub coeffs: Vec<UniPoly>,
}

impl FamilyPolynomial {
    /// The specialized `W`-polynomial at a given `σ`.
    pub fn at(&self, sigma: &Rational) -> UniPoly {
        UniPoly::new(self.coeffs.iter().map(|c| c.eval(sigma)).collect())
    }
    /// `Σ_k (d/dσ) c_k(σ) · W^k` at a given `σ`.
    pub fn sigma_derivative_at(&self, sigma: &Rational) -> UniPoly {
        UniPoly::new(self.coeffs.iter().map(|c| c.derivative().eval(sigma)).collect())
    }
}

/// Composes the volume polynomial with the length family `l + σ·L`.
pub fn compose_family(
    surface: &CombinatorialSurface,
    base: &[Rational],
    rates: &[Rational],
    opts: &SpecializeOptions,
) -> Result<FamilyPolynomial, PolyError> {
    let ev = GenericEvaluator::new(surface)?;
    let d = ev.class().w_degree();
    if let Some(q) = ev.symbolic() {
        // substitute l_k -> l_k + σ L_k symbolically
        let names = variable_names(base.len());
        let mut all: Vec<&str> = names.iter().map(|s| s.as_str()).collect();
        all.push("sigma");
        let mut p = q.monic().with_vars(&all)?;
        let sigma = MultiPoly::var(&all, "sigma")?;
        for (k, name) in names[1..].iter().enumerate() {
            let repl = &MultiPoly::constant(&all, base[k].clone()) + &sigma.scale(&rates[k]);
            p = p.compose(name, &repl)?;
        }
        let by_v = p.coefficients_in("V")?;
        let coeffs = (0..=d)
            .map(|k| UniPoly::from_multipoly(by_v.get(2 * k).unwrap_or(&p.zero_like()), "sigma"))
            .collect::<Result<Vec<_>, _>>()?;
        return Ok(FamilyPolynomial { class: ev.class(), coeffs });
    }
    let ClassLabels::Octahedron(lab) = &ev.labels else {
        return Err(PolyError::UnsupportedClass);
    };
    let mut last = None;
    for attempt in 0..3u64 {
        let delta = line_direction(base.len(), opts.seed.wrapping_add(attempt));
        match octahedron::family_modular(surface, lab, base, rates, &delta, opts.jobs) {
            Ok(coeffs) => return Ok(FamilyPolynomial { class: ev.class(), coeffs }),
            Err(e) => last = Some(e),
        }
    }
    Err(last.expect("attempted"))
}
