//! Volume polynomial of an octahedron at a generic length vector.
//!
//! The three unknown squared diagonals `t1 = |e0e2|²`, `t2 = |e1e3|²`,
//! `u = |NS|²` are cut out by Cayley–Menger relations. Eliminating `t1`
//! leaves a univariate `E(t2)`; in the algebra `Q[t2]/(E)` every remaining
//! distance (hence `V²`, via a Gram determinant) becomes an element, and the
//! characteristic polynomial of multiplication by `V²` is the product of
//! `(W − V_k²)` over all complex configurations with the given edge lengths.

use num_traits::{One, Zero};

use crate::numeric::Rational;
use crate::poly::cayley_menger::cayley_menger;
use crate::error::PolyError;
use crate::poly::modular::{reconstruct_over_primes, Fp, FpPoly};
use crate::poly::multipoly::MultiPoly;
use crate::poly::resultant::{linear_subresultant, resultant};
use crate::poly::unipoly::{charpoly, UniPoly};
use crate::surface::CombinatorialSurface;

/// Degree in `W = V²` of the octahedron volume polynomial.
pub const OCTAHEDRON_W_DEGREE: usize = 8;

/// Vertex roles: equatorial 4-cycle and the two poles.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OctaLabels {
    pub equator: [usize; 4],
    pub north: usize,
    pub south: usize,
}

impl OctaLabels {
    pub fn t1_pair(&self) -> (usize, usize) {
        (self.equator[0], self.equator[2])
    }
    pub fn t2_pair(&self) -> (usize, usize) {
        (self.equator[1], self.equator[3])
    }
    pub fn pole_pair(&self) -> (usize, usize) {
        (self.north, self.south)
    }
}

/// Arithmetic in `Q[x]/(m)`.
#[derive(Debug, Clone)]
pub struct QuotientRing {
    m: UniPoly,
}

impl QuotientRing {
    pub fn new(m: UniPoly) -> Self {
        Self { m }
    }
    pub fn modulus(&self) -> &UniPoly {
        &self.m
    }
    pub fn reduce(&self, a: &UniPoly) -> UniPoly {
        a.rem(&self.m).expect("nonzero modulus")
    }
    pub fn mul(&self, a: &UniPoly, b: &UniPoly) -> UniPoly {
        self.reduce(&a.mul(b))
    }
    pub fn inv(&self, a: &UniPoly) -> Option<UniPoly> {
        let (g, s) = a.gcd_ext(&self.m);
        (g == UniPoly::one()).then(|| self.reduce(&s))
    }
    pub fn div(&self, a: &UniPoly, b: &UniPoly) -> Option<UniPoly> {
        Some(self.mul(a, &self.inv(b)?))
    }
    /// `p(x)` for an element `x`.
    pub fn eval(&self, p: &UniPoly, x: &UniPoly) -> UniPoly {
        p.coeffs()
            .iter()
            .rev()
            .fold(UniPoly::zero(), |acc, c| self.mul(&acc, x).add(&UniPoly::constant(c.clone())))
    }
    /// Matrix of multiplication by `a` in the monomial basis.
    pub fn mult_matrix(&self, a: &UniPoly) -> Vec<Vec<Rational>> {
        let d = self.m.degree();
        let mut mat = vec![vec![Rational::zero(); d]; d];
        let mut col = self.reduce(a);
        for j in 0..d {
            for (i, row) in mat.iter_mut().enumerate() {
                row[j] = col.coeff(i);
            }
            col = self.mul(&col, &UniPoly::x());
        }
        mat
    }
}

fn sorted(a: usize, b: usize) -> (usize, usize) {
    (a.min(b), a.max(b))
}

/// `W`-polynomial at a generic length vector `l` (edge order of `surface`),
/// or `None` when this particular `l` is not generic enough for the
/// construction (the caller then picks another sample).
pub fn generic_w_polynomial(
    surface: &CombinatorialSurface,
    lab: &OctaLabels,
    l: &[Rational],
) -> Option<UniPoly> {
    let [e0, e1, e2, e3] = lab.equator;
    let (n, s) = (lab.north, lab.south);
    let vars = ["t1", "t2", "u"];
    let sq = |a: usize, b: usize| -> MultiPoly {
        if a == b {
            return MultiPoly::zero(&vars);
        }
        if let Some(k) = surface.edge_position(a, b) {
            return MultiPoly::constant(&vars, l[k].clone());
        }
        let p = sorted(a, b);
        let name = if p == sorted(e0, e2) {
            "t1"
        } else if p == sorted(e1, e3) {
            "t2"
        } else {
            "u"
        };
        MultiPoly::var(&vars, name).expect("known variable")
    };
    let cm5 = |pts: [usize; 5]| -> Option<MultiPoly> {
        let table: Vec<Vec<MultiPoly>> = pts.iter().map(|&a| pts.iter().map(|&b| sq(a, b)).collect()).collect();
        cayley_menger(&table).ok()
    };
    let f1 = cm5([e0, e1, e2, e3, n])?;
    let f2 = cm5([e0, e1, e2, e3, s])?;
    let e = UniPoly::from_multipoly(&resultant(&f1, &f2, "t1").ok()?, "t2").ok()?;
    if e.is_zero() {
        return None;
    }
    let ring = QuotientRing::new(e.squarefree_part());
    if ring.modulus().degree() != OCTAHEDRON_W_DEGREE {
        return None;
    }
    let (p1, p0) = linear_subresultant(&f1, &f2, "t1").ok()??;
    let p1 = UniPoly::from_multipoly(&p1, "t2").ok()?;
    let p0 = UniPoly::from_multipoly(&p0, "t2").ok()?;
    let t1 = ring.div(&p0.scale(&-Rational::one()), &p1)?;
    let t2 = ring.reduce(&UniPoly::x());

    let c1 = cm5([n, s, e0, e1, e2])?;
    let c2 = cm5([n, s, e0, e2, e3])?;
    let (q1, q0) = linear_subresultant(&c1, &c2, "u").ok()??;
    let q1 = ring.eval(&UniPoly::from_multipoly(&q1, "t1").ok()?, &t1);
    let q0 = ring.eval(&UniPoly::from_multipoly(&q0, "t1").ok()?, &t1);
    let u = ring.div(&q0.scale(&-Rational::one()), &q1)?;

    let dist = |a: usize, b: usize| -> UniPoly {
        if a == b {
            return UniPoly::zero();
        }
        if let Some(k) = surface.edge_position(a, b) {
            return UniPoly::constant(l[k].clone());
        }
        let p = sorted(a, b);
        if p == sorted(e0, e2) {
            t1.clone()
        } else if p == sorted(e1, e3) {
            t2.clone()
        } else {
            u.clone()
        }
    };
    let v2 = squared_volume_from_cone(surface, n, &ring, &dist);
    Some(charpoly(&ring.mult_matrix(&v2)))
}

/// `V²` of the surface coned from `apex`, written through squared distances
/// only: `36 V² = Σ_{f,g} det(Gram(f − apex, g − apex))` over faces missing
/// `apex`.
fn squared_volume_from_cone(
    surface: &CombinatorialSurface,
    apex: usize,
    ring: &QuotientRing,
    dist: &dyn Fn(usize, usize) -> UniPoly,
) -> UniPoly {
    let faces: Vec<[usize; 3]> = surface.faces().iter().copied().filter(|f| !f.contains(&apex)).collect();
    let half = Rational::new(1.into(), 2.into());
    let gram = |x: usize, y: usize| -> UniPoly { dist(apex, x).add(&dist(apex, y)).sub(&dist(x, y)).scale(&half) };
    let mut total = UniPoly::zero();
    for f in &faces {
        for g in &faces {
            let m: Vec<Vec<UniPoly>> = f.iter().map(|&x| g.iter().map(|&y| gram(x, y)).collect()).collect();
            let minor = |a: usize, b: usize, c: usize, d: usize| {
                ring.mul(&m[1][a], &m[2][b]).sub(&ring.mul(&m[1][c], &m[2][d]))
            };
            let det = ring
                .mul(&m[0][0], &minor(1, 2, 2, 1))
                .sub(&ring.mul(&m[0][1], &minor(0, 2, 2, 0)))
                .add(&ring.mul(&m[0][2], &minor(0, 1, 1, 0)));
            total = total.add(&det);
        }
    }
    ring.reduce(&total.scale(&Rational::new(1.into(), 36.into())))
}

// ---------------------------------------------------------------------------
// Modular evaluation

#[derive(Debug, Clone, Copy)]
enum Dist {
    Known(u64),
    Var(usize),
}

/// Cayley–Menger determinant of five points as a polynomial of degree ≤ 2
/// in each of two unknown squared distances: `c[i][j]` multiplies `x^i y^j`.
fn cm5_biquadratic(f: &Fp, pts: [usize; 5], dist: &dyn Fn(usize, usize) -> Dist) -> [[u64; 3]; 3] {
    let mut vals = [[0u64; 3]; 3];
    for (x, row) in vals.iter_mut().enumerate() {
        for (y, v) in row.iter_mut().enumerate() {
            let mut m = vec![vec![0u64; 6]; 6];
            for i in 0..5 {
                m[0][i + 1] = 1;
                m[i + 1][0] = 1;
                for j in 0..5 {
                    if i != j {
                        m[i + 1][j + 1] = match dist(pts[i], pts[j]) {
                            Dist::Known(c) => c,
                            Dist::Var(0) => x as u64,
                            Dist::Var(_) => y as u64,
                        };
                    }
                }
            }
            *v = f.det(m);
        }
    }
    let half = f.inv(2);
    let quad = |v0: u64, v1: u64, v2: u64| -> [u64; 3] {
        let c2 = f.mul(f.add(f.sub(v2, f.add(v1, v1)), v0), half);
        [v0, f.sub(f.sub(v1, v0), c2), c2]
    };
    let by_y: Vec<[u64; 3]> = vals.iter().map(|r| quad(r[0], r[1], r[2])).collect();
    let mut c = [[0u64; 3]; 3];
    for j in 0..3 {
        let col = quad(by_y[0][j], by_y[1][j], by_y[2][j]);
        for i in 0..3 {
            c[i][j] = col[i];
        }
    }
    c
}

/// Coefficients in the first unknown, each a polynomial in the second.
fn split_first(f: &Fp, c: &[[u64; 3]; 3]) -> [FpPoly; 3] {
    [f.trim(c[0].to_vec()), f.trim(c[1].to_vec()), f.trim(c[2].to_vec())]
}

/// Coefficients in the second unknown, each a polynomial in the first.
fn split_second(f: &Fp, c: &[[u64; 3]; 3]) -> [FpPoly; 3] {
    let col = |j: usize| f.trim(vec![c[0][j], c[1][j], c[2][j]]);
    [col(0), col(1), col(2)]
}

/// Resultant of two quadratics `a2 x² + a1 x + a0`, `b2 x² + b1 x + b0`
/// with polynomial coefficients, and their degree-one combination
/// `b2·A − a2·B = p1 x + p0`.
fn quadratic_elimination(f: &Fp, a: &[FpPoly; 3], b: &[FpPoly; 3]) -> (FpPoly, FpPoly, FpPoly) {
    let m = |x: &FpPoly, y: &FpPoly| f.pmul(x, y);
    let d20 = f.psub(&m(&a[2], &b[0]), &m(&a[0], &b[2]));
    let d21 = f.psub(&m(&a[2], &b[1]), &m(&a[1], &b[2]));
    let d10 = f.psub(&m(&a[1], &b[0]), &m(&a[0], &b[1]));
    let res = f.psub(&m(&d20, &d20), &m(&d21, &d10));
    let p1 = f.psub(&m(&b[2], &a[1]), &m(&a[2], &b[1]));
    let p0 = f.psub(&m(&b[2], &a[0]), &m(&a[2], &b[0]));
    (res, p1, p0)
}

struct FpRing<'a> {
    f: &'a Fp,
    m: FpPoly,
}

impl FpRing<'_> {
    fn mul(&self, a: &[u64], b: &[u64]) -> FpPoly {
        self.f.prem(&self.f.pmul(a, b), &self.m)
    }
    fn div(&self, a: &[u64], b: &[u64]) -> Option<FpPoly> {
        Some(self.mul(a, &self.f.pinv_mod(b, &self.m)?))
    }
    fn eval(&self, p: &[u64], x: &[u64]) -> FpPoly {
        p.iter().rev().fold(Vec::new(), |acc, &c| self.f.padd(&self.mul(&acc, x), &[c]))
    }
}

/// [`generic_w_polynomial`] computed modulo a prime; `l` holds the images
/// of the squared edge lengths.
pub fn generic_w_polynomial_mod(
    surface: &CombinatorialSurface,
    lab: &OctaLabels,
    l: &[u64],
    f: &Fp,
) -> Option<FpPoly> {
    let [e0, e1, e2, e3] = lab.equator;
    let (n, s) = (lab.north, lab.south);
    let (d13, d24, dns) = (sorted(e0, e2), sorted(e1, e3), sorted(n, s));
    let dist = |a: usize, b: usize| -> Dist {
        if let Some(k) = surface.edge_position(a, b) {
            return Dist::Known(l[k]);
        }
        let p = sorted(a, b);
        if p == d13 {
            Dist::Var(0)
        } else if p == d24 || p == dns {
            Dist::Var(1)
        } else {
            unreachable!("octahedron has three diagonals")
        }
    };
    let f1 = split_first(f, &cm5_biquadratic(f, [e0, e1, e2, e3, n], &dist));
    let f2 = split_first(f, &cm5_biquadratic(f, [e0, e1, e2, e3, s], &dist));
    let (e, p1, p0) = quadratic_elimination(f, &f1, &f2);
    if e.is_empty() {
        return None;
    }
    let ring = FpRing { f, m: f.psquarefree(&e) };
    if ring.m.len() != OCTAHEDRON_W_DEGREE + 1 {
        return None;
    }
    let t1 = ring.div(&f.pscale(&p0, f.neg(1)), &p1)?;
    let t2 = f.prem(&[0, 1], &ring.m);

    let c1 = split_second(f, &cm5_biquadratic(f, [n, s, e0, e1, e2], &dist));
    let c2 = split_second(f, &cm5_biquadratic(f, [n, s, e0, e2, e3], &dist));
    let (_, q1, q0) = quadratic_elimination(f, &c1, &c2);
    let u = ring.div(&f.pscale(&ring.eval(&q0, &t1), f.neg(1)), &ring.eval(&q1, &t1))?;

    let elem = |a: usize, b: usize| -> FpPoly {
        if a == b {
            return Vec::new();
        }
        if let Some(k) = surface.edge_position(a, b) {
            return f.trim(vec![l[k]]);
        }
        let p = sorted(a, b);
        if p == d13 {
            t1.clone()
        } else if p == d24 {
            t2.clone()
        } else {
            u.clone()
        }
    };
    let faces: Vec<[usize; 3]> = surface.faces().iter().copied().filter(|fc| !fc.contains(&n)).collect();
    let half = f.inv(2);
    let gram = |x: usize, y: usize| f.pscale(&f.psub(&f.padd(&elem(n, x), &elem(n, y)), &elem(x, y)), half);
    let mut total: FpPoly = Vec::new();
    for a in &faces {
        for b in &faces {
            let g: Vec<Vec<FpPoly>> = a.iter().map(|&x| b.iter().map(|&y| gram(x, y)).collect()).collect();
            let minor = |i: usize, j: usize, k: usize, m: usize| {
                f.psub(&ring.mul(&g[1][i], &g[2][j]), &ring.mul(&g[1][k], &g[2][m]))
            };
            let det = f.padd(
                &f.psub(&ring.mul(&g[0][0], &minor(1, 2, 2, 1)), &ring.mul(&g[0][1], &minor(0, 2, 2, 0))),
                &ring.mul(&g[0][2], &minor(0, 1, 1, 0)),
            );
            total = f.padd(&total, &det);
        }
    }
    let v2 = f.prem(&f.pscale(&total, f.inv(36)), &ring.m);
    let d = OCTAHEDRON_W_DEGREE;
    let mut mat = vec![vec![0u64; d]; d];
    let mut col = v2.clone();
    for j in 0..d {
        for (i, row) in mat.iter_mut().enumerate() {
            row[j] = col.get(i).copied().unwrap_or(0);
        }
        col = ring.mul(&col, &[0, 1]);
    }
    Some(f.charpoly(&mat))
}

/// Values at `s = 0` of the raw and square-free `W`-polynomials along the
/// line `point + s·delta` (mod `p`), sampled at `s = 1, 2, ...`.
fn line_at_zero_mod(
    surface: &CombinatorialSurface,
    lab: &OctaLabels,
    f: &Fp,
    point: &[u64],
    delta: &[u64],
) -> Option<(FpPoly, FpPoly)> {
    let d = OCTAHEDRON_W_DEGREE;
    let needed = 3 * d + 1 + LINE_EXTRA_SAMPLES;
    let mut raw: Vec<(u64, FpPoly)> = Vec::with_capacity(needed);
    let mut sqf: Vec<(u64, FpPoly)> = Vec::with_capacity(needed);
    let mut s = 0u64;
    while raw.len() < needed {
        s += 1;
        if s > 4 * needed as u64 {
            return None;
        }
        let pt: Vec<u64> = point.iter().zip(delta).map(|(&a, &b)| f.add(a, f.mul(s, b))).collect();
        let Some(q) = generic_w_polynomial_mod(surface, lab, &pt, f) else {
            continue;
        };
        sqf.push((s, f.psquarefree(&q)));
        raw.push((s, q));
    }
    let at_zero = |samples: &[(u64, FpPoly)], deg: usize| -> Option<FpPoly> {
        let xs: Vec<u64> = samples.iter().map(|x| x.0).collect();
        let mut out = Vec::with_capacity(deg + 1);
        for k in 0..=deg {
            let ys: Vec<u64> = samples.iter().map(|(_, p)| p.get(k).copied().unwrap_or(0)).collect();
            let c = f.interpolate(&xs, &ys);
            if c.len() > 3 * (deg - k) + 1 {
                return None;
            }
            out.push(c.first().copied().unwrap_or(0));
        }
        Some(out)
    };
    let target = sqf.iter().map(|x| x.1.len()).max()? - 1;
    let sqf: Vec<_> = sqf.into_iter().filter(|x| x.1.len() == target + 1).collect();
    if sqf.len() < 3 * target + 1 + LINE_EXTRA_SAMPLES {
        return None;
    }
    Some((at_zero(&raw, d)?, at_zero(&sqf, target)?))
}

/// Extra samples beyond the degree bound; they make the degree check a
/// genuine verification of the interpolant.
pub const LINE_EXTRA_SAMPLES: usize = 2;

fn reduce_all(f: &Fp, v: &[Rational]) -> Option<Vec<u64>> {
    v.iter().map(|r| f.from_rational(r)).collect()
}

/// Raw and square-free `W`-polynomials at the length vector `l`, by
/// modular interpolation along `l + s·delta`.
pub fn specialize_modular(
    surface: &CombinatorialSurface,
    lab: &OctaLabels,
    l: &[Rational],
    delta: &[Rational],
    jobs: usize,
) -> Result<(UniPoly, UniPoly), PolyError> {
    let d = OCTAHEDRON_W_DEGREE;
    let v = reconstruct_over_primes(jobs, |f| {
        let (raw, sqf) = line_at_zero_mod(surface, lab, f, &reduce_all(f, l)?, &reduce_all(f, delta)?)?;
        Some(raw.into_iter().chain(sqf).collect())
    })?;
    let raw = UniPoly::new(v[..=d].to_vec());
    let sqf = UniPoly::new(v[d + 1..].to_vec());
    Ok((raw, sqf))
}

/// Monic `W`-coefficients along `l + σ·rates`, as polynomials in `σ`.
pub fn family_modular(
    surface: &CombinatorialSurface,
    lab: &OctaLabels,
    l: &[Rational],
    rates: &[Rational],
    delta: &[Rational],
    jobs: usize,
) -> Result<Vec<UniPoly>, PolyError> {
    let d = OCTAHEDRON_W_DEGREE;
    let count = 3 * d + 1 + LINE_EXTRA_SAMPLES;
    let v = reconstruct_over_primes(jobs, |f| {
        let (base, rt, dl) = (reduce_all(f, l)?, reduce_all(f, rates)?, reduce_all(f, delta)?);
        let sig: Vec<u64> = (0..count as u64).collect();
        let mut vals = Vec::with_capacity(count);
        for &s in &sig {
            let pt: Vec<u64> = base.iter().zip(&rt).map(|(&a, &b)| f.add(a, f.mul(s, b))).collect();
            vals.push(line_at_zero_mod(surface, lab, f, &pt, &dl)?.0);
        }
        let mut out = Vec::new();
        for k in 0..=d {
            let ys: Vec<u64> = vals.iter().map(|p| p.get(k).copied().unwrap_or(0)).collect();
            let c = f.interpolate(&sig, &ys);
            let bound = 3 * (d - k) + 1;
            if c.len() > bound {
                return None;
            }
            out.extend((0..bound).map(|i| c.get(i).copied().unwrap_or(0)));
        }
        Some(out)
    })?;
    let mut coeffs = Vec::with_capacity(d + 1);
    let mut at = 0;
    for k in 0..=d {
        let bound = 3 * (d - k) + 1;
        coeffs.push(UniPoly::new(v[at..at + bound].to_vec()));
        at += bound;
    }
    Ok(coeffs)
}
