//! Polynomial relations between the volume and a diagonal of an
//! octahedron, at fixed squared edge lengths.
//!
//! Splitting the octahedron along the diagonal `e0e2` into four tetrahedra,
//! `V = ±V_a ± V_b ± V_c ± V_d`; the product over all 16 sign patterns is a
//! polynomial `G(V, t1)` in `V²` and the squared tetrahedral volumes, each of
//! which is a Cayley–Menger polynomial in `t1 = |e0e2|²`. The other diagonal
//! is reached by eliminating `t1` against the five-point relation.

use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::PolyError;
use crate::numeric::{int, Rational};
use crate::poly::cayley_menger::cayley_menger;
use crate::poly::multipoly::MultiPoly;
use crate::poly::modular::{reconstruct_over_primes, Fp};
use crate::poly::unipoly::UniPoly;
use crate::poly::volpoly::{classify_as, ClassLabels, PolyClass};
use crate::surface::CombinatorialSurface;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum DiagonalChoice {
    /// `|e0e2|²`
    T1,
    /// `|e1e3|²`
    T2,
}

impl DiagonalChoice {
    pub fn var(&self) -> &'static str {
        match self {
            DiagonalChoice::T1 => "t1",
            DiagonalChoice::T2 => "t2",
        }
    }
}

/// `Σ_i A_i(V) · t^(K−i)` with `t` a squared diagonal.
#[derive(Debug, Clone, PartialEq)]
pub struct DiagonalPolynomial {
    poly: MultiPoly,
    which: DiagonalChoice,
    endpoints: (usize, usize),
}

impl DiagonalPolynomial {
    /// Polynomial in `V` and the squared diagonal.
    pub fn poly(&self) -> &MultiPoly {
        &self.poly
    }
    pub fn which(&self) -> DiagonalChoice {
        self.which
    }
    /// The vertices joined by the diagonal.
    pub fn endpoints(&self) -> (usize, usize) {
        self.endpoints
    }
    /// Degree `K` in the squared diagonal.
    pub fn degree(&self) -> usize {
        self.poly.degree(self.which.var()).expect("has variable") as usize
    }
    /// `A_0, ..., A_K` as polynomials in `V` (`A_0` leads).
    pub fn coefficients(&self) -> Vec<UniPoly> {
        let cs = self.poly.coefficients_in(self.which.var()).expect("has variable");
        cs.iter().rev().map(|c| UniPoly::from_multipoly(c, "V").expect("only V remains")).collect()
    }
    /// The relation at a fixed volume, as a polynomial in the squared diagonal.
    pub fn at_volume(&self, v: &Rational) -> Result<UniPoly, PolyError> {
        let p = self.poly.substitute_values(&[("V", v.clone())])?;
        UniPoly::from_multipoly(&p, self.which.var())
    }
    pub fn evaluate(&self, v: &Rational, d2: &Rational) -> Result<Rational, PolyError> {
        self.poly.evaluate(&[("V", v.clone()), (self.which.var(), d2.clone())])
    }
}

/// Product of `(V − Σ ±x_k)` over all sign patterns, with `x_k² = X_k`.
fn sign_pattern_product(vars: &[&str], squares: &[MultiPoly]) -> Result<MultiPoly, PolyError> {
    let mut p = MultiPoly::var(vars, "V")?;
    let v = MultiPoly::var(vars, "V")?;
    let x = MultiPoly::var(vars, "x")?;
    for sq in squares {
        let minus = p.compose("V", &(&v - &x))?;
        let plus = p.compose("V", &(&v + &x))?;
        let prod = &minus * &plus;
        // even in x: replace x^(2j) by X^j
        let cs = prod.coefficients_in("x")?;
        let mut next = p.zero_like();
        let mut xp = p.constant_like(Rational::one());
        for (j, c) in cs.iter().enumerate() {
            if j % 2 == 1 {
                debug_assert!(c.is_zero());
                continue;
            }
            next = &next + &(c * &xp);
            xp = &xp * sq;
        }
        p = next;
    }
    Ok(p)
}

/// The diagonal relation at squared edge lengths `l` (edge order).
pub fn diagonal_polynomial(
    surface: &CombinatorialSurface,
    lengths: &[Rational],
    which: DiagonalChoice,
    jobs: usize,
) -> Result<DiagonalPolynomial, PolyError> {
    let ClassLabels::Octahedron(lab) = classify_as(surface, PolyClass::Octahedron)? else {
        unreachable!("classified as octahedron")
    };
    let [e0, e1, e2, e3] = lab.equator;
    let (n, s) = (lab.north, lab.south);
    let vars = ["V", "t1", "t2", "x"];
    let sq = |a: usize, b: usize| -> Result<MultiPoly, PolyError> {
        if a == b {
            return Ok(MultiPoly::zero(&vars));
        }
        if let Some(k) = surface.edge_position(a, b) {
            return Ok(MultiPoly::constant(&vars, lengths[k].clone()));
        }
        let p = (a.min(b), a.max(b));
        if p == (e0.min(e2), e0.max(e2)) {
            MultiPoly::var(&vars, "t1")
        } else if p == (e1.min(e3), e1.max(e3)) {
            MultiPoly::var(&vars, "t2")
        } else {
            Err(PolyError::ClassMismatch("pole pair in a diagonal relation".into()))
        }
    };
    let cm = |pts: &[usize]| -> Result<MultiPoly, PolyError> {
        let table = pts.iter().map(|&a| pts.iter().map(|&b| sq(a, b)).collect()).collect::<Result<Vec<Vec<_>>, _>>()?;
        cayley_menger(&table)
    };
    let inv288 = Rational::one() / int(288);
    let squares = [[e0, e2, n, e1], [e0, e2, e1, s], [e0, e2, s, e3], [e0, e2, e3, n]]
        .iter()
        .map(|t| cm(t).map(|c| c.scale(&inv288)))
        .collect::<Result<Vec<_>, _>>()?;
    let g = sign_pattern_product(&vars, &squares)?;
    let (poly, endpoints) = match which {
        DiagonalChoice::T1 => (g, (e0, e2)),
        DiagonalChoice::T2 => {
            let f1 = cm(&[e0, e1, e2, e3, n])?;
            (eliminate_t1(&g.with_vars(&["V", "t1"])?, &f1.with_vars(&["t1", "t2"])?, jobs)?, (e1, e3))
        }
    };
    let keep = ["V", which.var()];
    let poly = poly.with_vars(&keep)?.primitive_integer();
    if poly.is_zero() {
        return Err(PolyError::ZeroPolynomial);
    }
    Ok(DiagonalPolynomial { poly, which, endpoints })
}

/// `Res_t1(G, F1)` for `G(V, t1)` even in `V` and `F1(t1, t2)`, by
/// evaluation at a grid of `(V², t2)` modulo primes and interpolation.
/// [`crate::poly::resultant::resultant`] computes the same polynomial
/// symbolically, far more slowly.
fn eliminate_t1(g: &MultiPoly, f1: &MultiPoly, jobs: usize) -> Result<MultiPoly, PolyError> {
    let gv = g.degree("V")? as usize;
    let gt = g.degree("t1")? as usize;
    let ft = f1.degree("t1")? as usize;
    let f2 = f1.degree("t2")? as usize;
    let bw = ft * gv / 2;
    let bt = gt * f2;
    let table = |p: &MultiPoly, rows: usize, cols: usize| -> Vec<Vec<Rational>> {
        let mut t = vec![vec![Rational::zero(); cols + 1]; rows + 1];
        for (e, c) in p.terms() {
            t[e[0] as usize][e[1] as usize] = c.clone();
        }
        t
    };
    // g[i][j]: V^i t1^j; f[i][j]: t1^i t2^j
    let gt_tab = table(g, gv, gt);
    let ft_tab = table(f1, ft, f2);
    let v = reconstruct_over_primes(jobs, |f: &Fp| {
        let red = |t: &Vec<Vec<Rational>>| -> Option<Vec<Vec<u64>>> {
            t.iter().map(|r| r.iter().map(|c| f.from_rational(c)).collect()).collect()
        };
        let (gm, fm) = (red(&gt_tab)?, red(&ft_tab)?);
        let g_at = |v: u64| -> Vec<u64> {
            (0..=gt).map(|j| (0..=gv).rev().fold(0, |acc, i| f.add(f.mul(acc, v), gm[i][j]))).collect()
        };
        let f_at = |t: u64| -> Vec<u64> { (0..=ft).map(|i| f.peval(&fm[i], t)).collect() };
        let mut vs = Vec::new();
        let mut x = 0u64;
        while vs.len() < bw + 2 {
            x += 1;
            if g_at(x)[gt] != 0 {
                vs.push(x);
            }
        }
        let mut ts = Vec::new();
        let mut y = 0u64;
        while ts.len() < bt + 2 {
            if f_at(y)[ft] != 0 {
                ts.push(y);
            }
            y += 1;
        }
        let fs: Vec<Vec<u64>> = ts.iter().map(|&t| f_at(t)).collect();
        let mut by_t: Vec<Vec<u64>> = Vec::with_capacity(vs.len());
        for &x in &vs {
            let gx = g_at(x);
            let ys: Vec<u64> = fs.iter().map(|ft| f.presultant(&gx, ft)).collect();
            let c = f.interpolate(&ts, &ys);
            if c.len() > bt + 1 {
                return None;
            }
            by_t.push((0..=bt).map(|k| c.get(k).copied().unwrap_or(0)).collect());
        }
        let ws: Vec<u64> = vs.iter().map(|&x| f.mul(x, x)).collect();
        let mut out = Vec::with_capacity((bw + 1) * (bt + 1));
        for k in 0..=bt {
            let ys: Vec<u64> = by_t.iter().map(|r| r[k]).collect();
            let c = f.interpolate(&ws, &ys);
            if c.len() > bw + 1 {
                return None;
            }
            out.extend((0..=bw).map(|a| c.get(a).copied().unwrap_or(0)));
        }
        Some(out)
    })?;
    let mut terms = Vec::new();
    for k in 0..=bt {
        for a in 0..=bw {
            let c = &v[k * (bw + 1) + a];
            if !c.is_zero() {
                terms.push((vec![2 * a as u32, k as u32], c.clone()));
            }
        }
    }
    Ok(MultiPoly::from_terms(&["V", "t2"], terms))
}
