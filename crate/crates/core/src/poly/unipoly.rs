//! Dense univariate polynomials over `Q`.

use std::fmt;

use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::PolyError;
use crate::numeric::{format_rational, Rational};
use crate::poly::multipoly::MultiPoly;

/// `coeffs[k]` is the coefficient of `x^k`; no trailing zeros.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct UniPoly {
    coeffs: Vec<Rational>,
}

impl UniPoly {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn constant(c: Rational) -> Self {
        Self::new(vec![c])
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    /// `x - r`.
    pub fn linear_root(r: &Rational) -> Self {
        Self::new(vec![-r.clone(), Rational::one()])
    }

    pub fn x() -> Self {
        Self::new(vec![Rational::zero(), Rational::one()])
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> Rational {
        self.coeffs.get(k).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; the zero polynomial reports 0.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn leading(&self) -> Rational {
        self.coeffs.last().cloned().unwrap_or_else(Rational::zero)
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let l = self.leading();
        Self::new(self.coeffs.iter().map(|c| c / &l).collect())
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        self.coeffs.iter().rev().fold(Rational::zero(), |acc, c| acc * x + c)
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        use crate::numeric::Scalar;
        self.coeffs.iter().rev().fold(0.0, |acc, c| acc * x + c.as_f64())
    }

    pub fn add(&self, o: &Self) -> Self {
        let n = self.coeffs.len().max(o.coeffs.len());
        Self::new((0..n).map(|k| self.coeff(k) + o.coeff(k)).collect())
    }

    pub fn sub(&self, o: &Self) -> Self {
        let n = self.coeffs.len().max(o.coeffs.len());
        Self::new((0..n).map(|k| self.coeff(k) - o.coeff(k)).collect())
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::zero();
        }
        let mut out = vec![Rational::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::new(out)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self::new(self.coeffs.iter().map(|v| v * c).collect())
    }

    pub fn divrem(&self, d: &Self) -> Result<(Self, Self), PolyError> {
        if d.is_zero() {
            return Err(PolyError::ZeroPolynomial);
        }
        let mut r = self.coeffs.clone();
        let dd = d.degree();
        let lc = d.leading();
        if r.len() <= dd {
            return Ok((Self::zero(), self.clone()));
        }
        let mut q = vec![Rational::zero(); r.len() - dd];
        for k in (0..q.len()).rev() {
            let c = &r[k + dd] / &lc;
            if !c.is_zero() {
                for (j, dc) in d.coeffs.iter().enumerate() {
                    r[k + j] -= &c * dc;
                }
            }
            q[k] = c;
        }
        r.truncate(dd);
        Ok((Self::new(q), Self::new(r)))
    }

    pub fn rem(&self, d: &Self) -> Result<Self, PolyError> {
        Ok(self.divrem(d)?.1)
    }

    pub fn div_exact(&self, d: &Self) -> Result<Self, PolyError> {
        let (q, r) = self.divrem(d)?;
        if !r.is_zero() {
            return Err(PolyError::InexactDivision);
        }
        Ok(q)
    }

    /// Monic gcd (zero if both are zero).
    pub fn gcd(&self, o: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let r = a.rem(&b).expect("nonzero divisor");
            a = b;
            b = r;
        }
        a.monic()
    }

    /// `(g, s)` with `g = gcd(self, m)` monic and `s·self ≡ g (mod m)`.
    pub fn gcd_ext(&self, m: &Self) -> (Self, Self) {
        let (mut r0, mut r1) = (m.clone(), self.rem(m).unwrap_or_else(|_| self.clone()));
        let (mut s0, mut s1) = (Self::zero(), Self::one());
        while !r1.is_zero() {
            let (q, r) = r0.divrem(&r1).expect("nonzero divisor");
            let s = s0.sub(&q.mul(&s1));
            r0 = r1;
            r1 = r;
            s0 = s1;
            s1 = s;
        }
        let l = r0.leading();
        if l.is_zero() {
            return (r0, s0);
        }
        let inv = Rational::one() / l;
        (r0.scale(&inv), s0.scale(&inv))
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * Rational::from_integer((k as i64).into()))
                .collect(),
        )
    }

    /// Product of the distinct irreducible factors, monic.
    pub fn squarefree_part(&self) -> Self {
        if self.degree() == 0 {
            return self.monic();
        }
        let g = self.gcd(&self.derivative());
        self.div_exact(&g).expect("gcd divides").monic()
    }

    /// Largest `m` with `(x - r)^m | self`, by repeated synthetic division.
    /// The zero polynomial has no finite multiplicity; `usize::MAX` is returned.
    pub fn multiplicity_at(&self, r: &Rational) -> usize {
        if self.is_zero() {
            return usize::MAX;
        }
        let mut p = self.coeffs.clone();
        let mut m = 0;
        loop {
            // synthetic division by (x - r)
            let n = p.len();
            if n <= 1 {
                return m;
            }
            let mut q = vec![Rational::zero(); n - 1];
            let mut acc = Rational::zero();
            for k in (0..n).rev() {
                acc = acc * r + &p[k];
                if k > 0 {
                    q[k - 1] = acc.clone();
                }
            }
            if !acc.is_zero() {
                return m;
            }
            m += 1;
            p = q;
        }
    }

    /// `p(x²)`.
    pub fn in_square(&self) -> Self {
        let mut out = vec![Rational::zero(); 2 * self.coeffs.len()];
        for (k, c) in self.coeffs.iter().enumerate() {
            out[2 * k] = c.clone();
        }
        Self::new(out)
    }

    /// Inverse of `in_square` for even polynomials.
    pub fn even_to_square(&self) -> Option<Self> {
        if self.coeffs.iter().enumerate().any(|(k, c)| k % 2 == 1 && !c.is_zero()) {
            return None;
        }
        Some(Self::new(self.coeffs.iter().step_by(2).cloned().collect()))
    }

    /// `self(q(x))`.
    pub fn compose(&self, q: &Self) -> Self {
        self.coeffs.iter().rev().fold(Self::zero(), |acc, c| acc.mul(q).add(&Self::constant(c.clone())))
    }

    pub fn to_multipoly(&self, var: &str) -> MultiPoly {
        MultiPoly::from_terms(&[var], self.coeffs.iter().enumerate().map(|(k, c)| (vec![k as u32], c.clone())))
    }

    /// Reads a polynomial whose only free variable is `var`.
    pub fn from_multipoly(p: &MultiPoly, var: &str) -> Result<Self, PolyError> {
        let i = p.var_index(var)?;
        let mut out = Vec::new();
        for (e, c) in p.terms() {
            if e.iter().enumerate().any(|(k, &x)| k != i && x > 0) {
                return Err(PolyError::NotUnivariate(var.into()));
            }
            let k = e[i] as usize;
            if out.len() <= k {
                out.resize(k + 1, Rational::zero());
            }
            out[k] = c.clone();
        }
        Ok(Self::new(out))
    }

    pub fn to_strings(&self) -> Vec<String> {
        self.coeffs.iter().map(format_rational).collect()
    }

    /// Real roots by bisection on sign changes of a dense grid, for tests
    /// and floating diagnostics.
    pub fn real_roots_f64(&self, lo: f64, hi: f64, steps: usize) -> Vec<f64> {
        let sf = self.squarefree_part();
        let mut out = Vec::new();
        let h = (hi - lo) / steps as f64;
        let mut a = lo;
        let mut fa = sf.eval_f64(a);
        for k in 1..=steps {
            let b = lo + h * k as f64;
            let fb = sf.eval_f64(b);
            if fa == 0.0 {
                out.push(a);
            } else if fa * fb < 0.0 {
                let (mut x0, mut x1, mut f0) = (a, b, fa);
                for _ in 0..200 {
                    let m = 0.5 * (x0 + x1);
                    let fm = sf.eval_f64(m);
                    if f0 * fm <= 0.0 {
                        x1 = m;
                    } else {
                        x0 = m;
                        f0 = fm;
                    }
                }
                out.push(0.5 * (x0 + x1));
            }
            a = b;
            fa = fb;
        }
        out
    }
}

impl fmt::Display for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_multipoly("x"))
    }
}

/// Newton-form interpolation through `(x_k, y_k)`.
pub fn interpolate(points: &[(Rational, Rational)]) -> UniPoly {
    let n = points.len();
    let xs: Vec<&Rational> = points.iter().map(|p| &p.0).collect();
    let mut dd: Vec<Rational> = points.iter().map(|p| p.1.clone()).collect();
    for j in 1..n {
        for i in (j..n).rev() {
            dd[i] = (&dd[i] - &dd[i - 1]) / (xs[i] - xs[i - j]);
        }
    }
    let mut out = UniPoly::zero();
    for i in (0..n).rev() {
        out = out.mul(&UniPoly::linear_root(xs[i])).add(&UniPoly::constant(dd[i].clone()));
    }
    out
}

/// Univariate polynomial with rational coefficients, serialized.
#[derive(Debug, Clone, Serialize)]
pub struct UniPolyJson {
    pub var: String,
    /// Ascending powers.
    pub coeffs: Vec<String>,
}

impl UniPoly {
    pub fn to_json(&self, var: &str) -> UniPolyJson {
        UniPolyJson { var: var.into(), coeffs: self.to_strings() }
    }

    pub fn max_abs_coeff_f64(&self) -> f64 {
        use crate::numeric::Scalar;
        self.coeffs.iter().map(|c| c.abs().as_f64()).fold(0.0, f64::max)
    }
}

/// Characteristic polynomial `det(xI − A)` by Faddeev–LeVerrier.
pub fn charpoly(a: &[Vec<Rational>]) -> UniPoly {
    let n = a.len();
    let mul = |x: &[Vec<Rational>], y: &[Vec<Rational>]| -> Vec<Vec<Rational>> {
        (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| (0..n).fold(Rational::zero(), |acc, k| acc + &x[i][k] * &y[k][j]))
                    .collect()
            })
            .collect()
    };
    let mut coeffs = vec![Rational::zero(); n + 1];
    coeffs[n] = Rational::one();
    let mut m: Vec<Vec<Rational>> = vec![vec![Rational::zero(); n]; n];
    for k in 1..=n {
        // M_k = A M_{k-1} + c_{n-k+1} I
        let mut mk = mul(a, &m);
        for (i, row) in mk.iter_mut().enumerate() {
            row[i] += &coeffs[n - k + 1];
        }
        let am = mul(a, &mk);
        let tr = (0..n).fold(Rational::zero(), |acc, i| acc + &am[i][i]);
        coeffs[n - k] = -tr / Rational::from_integer((k as i64).into());
        m = mk;
    }
    UniPoly::new(coeffs)
}
