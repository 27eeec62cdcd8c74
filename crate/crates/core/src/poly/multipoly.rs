//! Sparse multivariate polynomials with exact rational coefficients.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::PolyError;
use crate::numeric::{format_rational, parse_rational, Rational};

pub type Exponents = Vec<u32>;

/// A polynomial over `Q` in an ordered list of named variables. Zero
/// coefficients are never stored.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiPoly {
    vars: Vec<String>,
    terms: BTreeMap<Exponents, Rational>,
}

impl MultiPoly {
    pub fn zero(vars: &[&str]) -> Self {
        Self { vars: vars.iter().map(|s| s.to_string()).collect(), terms: BTreeMap::new() }
    }

    pub fn zero_like(&self) -> Self {
        Self { vars: self.vars.clone(), terms: BTreeMap::new() }
    }

    pub fn constant_like(&self, c: Rational) -> Self {
        let mut p = self.zero_like();
        if !c.is_zero() {
            p.terms.insert(vec![0; self.vars.len()], c);
        }
        p
    }

    pub fn constant(vars: &[&str], c: Rational) -> Self {
        Self::zero(vars).constant_like(c)
    }

    pub fn var(vars: &[&str], name: &str) -> Result<Self, PolyError> {
        let mut p = Self::zero(vars);
        let i = p.var_index(name)?;
        let mut e = vec![0; vars.len()];
        e[i] = 1;
        p.terms.insert(e, Rational::one());
        Ok(p)
    }

    pub fn from_terms(vars: &[&str], terms: impl IntoIterator<Item = (Exponents, Rational)>) -> Self {
        let mut p = Self::zero(vars);
        for (e, c) in terms {
            assert_eq!(e.len(), vars.len(), "exponent vector length");
            p.add_term(e, c);
        }
        p
    }

    fn add_term(&mut self, e: Exponents, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(e) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = o.get() + &c;
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn var_index(&self, name: &str) -> Result<usize, PolyError> {
        self.vars.iter().position(|v| v == name).ok_or_else(|| PolyError::UnknownVariable(name.into()))
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponents, &Rational)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|e| e.iter().all(|&x| x == 0))
    }

    pub fn constant_term(&self) -> Rational {
        self.terms.get(&vec![0; self.vars.len()]).cloned().unwrap_or_else(Rational::zero)
    }

    fn check_vars(&self, other: &Self) -> Result<(), PolyError> {
        if self.vars != other.vars {
            return Err(PolyError::VariableMismatch(self.vars.clone(), other.vars.clone()));
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self, PolyError> {
        self.check_vars(other)?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self, PolyError> {
        self.check_vars(other)?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), -c);
        }
        Ok(out)
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self, PolyError> {
        self.check_vars(other)?;
        let mut acc: HashMap<Exponents, Rational> = HashMap::new();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e: Exponents = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                let c = ca * cb;
                match acc.get_mut(&e) {
                    Some(v) => *v += c,
                    None => {
                        acc.insert(e, c);
                    }
                }
            }
        }
        Ok(Self { vars: self.vars.clone(), terms: acc.into_iter().filter(|(_, c)| !c.is_zero()).collect() })
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return self.zero_like();
        }
        Self { vars: self.vars.clone(), terms: self.terms.iter().map(|(e, v)| (e.clone(), v * c)).collect() }
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut out = self.constant_like(Rational::one());
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                out = &out * &base;
            }
            k >>= 1;
            if k > 0 {
                base = &base * &base;
            }
        }
        out
    }

    pub fn degree(&self, var: &str) -> Result<u32, PolyError> {
        let i = self.var_index(var)?;
        Ok(self.terms.keys().map(|e| e[i]).max().unwrap_or(0))
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(|e| e.iter().sum()).max().unwrap_or(0)
    }

    /// Formal partial derivative.
    pub fn derivative(&self, var: &str) -> Result<Self, PolyError> {
        let i = self.var_index(var)?;
        let mut out = self.zero_like();
        for (e, c) in &self.terms {
            if e[i] > 0 {
                let mut e2 = e.clone();
                e2[i] -= 1;
                out.add_term(e2, c * Rational::from_integer(BigInt::from(e[i])));
            }
        }
        Ok(out)
    }

    /// Evaluates with every variable assigned.
    pub fn evaluate(&self, values: &[(&str, Rational)]) -> Result<Rational, PolyError> {
        let p = self.substitute_values(values)?;
        if !p.is_constant() {
            let free = p.free_vars().into_iter().next().unwrap_or_default();
            return Err(PolyError::UnknownVariable(free));
        }
        Ok(p.constant_term())
    }

    /// Substitutes values for some variables; the variable list is kept.
    pub fn substitute_values(&self, values: &[(&str, Rational)]) -> Result<Self, PolyError> {
        let idx: Vec<(usize, &Rational)> =
            values.iter().map(|(n, v)| Ok((self.var_index(n)?, v))).collect::<Result<_, PolyError>>()?;
        let mut out = self.zero_like();
        let mut powers: HashMap<(usize, u32), Rational> = HashMap::new();
        for (e, c) in &self.terms {
            let mut e2 = e.clone();
            let mut c2 = c.clone();
            for &(i, v) in &idx {
                if e[i] > 0 {
                    let p = powers.entry((i, e[i])).or_insert_with(|| pow_rational(v, e[i]));
                    c2 *= p.clone();
                    e2[i] = 0;
                }
            }
            out.add_term(e2, c2);
        }
        Ok(out)
    }

    /// Replaces variable `var` by a polynomial over the same variables.
    pub fn compose(&self, var: &str, replacement: &Self) -> Result<Self, PolyError> {
        self.check_vars(replacement)?;
        let coeffs = self.coefficients_in(var)?;
        // Horner in the replacement
        let mut out = self.zero_like();
        for c in coeffs.iter().rev() {
            out = &(&out * replacement) + c;
        }
        Ok(out)
    }

    /// Coefficients `c_k` with `self = Σ c_k var^k`; the `c_k` are free of `var`.
    pub fn coefficients_in(&self, var: &str) -> Result<Vec<Self>, PolyError> {
        let i = self.var_index(var)?;
        let d = self.degree(var)? as usize;
        let mut out = vec![self.zero_like(); d + 1];
        for (e, c) in &self.terms {
            let mut e2 = e.clone();
            let k = e2[i] as usize;
            e2[i] = 0;
            out[k].add_term(e2, c.clone());
        }
        if self.is_zero() {
            out.clear();
        }
        Ok(out)
    }

    pub fn from_coefficients(var: &str, coeffs: &[Self], like: &Self) -> Result<Self, PolyError> {
        let i = like.var_index(var)?;
        let mut out = like.zero_like();
        for (k, c) in coeffs.iter().enumerate() {
            like.check_vars(c)?;
            for (e, v) in &c.terms {
                let mut e2 = e.clone();
                e2[i] += k as u32;
                out.add_term(e2, v.clone());
            }
        }
        Ok(out)
    }

    /// Re-expresses the polynomial over a superset (or reordering) of its
    /// variables.
    pub fn with_vars(&self, vars: &[&str]) -> Result<Self, PolyError> {
        let map: Vec<usize> = self
            .vars
            .iter()
            .enumerate()
            .map(|(k, v)| {
                if self.terms.keys().all(|e| e[k] == 0) {
                    Ok(vars.iter().position(|w| w == v).unwrap_or(usize::MAX))
                } else {
                    vars.iter().position(|w| w == v).ok_or_else(|| PolyError::UnknownVariable(v.clone()))
                }
            })
            .collect::<Result<_, _>>()?;
        let mut out = Self::zero(vars);
        for (e, c) in &self.terms {
            let mut e2 = vec![0; vars.len()];
            for (k, &x) in e.iter().enumerate() {
                if x > 0 {
                    e2[map[k]] = x;
                }
            }
            out.add_term(e2, c.clone());
        }
        Ok(out)
    }

    /// Variables that actually occur.
    pub fn free_vars(&self) -> Vec<String> {
        self.vars
            .iter()
            .enumerate()
            .filter(|(k, _)| self.terms.keys().any(|e| e[*k] > 0))
            .map(|(_, v)| v.clone())
            .collect()
    }

    fn leading(&self) -> Option<(&Exponents, &Rational)> {
        self.terms.iter().next_back()
    }

    /// Exact division; fails if `other` does not divide `self`.
    pub fn div_exact(&self, other: &Self) -> Result<Self, PolyError> {
        self.check_vars(other)?;
        let (le, lc) = other.leading().ok_or(PolyError::ZeroPolynomial)?;
        if other.terms.len() == 1 {
            let mut out = self.zero_like();
            for (e, c) in &self.terms {
                let e2 = monomial_div(e, le).ok_or(PolyError::InexactDivision)?;
                out.add_term(e2, c / lc);
            }
            return Ok(out);
        }
        let mut q = self.zero_like();
        let mut r = self.clone();
        while let Some((re, rc)) = r.leading() {
            let e = monomial_div(re, le).ok_or(PolyError::InexactDivision)?;
            let c = rc / lc;
            let mut t = self.zero_like();
            t.add_term(e, c);
            r = &r - &(&t * other);
            q = &q + &t;
        }
        Ok(q)
    }

    /// Integer multiple with coprime coefficients; the graded-lex leading
    /// coefficient is made positive.
    pub fn primitive_integer(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let l = self.terms.values().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let ints: Vec<BigInt> = self.terms.values().map(|c| c.numer() * (&l / c.denom())).collect();
        let g = ints.iter().fold(BigInt::zero(), |acc, v| acc.gcd(v));
        let sign_neg = self.graded_terms().first().is_some_and(|(_, c)| c.is_negative());
        let mut factor = Rational::new(l, g);
        if sign_neg {
            factor = -factor;
        }
        self.scale(&factor)
    }

    /// Terms in graded-lex order, highest first.
    pub fn graded_terms(&self) -> Vec<(&Exponents, &Rational)> {
        let mut t: Vec<_> = self.terms.iter().collect();
        t.sort_by(|a, b| {
            let da: u32 = a.0.iter().sum();
            let db: u32 = b.0.iter().sum();
            db.cmp(&da).then_with(|| b.0.cmp(a.0))
        });
        t
    }

    pub fn to_json(&self) -> PolyJson {
        PolyJson {
            vars: self.vars.clone(),
            terms: self
                .graded_terms()
                .into_iter()
                .map(|(e, c)| TermJson { exps: e.clone(), coeff: format_rational(c) })
                .collect(),
        }
    }

    pub fn from_json(j: &PolyJson) -> Result<Self, String> {
        let vars: Vec<&str> = j.vars.iter().map(|s| s.as_str()).collect();
        let mut p = Self::zero(&vars);
        for t in &j.terms {
            if t.exps.len() != vars.len() {
                return Err("exponent vector length mismatch".into());
            }
            let c = parse_rational(&t.coeff).ok_or_else(|| format!("bad coefficient `{}`", t.coeff))?;
            p.add_term(t.exps.clone(), c);
        }
        Ok(p)
    }
}

fn monomial_div(a: &[u32], b: &[u32]) -> Option<Exponents> {
    a.iter().zip(b).map(|(x, y)| x.checked_sub(*y)).collect()
}

pub fn pow_rational(v: &Rational, k: u32) -> Rational {
    num_traits::pow(v.clone(), k as usize)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermJson {
    pub exps: Vec<u32>,
    pub coeff: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolyJson {
    pub vars: Vec<String>,
    pub terms: Vec<TermJson>,
}

impl<'a> Add<&'a MultiPoly> for &'a MultiPoly {
    type Output = MultiPoly;
    /// Panics on differing variable lists; use `try_add` for a checked version.
    fn add(self, rhs: &'a MultiPoly) -> MultiPoly {
        self.try_add(rhs).expect("variable lists must agree")
    }
}

impl<'a> Sub<&'a MultiPoly> for &'a MultiPoly {
    type Output = MultiPoly;
    fn sub(self, rhs: &'a MultiPoly) -> MultiPoly {
        self.try_sub(rhs).expect("variable lists must agree")
    }
}

impl<'a> Mul<&'a MultiPoly> for &'a MultiPoly {
    type Output = MultiPoly;
    fn mul(self, rhs: &'a MultiPoly) -> MultiPoly {
        self.try_mul(rhs).expect("variable lists must agree")
    }
}

impl Neg for &MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        self.scale(&-Rational::one())
    }
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (k, (e, c)) in self.graded_terms().into_iter().enumerate() {
            let neg = c.is_negative();
            let a = c.abs();
            if k == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            let mono: Vec<String> = e
                .iter()
                .zip(&self.vars)
                .filter(|(x, _)| **x > 0)
                .map(|(x, v)| if *x == 1 { v.clone() } else { format!("{v}^{x}") })
                .collect();
            if mono.is_empty() {
                write!(f, "{}", format_rational(&a))?;
            } else if a.is_one() {
                write!(f, "{}", mono.join("*"))?;
            } else {
                write!(f, "{}*{}", format_rational(&a), mono.join("*"))?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::int;

    fn v(vars: &[&str], n: &str) -> MultiPoly {
        MultiPoly::var(vars, n).unwrap()
    }

    #[test]
    fn product_and_derivative() {
        let vs = ["V"];
        let x = v(&vs, "V");
        let two = MultiPoly::constant(&vs, int(2));
        let p = &(&x * &x) - &two;
        let q = &(&x * &x) + &two;
        let r = &p * &q;
        assert_eq!(r.to_string(), "V^4 - 4");
        assert_eq!(r.derivative("V").unwrap().to_string(), "4*V^3");
    }

    #[test]
    fn mismatch_and_division() {
        let a = v(&["x", "y"], "x");
        let b = v(&["x", "z"], "x");
        assert!(matches!(a.try_add(&b), Err(PolyError::VariableMismatch(..))));
        let vs = ["x", "y"];
        let x = v(&vs, "x");
        let y = v(&vs, "y");
        let f = &(&x + &y) * &(&x - &y);
        assert_eq!(f.div_exact(&(&x - &y)).unwrap(), &x + &y);
        assert_eq!(f.div_exact(&(&x + &x)), Err(PolyError::InexactDivision));
    }

    #[test]
    fn compose_and_substitute() {
        let vs = ["x", "y"];
        let x = v(&vs, "x");
        let y = v(&vs, "y");
        let f = &(&x * &x) + &y;
        let g = f.compose("x", &(&y + &y)).unwrap();
        assert_eq!(g.to_string(), "4*y^2 + y");
        let h = f.substitute_values(&[("y", int(3))]).unwrap();
        assert_eq!(h.to_string(), "x^2 + 3");
        assert_eq!(f.evaluate(&[("x", int(2)), ("y", int(1))]).unwrap(), int(5));
    }

    #[test]
    fn json_round_trip() {
        let vs = ["a", "b"];
        let a = v(&vs, "a");
        let b = v(&vs, "b");
        let f = &(&a * &b).scale(&crate::numeric::rat(-3, 2)) + &b.pow(3);
        let j = f.to_json();
        assert_eq!(MultiPoly::from_json(&j).unwrap(), f);
        assert_eq!(f.primitive_integer().to_string(), "2*b^3 - 3*a*b");
    }
}
