//! Resultants by the subresultant polynomial remainder sequence.
//!
//! Polynomials are viewed as univariate in the elimination variable with
//! coefficients in the polynomial ring of the remaining variables; every
//! division in the sequence is exact.

use num_traits::One;

use crate::error::PolyError;
use crate::poly::multipoly::MultiPoly;

type Coeffs = Vec<MultiPoly>;

fn trim(mut v: Coeffs) -> Coeffs {
    while v.last().is_some_and(|c| c.is_zero()) {
        v.pop();
    }
    v
}

fn deg(v: &Coeffs) -> usize {
    v.len().saturating_sub(1)
}

/// Pseudo-remainder: `lc(b)^(deg a − deg b + 1) · a mod b`.
fn prem(a: &Coeffs, b: &Coeffs) -> Coeffs {
    let n = deg(b);
    let lb = b.last().expect("nonzero divisor").clone();
    let mut r = a.clone();
    let mut e = deg(a) as i64 - n as i64 + 1;
    while !r.is_empty() && deg(&r) >= n {
        let lr = r.last().expect("nonempty").clone();
        let shift = deg(&r) - n;
        let mut next: Coeffs = r.iter().map(|c| c * &lb).collect();
        for (k, bc) in b.iter().enumerate() {
            next[k + shift] = &next[k + shift] - &(&lr * bc);
        }
        r = trim(next);
        e -= 1;
    }
    let f = lb.pow(e.max(0) as u32);
    r.iter().map(|c| c * &f).collect()
}

fn div_all(v: &Coeffs, d: &MultiPoly) -> Result<Coeffs, PolyError> {
    v.iter().map(|c| c.div_exact(d)).collect()
}

/// The subresultant PRS `[A, B, S_1, S_2, ...]` (as polynomials in `var`),
/// ending with the last nonzero member. Requires `deg A ≥ deg B`.
pub fn subresultant_prs(p: &MultiPoly, q: &MultiPoly, var: &str) -> Result<Vec<MultiPoly>, PolyError> {
    let (a, b) = prs_inputs(p, q, var)?;
    let mut out = vec![p.clone(), q.clone()];
    run_prs(a, b, |r| {
        out.push(MultiPoly::from_coefficients(var, r, p).expect("same ring"));
    })?;
    Ok(out)
}

fn prs_inputs(p: &MultiPoly, q: &MultiPoly, var: &str) -> Result<(Coeffs, Coeffs), PolyError> {
    if p.vars() != q.vars() {
        return Err(PolyError::VariableMismatch(p.vars().to_vec(), q.vars().to_vec()));
    }
    if p.is_zero() || q.is_zero() {
        return Err(PolyError::ZeroPolynomial);
    }
    Ok((p.coefficients_in(var)?, q.coefficients_in(var)?))
}

/// Runs the sequence, calling `emit` on each new member. Returns the final
/// `(h, A, B)` with `deg B = 0`, or `None` if a remainder vanished.
fn run_prs(
    mut a: Coeffs,
    mut b: Coeffs,
    mut emit: impl FnMut(&Coeffs),
) -> Result<Option<(MultiPoly, Coeffs, Coeffs)>, PolyError> {
    let one = a[0].constant_like(One::one());
    let mut g = one.clone();
    let mut h = one;
    while deg(&b) > 0 {
        let delta = (deg(&a) - deg(&b)) as u32;
        let r = prem(&a, &b);
        if r.is_empty() {
            return Ok(None);
        }
        let scale = &g * &h.pow(delta);
        let nb = div_all(&r, &scale)?;
        emit(&nb);
        a = b;
        b = nb;
        g = a.last().expect("nonzero").clone();
        // h = g^δ / h^(δ-1)
        h = if delta == 0 {
            h.clone()
        } else {
            g.pow(delta).div_exact(&h.pow(delta - 1))?
        };
    }
    Ok(Some((h, a, b)))
}

/// `Res_var(p, q)`; both must be nonzero.
pub fn resultant(p: &MultiPoly, q: &MultiPoly, var: &str) -> Result<MultiPoly, PolyError> {
    let (mut a, mut b) = prs_inputs(p, q, var)?;
    let mut sign_neg = false;
    if deg(&a) < deg(&b) {
        if deg(&a) % 2 == 1 && deg(&b) % 2 == 1 {
            sign_neg = true;
        }
        std::mem::swap(&mut a, &mut b);
    }
    let (m, n) = (deg(&a), deg(&b));
    if n == 0 {
        let r = b[0].pow(m as u32);
        return Ok(if sign_neg { -&r } else { r });
    }
    // Track the sign (-1)^(deg A · deg B) accumulated along the sequence.
    let mut degs = vec![m, n];
    let state = run_prs(a, b, |r| degs.push(deg(r)))?;
    let Some((h, last_a, last_b)) = state else {
        return Ok(p.zero_like());
    };
    for w in degs.windows(2) {
        if w[0] % 2 == 1 && w[1] % 2 == 1 {
            sign_neg = !sign_neg;
        }
    }
    let da = deg(&last_a) as u32;
    let lb = last_b[0].clone();
    let res = if da == 0 {
        lb
    } else {
        lb.pow(da).div_exact(&h.pow(da - 1))?
    };
    Ok(if sign_neg { -&res } else { res })
}

/// The member of degree 1 of the subresultant PRS, as `(c1, c0)` with the
/// member equal to `c1·var + c0`. Common roots of `p` and `q` in `var` are
/// roots of this linear form.
pub fn linear_subresultant(
    p: &MultiPoly,
    q: &MultiPoly,
    var: &str,
) -> Result<Option<(MultiPoly, MultiPoly)>, PolyError> {
    let (mut a, mut b) = prs_inputs(p, q, var)?;
    if deg(&a) < deg(&b) {
        std::mem::swap(&mut a, &mut b);
    }
    let mut found = None;
    if deg(&b) == 1 {
        found = Some((b[1].clone(), b[0].clone()));
    }
    run_prs(a, b, |r| {
        if found.is_none() && deg(r) == 1 {
            found = Some((r[1].clone(), r[0].clone()));
        }
    })?;
    Ok(found)
}

/// Sylvester-matrix resultant by cofactor-free Bareiss elimination; an
/// independent route used to cross-check `resultant` in tests.
pub fn sylvester_resultant(p: &MultiPoly, q: &MultiPoly, var: &str) -> Result<MultiPoly, PolyError> {
    let (a, b) = prs_inputs(p, q, var)?;
    let (m, n) = (deg(&a), deg(&b));
    let size = m + n;
    let zero = p.zero_like();
    let mut mat = vec![vec![zero.clone(); size]; size];
    for i in 0..n {
        for (k, c) in a.iter().enumerate() {
            mat[i][i + m - k] = c.clone();
        }
    }
    for i in 0..m {
        for (k, c) in b.iter().enumerate() {
            mat[n + i][i + n - k] = c.clone();
        }
    }
    bareiss_det(mat)
}

/// Fraction-free determinant over a polynomial ring.
pub fn bareiss_det(mut m: Vec<Vec<MultiPoly>>) -> Result<MultiPoly, PolyError> {
    let n = m.len();
    if n == 0 {
        return Err(PolyError::ZeroPolynomial);
    }
    let mut prev = m[0][0].constant_like(One::one());
    let mut neg = false;
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            let Some(p) = (k + 1..n).find(|&i| !m[i][k].is_zero()) else {
                return Ok(m[0][0].zero_like());
            };
            m.swap(k, p);
            neg = !neg;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &(&m[i][j] * &m[k][k]) - &(&m[i][k] * &m[k][j]);
                m[i][j] = v.div_exact(&prev)?;
            }
        }
        prev = m[k][k].clone();
    }
    let d = m[n - 1][n - 1].clone();
    Ok(if neg { -&d } else { d })
}
