//! Arithmetic modulo word-sized primes, Chinese remaindering and rational
//! reconstruction.
//!
//! Heavy eliminations are run modulo a sequence of primes; the rational
//! result is reconstructed and accepted only once an additional prime
//! confirms it.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::PolyError;
use crate::numeric::Rational;
use crate::poly::volpoly::par_map;

/// Polynomial over `F_p`, ascending coefficients, no trailing zeros.
pub type FpPoly = Vec<u64>;

/// The prime field `F_p` for `p < 2^62`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Fp {
    p: u64,
}

impl Fp {
    pub fn new(p: u64) -> Self {
        Self { p }
    }
    pub fn modulus(&self) -> u64 {
        self.p
    }
    #[inline]
    pub fn add(&self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }
    #[inline]
    pub fn sub(&self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }
    #[inline]
    pub fn neg(&self, a: u64) -> u64 {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }
    #[inline]
    pub fn mul(&self, a: u64, b: u64) -> u64 {
        ((a as u128 * b as u128) % self.p as u128) as u64
    }
    pub fn pow(&self, mut a: u64, mut e: u64) -> u64 {
        let mut r = 1;
        while e > 0 {
            if e & 1 == 1 {
                r = self.mul(r, a);
            }
            a = self.mul(a, a);
            e >>= 1;
        }
        r
    }
    /// Inverse of a nonzero element.
    pub fn inv(&self, a: u64) -> u64 {
        debug_assert!(a != 0);
        self.pow(a, self.p - 2)
    }
    pub fn from_i64(&self, v: i64) -> u64 {
        v.rem_euclid(self.p as i64) as u64
    }
    pub fn from_bigint(&self, v: &BigInt) -> u64 {
        v.mod_floor(&BigInt::from(self.p)).to_u64().expect("reduced")
    }
    /// Image of a rational, `None` when the denominator vanishes mod `p`.
    pub fn from_rational(&self, r: &Rational) -> Option<u64> {
        let d = self.from_bigint(r.denom());
        (d != 0).then(|| self.mul(self.from_bigint(r.numer()), self.inv(d)))
    }

    // --- polynomials ---

    pub fn trim(&self, mut a: FpPoly) -> FpPoly {
        while a.last() == Some(&0) {
            a.pop();
        }
        a
    }
    pub fn padd(&self, a: &[u64], b: &[u64]) -> FpPoly {
        let n = a.len().max(b.len());
        let g = |v: &[u64], i: usize| v.get(i).copied().unwrap_or(0);
        self.trim((0..n).map(|i| self.add(g(a, i), g(b, i))).collect())
    }
    pub fn psub(&self, a: &[u64], b: &[u64]) -> FpPoly {
        let n = a.len().max(b.len());
        let g = |v: &[u64], i: usize| v.get(i).copied().unwrap_or(0);
        self.trim((0..n).map(|i| self.sub(g(a, i), g(b, i))).collect())
    }
    pub fn pmul(&self, a: &[u64], b: &[u64]) -> FpPoly {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = vec![0u64; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                out[i + j] = self.add(out[i + j], self.mul(x, y));
            }
        }
        self.trim(out)
    }
    pub fn pscale(&self, a: &[u64], c: u64) -> FpPoly {
        self.trim(a.iter().map(|&x| self.mul(x, c)).collect())
    }
    /// Quotient and remainder; `b` must be nonzero.
    pub fn pdivrem(&self, a: &[u64], b: &[u64]) -> (FpPoly, FpPoly) {
        let db = b.len() - 1;
        let lead_inv = self.inv(b[db]);
        let mut r = a.to_vec();
        if r.len() < b.len() {
            return (Vec::new(), self.trim(r));
        }
        let mut q = vec![0u64; r.len() - db];
        for k in (0..q.len()).rev() {
            let c = self.mul(r[k + db], lead_inv);
            q[k] = c;
            if c != 0 {
                for (j, &bj) in b.iter().enumerate() {
                    r[k + j] = self.sub(r[k + j], self.mul(c, bj));
                }
            }
        }
        r.truncate(db);
        (self.trim(q), self.trim(r))
    }
    pub fn prem(&self, a: &[u64], b: &[u64]) -> FpPoly {
        self.pdivrem(a, b).1
    }
    pub fn pmonic(&self, a: &[u64]) -> FpPoly {
        match a.last() {
            None => Vec::new(),
            Some(&l) => self.pscale(a, self.inv(l)),
        }
    }
    pub fn pgcd(&self, a: &[u64], b: &[u64]) -> FpPoly {
        let (mut a, mut b) = (self.trim(a.to_vec()), self.trim(b.to_vec()));
        while !b.is_empty() {
            let r = self.prem(&a, &b);
            a = b;
            b = r;
        }
        self.pmonic(&a)
    }
    pub fn pderiv(&self, a: &[u64]) -> FpPoly {
        self.trim(a.iter().enumerate().skip(1).map(|(k, &c)| self.mul(c, k as u64 % self.p)).collect())
    }
    /// Monic square-free part (valid when `p` exceeds the degree).
    pub fn psquarefree(&self, a: &[u64]) -> FpPoly {
        let g = self.pgcd(a, &self.pderiv(a));
        self.pmonic(&self.pdivrem(a, &g).0)
    }
    pub fn peval(&self, a: &[u64], x: u64) -> u64 {
        a.iter().rev().fold(0, |acc, &c| self.add(self.mul(acc, x), c))
    }
    /// Inverse of `a` modulo `m`, if coprime.
    pub fn pinv_mod(&self, a: &[u64], m: &[u64]) -> Option<FpPoly> {
        let (mut r0, mut r1) = (m.to_vec(), self.prem(a, m));
        let (mut s0, mut s1): (FpPoly, FpPoly) = (Vec::new(), vec![1]);
        while !r1.is_empty() {
            let (q, r) = self.pdivrem(&r0, &r1);
            let s = self.psub(&s0, &self.pmul(&q, &s1));
            r0 = r1;
            r1 = r;
            s0 = s1;
            s1 = s;
        }
        if r0.len() != 1 {
            return None;
        }
        Some(self.prem(&self.pscale(&s0, self.inv(r0[0])), m))
    }
    /// Interpolating polynomial through `(x_k, y_k)` with distinct `x_k`.
    pub fn interpolate(&self, xs: &[u64], ys: &[u64]) -> FpPoly {
        let n = xs.len();
        let mut dd = ys.to_vec();
        for j in 1..n {
            for i in (j..n).rev() {
                let num = self.sub(dd[i], dd[i - 1]);
                dd[i] = self.mul(num, self.inv(self.sub(xs[i], xs[i - j])));
            }
        }
        let mut out: FpPoly = Vec::new();
        for i in (0..n).rev() {
            out = self.padd(&self.pmul(&out, &[self.neg(xs[i]), 1]), &[dd[i]]);
        }
        out
    }
    /// Resultant of two polynomials with their actual degrees.
    pub fn presultant(&self, a: &[u64], b: &[u64]) -> u64 {
        let (mut a, mut b) = (self.trim(a.to_vec()), self.trim(b.to_vec()));
        if a.is_empty() || b.is_empty() {
            return 0;
        }
        let mut res = 1u64;
        loop {
            let (da, db) = (a.len() - 1, b.len() - 1);
            if db == 0 {
                return self.mul(res, self.pow(b[0], da as u64));
            }
            let r = self.prem(&a, &b);
            if r.is_empty() {
                return 0;
            }
            let dr = r.len() - 1;
            res = self.mul(res, self.pow(b[db], (da - dr) as u64));
            if da % 2 == 1 && db % 2 == 1 {
                res = self.neg(res);
            }
            a = b;
            b = r;
        }
    }

    /// Determinant by Gaussian elimination.
    pub fn det(&self, mut m: Vec<Vec<u64>>) -> u64 {
        let n = m.len();
        let mut det = 1u64;
        for k in 0..n {
            let Some(piv) = (k..n).find(|&i| m[i][k] != 0) else {
                return 0;
            };
            if piv != k {
                m.swap(piv, k);
                det = self.neg(det);
            }
            det = self.mul(det, m[k][k]);
            let inv = self.inv(m[k][k]);
            for i in k + 1..n {
                let f = self.mul(m[i][k], inv);
                if f == 0 {
                    continue;
                }
                for j in k..n {
                    let v = self.mul(f, m[k][j]);
                    m[i][j] = self.sub(m[i][j], v);
                }
            }
        }
        det
    }
    /// Characteristic polynomial `det(xI − A)` (requires `p > n`).
    pub fn charpoly(&self, a: &[Vec<u64>]) -> FpPoly {
        let n = a.len();
        let mul = |x: &[Vec<u64>], y: &[Vec<u64>]| -> Vec<Vec<u64>> {
            (0..n)
                .map(|i| {
                    (0..n).map(|j| (0..n).fold(0, |acc, k| self.add(acc, self.mul(x[i][k], y[k][j])))).collect()
                })
                .collect()
        };
        let mut c = vec![0u64; n + 1];
        c[n] = 1;
        let mut m = vec![vec![0u64; n]; n];
        for k in 1..=n {
            let mut mk = mul(a, &m);
            for (i, row) in mk.iter_mut().enumerate() {
                row[i] = self.add(row[i], c[n - k + 1]);
            }
            let am = mul(a, &mk);
            let tr = (0..n).fold(0, |acc, i| self.add(acc, am[i][i]));
            c[n - k] = self.neg(self.mul(tr, self.inv(k as u64)));
            m = mk;
        }
        c
    }
}

fn mulmod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn powmod(mut a: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1 % m;
    a %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = mulmod(r, a, m);
        }
        a = mulmod(a, a, m);
        e >>= 1;
    }
    r
}

/// Deterministic Miller–Rabin for 64-bit integers.
pub fn is_prime(n: u64) -> bool {
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    if n < 2 {
        return false;
    }
    for &b in &BASES {
        if n % b == 0 {
            return n == b;
        }
    }
    let (mut d, mut s) = (n - 1, 0);
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'outer: for &a in &BASES {
        let mut x = powmod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mulmod(x, x, n);
            if x == n - 1 {
                continue 'outer;
            }
        }
        return false;
    }
    true
}

/// Primes below `2^62` in decreasing order.
pub fn primes() -> impl Iterator<Item = u64> {
    let mut n = (1u64 << 62) - 1;
    std::iter::from_fn(move || {
        while !is_prime(n) {
            n -= 2;
        }
        let p = n;
        n -= 2;
        Some(p)
    })
}

/// Rational `r/s ≡ u (mod m)` with `|r|, s ≤ sqrt(m/2)`, if one exists.
pub fn rational_reconstruct(u: &BigInt, m: &BigInt) -> Option<Rational> {
    let bound = (m / BigInt::from(2)).sqrt();
    let (mut r0, mut r1) = (m.clone(), u.mod_floor(m));
    let (mut s0, mut s1) = (BigInt::zero(), BigInt::one());
    while r1 > bound {
        let q = &r0 / &r1;
        let r2 = &r0 - &q * &r1;
        let s2 = &s0 - &q * &s1;
        r0 = r1;
        r1 = r2;
        s0 = s1;
        s1 = s2;
    }
    if s1.is_zero() || s1.abs() > bound || !r1.gcd(&s1).is_one() {
        return None;
    }
    Some(Rational::new(r1, s1))
}

/// Accumulates residue vectors over several primes.
#[derive(Debug, Clone)]
pub struct Crt {
    modulus: BigInt,
    values: Vec<BigInt>,
    last: Option<Vec<Rational>>,
}

impl Default for Crt {
    fn default() -> Self {
        Self::new()
    }
}

impl Crt {
    pub fn new() -> Self {
        Self { modulus: BigInt::one(), values: Vec::new(), last: None }
    }

    pub fn primes_used(&self) -> bool {
        !self.modulus.is_one()
    }

    /// Adds residues modulo `p`. Returns the reconstruction once it is
    /// confirmed by this prime (i.e. it already reconstructed before `p`
    /// was added and `p` agrees with it).
    pub fn add(&mut self, p: u64, residues: &[u64]) -> Option<Vec<Rational>> {
        let f = Fp::new(p);
        if let Some(prev) = &self.last {
            let agrees = prev.len() == residues.len()
                && prev.iter().zip(residues).all(|(r, &x)| f.from_rational(r) == Some(x));
            if agrees {
                return Some(prev.clone());
            }
        }
        if self.values.is_empty() {
            self.values = residues.iter().map(|&x| BigInt::from(x)).collect();
            self.modulus = BigInt::from(p);
        } else {
            assert_eq!(self.values.len(), residues.len(), "residue vector length changed");
            let pm = BigInt::from(p);
            let minv = f.inv(f.from_bigint(&self.modulus));
            for (v, &x) in self.values.iter_mut().zip(residues) {
                let t = f.mul(f.sub(x, f.from_bigint(v)), minv);
                *v += &self.modulus * BigInt::from(t);
            }
            self.modulus *= pm;
        }
        self.last = self.values.iter().map(|v| rational_reconstruct(v, &self.modulus)).collect();
        None
    }
}

const MAX_BAD_PRIMES: usize = 8;
const MAX_PRIMES: usize = 400;

/// Runs `per_prime` over successive primes until the reconstructed residue
/// vector is confirmed by one more prime.
pub fn reconstruct_over_primes(
    jobs: usize,
    per_prime: impl Fn(&Fp) -> Option<Vec<u64>> + Sync,
) -> Result<Vec<Rational>, PolyError> {
    let mut crt = Crt::new();
    let mut key_len = None;
    let mut bad = 0;
    let mut primes = primes();
    let mut used = 0;
    while used < MAX_PRIMES {
        let batch: Vec<u64> = primes.by_ref().take(jobs.max(1)).collect();
        used += batch.len();
        let results = par_map(&batch, jobs, |&p| per_prime(&Fp::new(p)));
        for (p, r) in batch.into_iter().zip(results) {
            let Some(r) = r else {
                bad += 1;
                if bad > MAX_BAD_PRIMES {
                    return Err(PolyError::ConstructionDegenerate("too many unlucky primes".into()));
                }
                continue;
            };
            match key_len {
                None => key_len = Some(r.len()),
                Some(k) if k != r.len() => {
                    bad += 1;
                    continue;
                }
                _ => {}
            }
            if let Some(v) = crt.add(p, &r) {
                return Ok(v);
            }
        }
    }
    Err(PolyError::ConstructionDegenerate("rational reconstruction did not stabilize".into()))
}
