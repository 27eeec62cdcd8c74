//! Oriented volume, the perturbed family `x + εZ`, its exact cubic volume
//! expansion, and first-order rates of vertex distances.

use std::fmt;

use thiserror::Error;

use crate::embedding::Embedding;
use crate::numeric::{add3, det3, dot3, norm2, scale3, sub3, Scalar};
use crate::surface::{CombinatorialSurface, SmallDiagonal};

/// Sum of oriented cone volumes over faces, coned from vertex `apex` after
/// translating it to the origin. Faces through the apex contribute zero.
pub fn oriented_volume_from<T: Scalar>(
    surface: &CombinatorialSurface,
    embedding: &Embedding<T>,
    apex: usize,
) -> T {
    let o = embedding.point(apex);
    let total = surface
        .faces()
        .iter()
        .filter(|f| !f.contains(&apex))
        .map(|f| {
            let [a, b, c] = f.map(|v| sub3(embedding.point(v), o));
            det3(&a, &b, &c)
        })
        .fold(T::zero(), |acc, d| acc + d);
    total / T::from_int(6)
}

/// Oriented volume with vertex 1 as the common cone vertex.
pub fn oriented_volume<T: Scalar>(surface: &CombinatorialSurface, embedding: &Embedding<T>) -> T {
    oriented_volume_from(surface, embedding, 0)
}

/// `V(P_ε) = v[0] + ε v[1] + ε² v[2] + ε³ v[3]`.
#[derive(Debug, Clone, PartialEq)]
pub struct VolumeExpansion<T> {
    pub coeffs: [T; 4],
}

impl<T: Scalar> VolumeExpansion<T> {
    pub fn v0(&self) -> &T {
        &self.coeffs[0]
    }

    pub fn v1(&self) -> &T {
        &self.coeffs[1]
    }

    pub fn v2(&self) -> &T {
        &self.coeffs[2]
    }

    pub fn v3(&self) -> &T {
        &self.coeffs[3]
    }

    pub fn eval(&self, eps: &T) -> T {
        self.coeffs
            .iter()
            .rev()
            .fold(T::zero(), |acc, c| acc * eps.clone() + c.clone())
    }

    /// dV/dε.
    pub fn derivative_at(&self, eps: &T) -> T {
        let [_, v1, v2, v3] = &self.coeffs;
        v1.clone()
            + T::from_int(2) * eps.clone() * v2.clone()
            + T::from_int(3) * eps.clone() * eps.clone() * v3.clone()
    }

    /// `V(P_ε) − V(P_−ε) = 2(ε V1 + ε³ V3)`.
    pub fn odd_part(&self, eps: &T) -> T {
        let e3 = eps.clone() * eps.clone() * eps.clone();
        T::from_int(2) * (eps.clone() * self.coeffs[1].clone() + e3 * self.coeffs[3].clone())
    }
}

/// Expands every face determinant multilinearly in ε.
pub fn volume_expansion<T: Scalar>(
    surface: &CombinatorialSurface,
    embedding: &Embedding<T>,
    flex: &[[T; 3]],
) -> VolumeExpansion<T> {
    let o = embedding.point(0);
    let zo = &flex[0];
    let mut c = [T::zero(), T::zero(), T::zero(), T::zero()];
    for f in surface.faces().iter().filter(|f| !f.contains(&0)) {
        let [a, b, cc] = f.map(|v| sub3(embedding.point(v), o));
        let [za, zb, zc] = f.map(|v| sub3(&flex[v], zo));
        c[0] = c[0].clone() + det3(&a, &b, &cc);
        c[1] = c[1].clone() + det3(&za, &b, &cc) + det3(&a, &zb, &cc) + det3(&a, &b, &zc);
        c[2] = c[2].clone() + det3(&za, &zb, &cc) + det3(&za, &b, &zc) + det3(&a, &zb, &zc);
        c[3] = c[3].clone() + det3(&za, &zb, &zc);
    }
    let six = T::from_int(6);
    VolumeExpansion { coeffs: c.map(|v| v / six.clone()) }
}

/// `P_ε`: vertex i moves to `x_i + ε Z_i`.
#[derive(Debug, Clone)]
pub struct PerturbedFamily<'a, T> {
    pub base: &'a Embedding<T>,
    pub flex: &'a [[T; 3]],
}

impl<T: Scalar> PerturbedFamily<'_, T> {
    pub fn at(&self, eps: &T) -> Embedding<T> {
        perturb(self.base, self.flex, eps)
    }

    /// `L_ij²` per edge, in edge order.
    pub fn squared_edge_rates(&self, surface: &CombinatorialSurface) -> Vec<T> {
        surface
            .edges()
            .iter()
            .map(|&(i, j)| norm2(&sub3(&self.flex[i], &self.flex[j])))
            .collect()
    }
}

pub fn perturb<T: Scalar>(base: &Embedding<T>, flex: &[[T; 3]], eps: &T) -> Embedding<T> {
    Embedding::new(
        base.coords().iter().zip(flex).map(|(x, z)| add3(x, &scale3(eps, z))).collect(),
    )
}

/// First-order behaviour of the distance between two vertices.
#[derive(Debug, Clone, PartialEq)]
pub struct PairRate<T> {
    pub d0_squared: T,
    /// `(x_k − x_l)·(Z_k − Z_l)`; the length rate is this over `d0`.
    pub dot: T,
    /// `|Z_k − Z_l|²`.
    pub flex_squared: T,
}

impl<T: Scalar> PairRate<T> {
    pub fn rate(&self) -> f64 {
        self.dot.as_f64() / self.d0_squared.as_f64().sqrt()
    }

    /// `d²(ε) = d0² + 2ε dot + ε² |ΔZ|²`.
    pub fn squared_length_at(&self, eps: &T) -> T {
        self.d0_squared.clone()
            + T::from_int(2) * eps.clone() * self.dot.clone()
            + eps.clone() * eps.clone() * self.flex_squared.clone()
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
#[error("vertices coincide; the squared-length rate is {squared_length_rate:?}")]
pub struct DegeneratePair<T: fmt::Debug> {
    pub squared_length_rate: T,
}

pub fn pair_distance_rate<T: Scalar>(
    embedding: &Embedding<T>,
    flex: &[[T; 3]],
    pair: (usize, usize),
) -> Result<PairRate<T>, DegeneratePair<T>> {
    let rate = raw_pair_rate(embedding, flex, pair);
    if rate.d0_squared.is_exactly_zero() {
        return Err(DegeneratePair { squared_length_rate: T::from_int(2) * rate.dot });
    }
    Ok(rate)
}

fn raw_pair_rate<T: Scalar>(embedding: &Embedding<T>, flex: &[[T; 3]], (k, l): (usize, usize)) -> PairRate<T> {
    let dx = sub3(embedding.point(k), embedding.point(l));
    let dz = sub3(&flex[k], &flex[l]);
    PairRate { d0_squared: norm2(&dx), dot: dot3(&dx, &dz), flex_squared: norm2(&dz) }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DiagonalRateReport<T> {
    pub diagonal: SmallDiagonal,
    pub rate: PairRate<T>,
    /// Zero base length, or coinciding apexes; excluded from witness search.
    pub degenerate: bool,
}

pub fn diagonal_rates<T: Scalar>(
    surface: &CombinatorialSurface,
    embedding: &Embedding<T>,
    flex: &[[T; 3]],
) -> Vec<DiagonalRateReport<T>> {
    surface
        .small_diagonals()
        .into_iter()
        .map(|d| {
            let rate = raw_pair_rate(embedding, flex, d.apexes);
            let degenerate = d.degenerate || rate.d0_squared.is_exactly_zero();
            DiagonalRateReport { diagonal: d, rate, degenerate }
        })
        .collect()
}

/// First non-degenerate small diagonal whose length changes at exact first
/// order. In floating mode `tol` bounds |dot| relative to the scale.
pub fn diagonal_witness<T: Scalar>(reports: &[DiagonalRateReport<T>], tol: &T) -> Option<DiagonalRateReport<T>> {
    reports
        .iter()
        .find(|r| {
            !r.degenerate
                && r.rate.dot.abs() > tol.clone() * (r.rate.d0_squared.clone() + r.rate.flex_squared.clone())
        })
        .cloned()
}
