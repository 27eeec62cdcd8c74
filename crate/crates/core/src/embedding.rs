use serde::{Deserialize, Serialize};

use crate::numeric::{norm2, rational_from_f64, sub3, Rational, Scalar};
use crate::surface::CombinatorialSurface;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Representation {
    Exact,
    Floating,
}

/// Vertex coordinates, uniformly exact or uniformly floating.
#[derive(Debug, Clone, PartialEq)]
pub struct Embedding<T> {
    coords: Vec<[T; 3]>,
}

impl<T: Scalar> Embedding<T> {
    pub fn new(coords: Vec<[T; 3]>) -> Self {
        Self { coords }
    }

    pub fn coords(&self) -> &[[T; 3]] {
        &self.coords
    }

    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn point(&self, i: usize) -> &[T; 3] {
        &self.coords[i]
    }

    pub fn squared_distance(&self, a: usize, b: usize) -> T {
        norm2(&sub3(&self.coords[a], &self.coords[b]))
    }

    /// Squared edge lengths in the surface's edge order.
    pub fn squared_edge_lengths(&self, surface: &CombinatorialSurface) -> Vec<T> {
        surface.edges().iter().map(|&(a, b)| self.squared_distance(a, b)).collect()
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(&T) -> U) -> Embedding<U> {
        Embedding { coords: self.coords.iter().map(|p| [f(&p[0]), f(&p[1]), f(&p[2])]).collect() }
    }

    pub fn to_floating(&self) -> Embedding<f64> {
        self.map(|v| v.as_f64())
    }

    /// True when all points lie in one plane (or on a line, or coincide).
    pub fn is_coplanar(&self) -> bool {
        coplanar(&self.coords, T::from_int(0))
    }
}

impl Embedding<f64> {
    /// Exact binary-to-rational promotion; fails on non-finite input.
    pub fn promote_exact(&self) -> Option<Embedding<Rational>> {
        let mut coords = Vec::with_capacity(self.coords.len());
        for p in &self.coords {
            coords.push([
                rational_from_f64(p[0])?,
                rational_from_f64(p[1])?,
                rational_from_f64(p[2])?,
            ]);
        }
        Some(Embedding { coords })
    }

    pub fn is_coplanar_tol(&self, tol: f64) -> bool {
        coplanar(&self.coords, tol)
    }
}

fn coplanar<T: Scalar>(pts: &[[T; 3]], tol: T) -> bool {
    use crate::numeric::{cross3, dot3};
    if pts.len() < 4 {
        return true;
    }
    let o = &pts[0];
    let rel: Vec<[T; 3]> = pts.iter().map(|p| sub3(p, o)).collect();
    let scale = rel.iter().map(norm2).fold(T::from_int(0), |a, b| if b > a { b } else { a });
    if scale.is_zero() {
        return true;
    }
    // find a nondegenerate pair to define the plane normal
    let mut normal = None;
    'outer: for i in 1..rel.len() {
        for j in i + 1..rel.len() {
            let c = cross3(&rel[i], &rel[j]);
            if norm2(&c) > tol.clone() * scale.clone() * scale.clone() {
                normal = Some(c);
                break 'outer;
            }
        }
    }
    let Some(nrm) = normal else { return true };
    let nn = norm2(&nrm);
    rel.iter().all(|r| {
        let d = dot3(&nrm, r);
        d.clone() * d <= tol.clone() * nn.clone() * scale.clone()
    })
}

/// Either representation, as produced by loaders and generators.
#[derive(Debug, Clone, PartialEq)]
pub enum AnyEmbedding {
    Exact(Embedding<Rational>),
    Floating(Embedding<f64>),
}

impl AnyEmbedding {
    pub fn representation(&self) -> Representation {
        match self {
            AnyEmbedding::Exact(_) => Representation::Exact,
            AnyEmbedding::Floating(_) => Representation::Floating,
        }
    }

    pub fn len(&self) -> usize {
        match self {
            AnyEmbedding::Exact(e) => e.len(),
            AnyEmbedding::Floating(e) => e.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn to_floating(&self) -> Embedding<f64> {
        match self {
            AnyEmbedding::Exact(e) => e.to_floating(),
            AnyEmbedding::Floating(e) => e.clone(),
        }
    }

    pub fn to_exact(&self) -> Option<Embedding<Rational>> {
        match self {
            AnyEmbedding::Exact(e) => Some(e.clone()),
            AnyEmbedding::Floating(e) => e.promote_exact(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::int;

    #[test]
    fn coplanarity() {
        let flat = Embedding::new(vec![
            [int(0), int(0), int(0)],
            [int(1), int(0), int(0)],
            [int(0), int(1), int(0)],
            [int(3), int(5), int(0)],
        ]);
        assert!(flat.is_coplanar());
        let mut c = flat.coords().to_vec();
        c[3][2] = int(1);
        assert!(!Embedding::new(c).is_coplanar());
    }
}
