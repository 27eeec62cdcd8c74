//! First-order rigidity: the linear system `(x_i - x_j)·(Z_i - Z_j) = 0`
//! over all edges, trivial motions, and the flex space modulo them.

use nalgebra::DMatrix;
use num_bigint::BigInt;
use serde::Serialize;

use crate::embedding::Embedding;
use crate::error::RigidityError;
use crate::linalg::{echelon_exact, spectrum};
use crate::numeric::{cross3, dot3, sub3, zero3, Rational, Scalar};
use crate::surface::CombinatorialSurface;

pub const DEFAULT_TOLERANCE: f64 = 1e-10;

/// One row per edge (lexicographic), `3n` columns in vertex blocks.
#[derive(Debug, Clone, PartialEq)]
pub struct RigidityMatrix<T> {
    rows: Vec<Vec<T>>,
    ncols: usize,
}

impl<T: Scalar> RigidityMatrix<T> {
    pub fn rows(&self) -> &[Vec<T>] {
        &self.rows
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn apply(&self, v: &[T]) -> Vec<T> {
        self.rows
            .iter()
            .map(|row| {
                row.iter().zip(v).fold(T::zero(), |acc, (a, b)| acc + a.clone() * b.clone())
            })
            .collect()
    }
}

impl RigidityMatrix<f64> {
    pub fn to_dmatrix(&self) -> DMatrix<f64> {
        DMatrix::from_fn(self.rows.len(), self.ncols, |i, j| self.rows[i][j])
    }
}

fn check_dims<T>(surface: &CombinatorialSurface, coords: &[T]) -> Result<(), RigidityError> {
    if coords.len() != surface.vertex_count() {
        return Err(RigidityError::DimensionMismatch {
            expected: surface.vertex_count(),
            got: coords.len(),
        });
    }
    Ok(())
}

pub fn rigidity_matrix<T: Scalar>(
    surface: &CombinatorialSurface,
    embedding: &Embedding<T>,
) -> Result<RigidityMatrix<T>, RigidityError> {
    check_dims(surface, embedding.coords())?;
    let ncols = 3 * surface.vertex_count();
    let rows = surface
        .edges()
        .iter()
        .map(|&(i, j)| {
            let d = sub3(embedding.point(i), embedding.point(j));
            let mut row = vec![T::zero(); ncols];
            for k in 0..3 {
                row[3 * i + k] = d[k].clone();
                row[3 * j + k] = -d[k].clone();
            }
            row
        })
        .collect();
    Ok(RigidityMatrix { rows, ncols })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum FlexKind {
    Trivial,
    Nontrivial,
}

#[derive(Debug, Clone, PartialEq)]
pub struct InfinitesimalFlex<T> {
    pub vectors: Vec<[T; 3]>,
    pub residual: T,
    pub kind: FlexKind,
}

impl<T: Scalar> InfinitesimalFlex<T> {
    pub fn flat(&self) -> Vec<T> {
        flatten(&self.vectors)
    }
}

pub fn flatten<T: Clone>(v: &[[T; 3]]) -> Vec<T> {
    v.iter().flat_map(|p| p.iter().cloned()).collect()
}

pub fn unflatten<T: Clone>(v: &[T]) -> Vec<[T; 3]> {
    v.chunks(3).map(|c| [c[0].clone(), c[1].clone(), c[2].clone()]).collect()
}

/// Max over edges of |(x_i - x_j)·(Z_i - Z_j)|.
pub fn flex_residual<T: Scalar>(
    surface: &CombinatorialSurface,
    embedding: &Embedding<T>,
    flex: &[[T; 3]],
) -> Result<T, RigidityError> {
    check_dims(surface, embedding.coords())?;
    check_dims(surface, flex)?;
    Ok(surface
        .edges()
        .iter()
        .map(|&(i, j)| {
            dot3(&sub3(embedding.point(i), embedding.point(j)), &sub3(&flex[i], &flex[j])).abs()
        })
        .fold(T::zero(), |a, b| if b > a { b } else { a }))
}

/// The six rigid-motion generators: translations along x, y, z, then
/// infinitesimal rotations `e_axis × x_i`.
pub fn trivial_generators<T: Scalar>(embedding: &Embedding<T>) -> Vec<Vec<[T; 3]>> {
    let mut axes = Vec::new();
    for a in 0..3 {
        let mut e = zero3::<T>();
        e[a] = T::one();
        axes.push(e);
    }
    let mut out: Vec<Vec<[T; 3]>> =
        axes.iter().map(|e| vec![e.clone(); embedding.len()]).collect();
    for e in &axes {
        out.push(embedding.coords().iter().map(|p| cross3(e, p)).collect());
    }
    out
}

/// Basis of the rigid-motion space for the actual point set. Exact mode keeps
/// the first independent generators; floating mode returns an orthonormal
/// basis.
pub fn trivial_motion_space_exact(embedding: &Embedding<Rational>) -> Vec<InfinitesimalFlex<Rational>> {
    let mut chosen: Vec<Vec<Rational>> = Vec::new();
    let mut out = Vec::new();
    for g in trivial_generators(embedding) {
        let flat = flatten(&g);
        let mut trial = chosen.clone();
        trial.push(flat.clone());
        if echelon_exact(&trial, flat.len()).rank() == trial.len() {
            chosen = trial;
            out.push(InfinitesimalFlex { vectors: g, residual: Rational::from_int(0), kind: FlexKind::Trivial });
        }
    }
    out
}

pub fn trivial_motion_space_floating(
    embedding: &Embedding<f64>,
    tolerance: f64,
) -> Vec<InfinitesimalFlex<f64>> {
    let basis = trivial_basis_f64(embedding, tolerance);
    (0..basis.ncols())
        .map(|k| InfinitesimalFlex {
            vectors: unflatten(basis.column(k).as_slice()),
            residual: 0.0,
            kind: FlexKind::Trivial,
        })
        .collect()
}

fn trivial_basis_f64(embedding: &Embedding<f64>, tolerance: f64) -> DMatrix<f64> {
    let gens = trivial_generators(embedding);
    let m = 3 * embedding.len();
    let g = DMatrix::from_fn(gens.len(), m, |i, j| gens[i][j / 3][j % 3]);
    let s = spectrum(&g);
    let smax = s.singular_values.first().copied().unwrap_or(0.0);
    let dim = s.singular_values.iter().filter(|&&v| v > tolerance * smax && smax > 0.0).count();
    s.right.columns(0, dim).into_owned()
}

#[derive(Debug, Clone, PartialEq)]
pub struct FlexAnalysis<T> {
    pub rank: usize,
    pub kernel_dim: usize,
    pub trivial_dim: usize,
    pub flex_dim: usize,
    pub nontrivial_basis: Vec<InfinitesimalFlex<T>>,
    pub tolerance_used: Option<f64>,
    pub singular_values: Option<Vec<f64>>,
}

impl<T> FlexAnalysis<T> {
    pub fn is_flexible(&self) -> bool {
        self.flex_dim > 0
    }
}

/// Exact analysis: fraction-free rank, integer kernel, complement of the
/// trivial space chosen by pivoting kernel vectors against the generators.
pub fn flex_analysis_exact(
    surface: &CombinatorialSurface,
    embedding: &Embedding<Rational>,
) -> Result<FlexAnalysis<Rational>, RigidityError> {
    let r = rigidity_matrix(surface, embedding)?;
    let ech = echelon_exact(r.rows(), r.ncols());
    let rank = ech.rank();
    let kernel = ech.kernel();
    let trivial = trivial_motion_space_exact(embedding);
    let mut span: Vec<Vec<Rational>> = trivial.iter().map(|f| f.flat()).collect();
    let mut basis = Vec::new();
    for k in &kernel {
        let v: Vec<Rational> = k.iter().map(|x| Rational::from_integer(x.clone())).collect();
        let mut trial = span.clone();
        trial.push(v.clone());
        if echelon_exact(&trial, r.ncols()).rank() == trial.len() {
            span = trial;
            let vectors = unflatten(&v);
            let residual = flex_residual(surface, embedding, &vectors)?;
            basis.push(InfinitesimalFlex { vectors, residual, kind: FlexKind::Nontrivial });
        }
    }
    Ok(FlexAnalysis {
        rank,
        kernel_dim: kernel.len(),
        trivial_dim: trivial.len(),
        flex_dim: basis.len(),
        nontrivial_basis: basis,
        tolerance_used: None,
        singular_values: None,
    })
}

/// Floating analysis by SVD with relative threshold `tolerance·σ_max`.
pub fn flex_analysis_floating(
    surface: &CombinatorialSurface,
    embedding: &Embedding<f64>,
    tolerance: f64,
) -> Result<FlexAnalysis<f64>, RigidityError> {
    if !(tolerance > 0.0) {
        return Err(RigidityError::BadTolerance);
    }
    let r = rigidity_matrix(surface, embedding)?;
    let m = r.to_dmatrix();
    let s = spectrum(&m);
    let smax = s.singular_values.first().copied().unwrap_or(0.0);
    let threshold = tolerance * smax;
    for &v in &s.singular_values {
        if v >= threshold / 10.0 && v <= threshold * 10.0 {
            return Err(RigidityError::ToleranceAmbiguous { value: v, threshold });
        }
    }
    let rank = s.singular_values.iter().filter(|&&v| v > threshold).count();
    let kernel = s.right.columns(rank, r.ncols() - rank).into_owned();
    let trivial = trivial_basis_f64(embedding, tolerance);
    let projected = &kernel - &trivial * (trivial.transpose() * &kernel);
    let flex_dim = kernel.ncols().saturating_sub(trivial.ncols());
    let mut basis = Vec::new();
    if flex_dim > 0 {
        // left singular vectors of the projected kernel span its column space
        let svd = projected.clone().svd(true, false);
        let u = svd.u.expect("requested U");
        let mut order: Vec<usize> = (0..svd.singular_values.len()).collect();
        order.sort_by(|&a, &b| svd.singular_values[b].total_cmp(&svd.singular_values[a]));
        for &i in order.iter().take(flex_dim) {
            let mut col: Vec<f64> = u.column(i).iter().copied().collect();
            if let Some(first) = col.iter().find(|v| v.abs() > 1e-12) {
                if *first < 0.0 {
                    col.iter_mut().for_each(|v| *v = -*v);
                }
            }
            let vectors = unflatten(&col);
            let residual = flex_residual(surface, embedding, &vectors)?;
            basis.push(InfinitesimalFlex { vectors, residual, kind: FlexKind::Nontrivial });
        }
    }
    Ok(FlexAnalysis {
        rank,
        kernel_dim: kernel.ncols(),
        trivial_dim: trivial.ncols(),
        flex_dim,
        nontrivial_basis: basis,
        tolerance_used: Some(tolerance),
        singular_values: Some(s.singular_values),
    })
}

/// Whether an exact vector field is a rigid motion of the embedding.
pub fn is_trivial_exact(embedding: &Embedding<Rational>, field: &[[Rational; 3]]) -> bool {
    let trivial = trivial_motion_space_exact(embedding);
    let mut rows: Vec<Vec<Rational>> = trivial.iter().map(|f| f.flat()).collect();
    let base = echelon_exact(&rows, 3 * embedding.len()).rank();
    rows.push(flatten(field));
    echelon_exact(&rows, 3 * embedding.len()).rank() == base
}

/// Integer entries of an exact flex, for serialization.
pub fn integer_entries(flex: &InfinitesimalFlex<Rational>) -> Option<Vec<BigInt>> {
    flex.flat().iter().map(|v| v.is_integer().then(|| v.to_integer())).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::int;
    use crate::surface::catalog::OCTAHEDRON;
    use num_traits::Zero;

    fn regular() -> (CombinatorialSurface, Embedding<Rational>) {
        let s = CombinatorialSurface::new(6, OCTAHEDRON.to_vec()).unwrap();
        let p = |x, y, z| [int(x), int(y), int(z)];
        let e = Embedding::new(vec![
            p(1, 0, 0),
            p(0, 1, 0),
            p(-1, 0, 0),
            p(0, -1, 0),
            p(0, 0, 1),
            p(0, 0, -1),
        ]);
        (s, e)
    }

    #[test]
    fn matrix_layout() {
        let (s, e) = regular();
        let r = rigidity_matrix(&s, &e).unwrap();
        assert_eq!((r.nrows(), r.ncols()), (12, 18));
        // first edge (0,1): (1,0,0)-(0,1,0)
        let row = &r.rows()[0];
        assert_eq!(&row[0..3], &[int(1), int(-1), int(0)]);
        assert_eq!(&row[3..6], &[int(-1), int(1), int(0)]);
        assert!(r.rows().iter().all(|row| row.iter().filter(|v| !v.is_zero()).count() <= 6));
    }

    #[test]
    fn regular_octahedron_is_rigid() {
        let (s, e) = regular();
        let a = flex_analysis_exact(&s, &e).unwrap();
        assert_eq!((a.rank, a.trivial_dim, a.flex_dim), (12, 6, 0));
        let f = flex_analysis_floating(&s, &e.to_floating(), DEFAULT_TOLERANCE).unwrap();
        assert_eq!((f.rank, f.trivial_dim, f.flex_dim), (12, 6, 0));
    }

    #[test]
    fn degenerate_point_set_trivial_dim() {
        let e = Embedding::new(vec![[int(0), int(0), int(0)]; 4]);
        assert_eq!(trivial_motion_space_exact(&e).len(), 3);
        let e = Embedding::new((0..4).map(|i| [int(i), int(0), int(0)]).collect());
        assert_eq!(trivial_motion_space_exact(&e).len(), 5);
    }

    #[test]
    fn trivial_motions_have_zero_residual() {
        let (s, e) = regular();
        for g in trivial_generators(&e) {
            assert!(flex_residual(&s, &e, &g).unwrap().is_zero());
        }
    }

    #[test]
    fn tolerance_errors() {
        let (s, e) = regular();
        assert_eq!(
            flex_analysis_floating(&s, &e.to_floating(), 0.0),
            Err(RigidityError::BadTolerance)
        );
        // regular octahedron singular values are O(1); a huge tolerance lands on one
        let r = flex_analysis_floating(&s, &e.to_floating(), 0.5);
        assert!(matches!(r, Err(RigidityError::ToleranceAmbiguous { .. })));
    }
}
