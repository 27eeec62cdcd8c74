//! Combinatorics of closed oriented triangulated surfaces.
//!
//! Vertex indices are 0-based inside the crate. Files, reports and error
//! messages use 1-based indices; conversion happens at those boundaries.

use std::collections::{BTreeSet, HashMap};

use crate::error::SurfaceError;

pub type Edge = (usize, usize);

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CombinatorialSurface {
    n: usize,
    faces: Vec<[usize; 3]>,
    edges: Vec<Edge>,
    edge_index: HashMap<Edge, usize>,
    /// Face containing each directed edge (a -> b).
    directed: HashMap<Edge, usize>,
    genus: usize,
}

/// The diagonal joining the apexes of the two faces hinged on an edge.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SmallDiagonal {
    /// Hinge edge (i, j) with i < j.
    pub hinge: Edge,
    /// Apex of the face traversing i -> j, then apex of the face traversing j -> i.
    pub apexes: (usize, usize),
    pub is_also_edge: bool,
    /// Both faces share the same apex; such hinges carry no diagonal.
    pub degenerate: bool,
}

impl SmallDiagonal {
    /// Unordered apex pair, smaller index first.
    pub fn pair(&self) -> Edge {
        sorted_pair(self.apexes.0, self.apexes.1)
    }
}

pub fn sorted_pair(a: usize, b: usize) -> Edge {
    if a < b {
        (a, b)
    } else {
        (b, a)
    }
}

impl CombinatorialSurface {
    /// Builds and validates a surface from 0-based oriented triangles.
    pub fn new(n: usize, faces: Vec<[usize; 3]>) -> Result<Self, SurfaceError> {
        if n < 4 {
            return Err(SurfaceError::TooFewVertices(n));
        }
        if faces.len() < 4 {
            return Err(SurfaceError::TooFewFaces(faces.len()));
        }
        let mut seen_triples: HashMap<[usize; 3], usize> = HashMap::new();
        for (fi, f) in faces.iter().enumerate() {
            for &v in f {
                if v >= n {
                    return Err(SurfaceError::IndexOutOfRange { face: fi + 1, vertex: v + 1, n });
                }
            }
            if f[0] == f[1] || f[1] == f[2] || f[0] == f[2] {
                return Err(SurfaceError::DegenerateFace { face: fi + 1 });
            }
            let mut key = *f;
            key.sort_unstable();
            if let Some(&prev) = seen_triples.get(&key) {
                return Err(SurfaceError::DuplicateFace { first: prev + 1, second: fi + 1 });
            }
            seen_triples.insert(key, fi);
        }

        let mut occurrences: HashMap<Edge, Vec<(usize, bool)>> = HashMap::new();
        for (fi, f) in faces.iter().enumerate() {
            for k in 0..3 {
                let (a, b) = (f[k], f[(k + 1) % 3]);
                occurrences.entry(sorted_pair(a, b)).or_default().push((fi, a < b));
            }
        }
        let mut edges: Vec<Edge> = occurrences.keys().copied().collect();
        edges.sort_unstable();
        for e in &edges {
            let occ = &occurrences[e];
            if occ.len() != 2 {
                return Err(SurfaceError::NonManifoldEdge(e.0 + 1, e.1 + 1, occ.len()));
            }
            if occ[0].1 == occ[1].1 {
                return Err(SurfaceError::OrientationMismatch(e.0 + 1, e.1 + 1));
            }
        }

        let mut used = vec![false; n];
        let mut directed = HashMap::new();
        for (fi, f) in faces.iter().enumerate() {
            for k in 0..3 {
                used[f[k]] = true;
                directed.insert((f[k], f[(k + 1) % 3]), fi);
            }
        }
        if let Some(v) = used.iter().position(|u| !u) {
            return Err(SurfaceError::IsolatedVertex(v + 1));
        }

        // Each vertex link must be one cycle, otherwise Euler's relation
        // no longer determines the genus.
        let mut link_next: Vec<HashMap<usize, usize>> = vec![HashMap::new(); n];
        for f in &faces {
            for k in 0..3 {
                link_next[f[k]].insert(f[(k + 1) % 3], f[(k + 2) % 3]);
            }
        }
        for (v, next) in link_next.iter().enumerate() {
            let start = *next.keys().min().expect("vertex is used");
            let mut cur = start;
            let mut steps = 0;
            loop {
                cur = match next.get(&cur) {
                    Some(&c) => c,
                    None => return Err(SurfaceError::NonManifoldVertex(v + 1)),
                };
                steps += 1;
                if cur == start || steps > next.len() {
                    break;
                }
            }
            if cur != start || steps != next.len() {
                return Err(SurfaceError::NonManifoldVertex(v + 1));
            }
        }

        let chi = n as i64 - edges.len() as i64 + faces.len() as i64;
        if chi > 2 || chi % 2 != 0 {
            return Err(SurfaceError::BadEulerCharacteristic(chi));
        }
        let genus = ((2 - chi) / 2) as usize;
        let edge_index = edges.iter().enumerate().map(|(i, e)| (*e, i)).collect();
        Ok(Self { n, faces, edges, edge_index, directed, genus })
    }

    /// Builds a surface from 1-based triangles, as found in files.
    pub fn from_one_based(n: usize, faces: &[[usize; 3]]) -> Result<Self, SurfaceError> {
        let mut zero = Vec::with_capacity(faces.len());
        for (fi, f) in faces.iter().enumerate() {
            let mut g = [0; 3];
            for k in 0..3 {
                if f[k] == 0 || f[k] > n {
                    return Err(SurfaceError::IndexOutOfRange { face: fi + 1, vertex: f[k], n });
                }
                g[k] = f[k] - 1;
            }
            zero.push(g);
        }
        Self::new(n, zero)
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn faces(&self) -> &[[usize; 3]] {
        &self.faces
    }

    pub fn faces_one_based(&self) -> Vec<[usize; 3]> {
        self.faces.iter().map(|f| [f[0] + 1, f[1] + 1, f[2] + 1]).collect()
    }

    /// Edges in lexicographic order, each as (i, j) with i < j.
    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge_position(&self, a: usize, b: usize) -> Option<usize> {
        self.edge_index.get(&sorted_pair(a, b)).copied()
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.edge_position(a, b).is_some()
    }

    pub fn genus(&self) -> usize {
        self.genus
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.n as i64 - self.edges.len() as i64 + self.faces.len() as i64
    }

    /// Neighbours of `v` in the order of its oriented link cycle.
    pub fn link_cycle(&self, v: usize) -> Vec<usize> {
        let next: HashMap<usize, usize> = self
            .faces
            .iter()
            .filter_map(|f| {
                let k = f.iter().position(|&x| x == v)?;
                Some((f[(k + 1) % 3], f[(k + 2) % 3]))
            })
            .collect();
        let start = *next.keys().min().expect("vertex has a link");
        let mut out = vec![start];
        let mut cur = next[&start];
        while cur != start {
            out.push(cur);
            cur = next[&cur];
        }
        out
    }

    pub fn vertex_degree(&self, v: usize) -> usize {
        self.faces.iter().filter(|f| f.contains(&v)).count()
    }

    /// Unordered vertex pairs that are not edges, lexicographic.
    pub fn non_edges(&self) -> Vec<Edge> {
        let mut out = Vec::new();
        for a in 0..self.n {
            for b in a + 1..self.n {
                if !self.has_edge(a, b) {
                    out.push((a, b));
                }
            }
        }
        out
    }

    /// Same combinatorics with every face orientation reversed.
    pub fn reversed(&self) -> Self {
        let faces = self.faces.iter().map(|f| [f[0], f[2], f[1]]).collect();
        Self::new(self.n, faces).expect("reversal preserves validity")
    }

    /// One small diagonal per edge, keyed by hinge, in edge order.
    pub fn small_diagonals(&self) -> Vec<SmallDiagonal> {
        self.edges
            .iter()
            .map(|&(i, j)| {
                let apex = |a: usize, b: usize| {
                    let f = self.faces[self.directed[&(a, b)]];
                    *f.iter().find(|&&x| x != a && x != b).expect("triangle has an apex")
                };
                let k = apex(i, j);
                let l = apex(j, i);
                SmallDiagonal {
                    hinge: (i, j),
                    apexes: (k, l),
                    is_also_edge: k != l && self.has_edge(k, l),
                    degenerate: k == l,
                }
            })
            .collect()
    }

    /// Distinct apex pairs occurring as small diagonals.
    pub fn small_diagonal_pairs(&self) -> BTreeSet<Edge> {
        self.small_diagonals().iter().filter(|d| !d.degenerate).map(|d| d.pair()).collect()
    }
}

/// Standard face lists used by generators and tests (0-based).
pub mod catalog {
    /// Equator 0,1,2,3 (cycle), north pole 4, south pole 5.
    pub const OCTAHEDRON: [[usize; 3]; 8] = [
        [0, 1, 4],
        [1, 2, 4],
        [2, 3, 4],
        [3, 0, 4],
        [1, 0, 5],
        [2, 1, 5],
        [3, 2, 5],
        [0, 3, 5],
    ];

    pub const TETRAHEDRON: [[usize; 3]; 4] = [[0, 2, 1], [0, 1, 3], [1, 2, 3], [0, 3, 2]];

    /// Equator 0,1,2, north pole 3, south pole 4.
    pub const BIPYRAMID3: [[usize; 3]; 6] =
        [[0, 1, 3], [1, 2, 3], [2, 0, 3], [1, 0, 4], [2, 1, 4], [0, 2, 4]];

    /// Seven-vertex torus (Möbius/Császár combinatorics): triangles
    /// {i, i+1, i+3} and {i, i+3, i+2} mod 7.
    pub fn csaszar_torus() -> Vec<[usize; 3]> {
        (0..7)
            .flat_map(|i| [[i, (i + 1) % 7, (i + 3) % 7], [i, (i + 3) % 7, (i + 2) % 7]])
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::catalog::*;
    use super::*;

    fn octa() -> CombinatorialSurface {
        CombinatorialSurface::new(6, OCTAHEDRON.to_vec()).unwrap()
    }

    #[test]
    fn octahedron_counts() {
        let s = octa();
        assert_eq!(s.edges().len(), 12);
        assert_eq!(s.genus(), 0);
        assert_eq!(s.non_edges(), vec![(0, 2), (1, 3), (4, 5)]);
    }

    #[test]
    fn tetrahedron_diagonals_are_edges() {
        let s = CombinatorialSurface::new(4, TETRAHEDRON.to_vec()).unwrap();
        assert_eq!(s.edges().len(), 6);
        let d = s.small_diagonals();
        assert_eq!(d.len(), 6);
        assert!(d.iter().all(|d| d.is_also_edge && !d.degenerate));
    }

    #[test]
    fn torus_genus_one() {
        let s = CombinatorialSurface::new(7, csaszar_torus()).unwrap();
        assert_eq!(s.faces().len(), 14);
        assert_eq!(s.edges().len(), 21);
        assert_eq!(s.genus(), 1);
        // complete graph K7
        assert!(s.non_edges().is_empty());
    }

    #[test]
    fn octahedron_polar_hinge_joins_equator() {
        let s = octa();
        let d = s.small_diagonals();
        // hinge (0,4): faces [0,1,4] and [3,0,4]; apexes 1 and 3
        let h = d.iter().find(|d| d.hinge == (0, 4)).unwrap();
        assert_eq!(h.pair(), (1, 3));
        assert!(!h.is_also_edge);
        // equatorial hinge joins the poles
        let h = d.iter().find(|d| d.hinge == (0, 1)).unwrap();
        assert_eq!(h.pair(), (4, 5));
    }

    #[test]
    fn bipyramid_pole_pair_per_equatorial_hinge() {
        let s = CombinatorialSurface::new(5, BIPYRAMID3.to_vec()).unwrap();
        let d = s.small_diagonals();
        let poles: Vec<_> = d.iter().filter(|d| d.pair() == (3, 4)).map(|d| d.hinge).collect();
        assert_eq!(poles, vec![(0, 1), (0, 2), (1, 2)]);
    }

    #[test]
    fn rejects_bad_input() {
        let mut f = OCTAHEDRON.to_vec();
        f[0] = [0, 4, 1];
        assert!(matches!(
            CombinatorialSurface::new(6, f),
            Err(SurfaceError::OrientationMismatch(..))
        ));
        let mut f = OCTAHEDRON.to_vec();
        f[0] = [0, 0, 4];
        assert_eq!(CombinatorialSurface::new(6, f), Err(SurfaceError::DegenerateFace { face: 1 }));
        let mut f = OCTAHEDRON.to_vec();
        f.push([0, 1, 4]);
        assert!(matches!(CombinatorialSurface::new(6, f), Err(SurfaceError::DuplicateFace { .. })));
        let f = OCTAHEDRON[..7].to_vec();
        assert!(matches!(CombinatorialSurface::new(6, f), Err(SurfaceError::NonManifoldEdge(..))));
        assert_eq!(
            CombinatorialSurface::new(7, OCTAHEDRON.to_vec()),
            Err(SurfaceError::IsolatedVertex(7))
        );
        assert!(matches!(
            CombinatorialSurface::from_one_based(6, &[[1, 2, 7]; 4]),
            Err(SurfaceError::IndexOutOfRange { .. })
        ));
    }

    #[test]
    fn two_tetrahedra_sharing_a_vertex_rejected() {
        let mut faces = TETRAHEDRON.to_vec();
        for f in TETRAHEDRON {
            faces.push(f.map(|v| if v == 0 { 0 } else { v + 3 }));
        }
        assert_eq!(CombinatorialSurface::new(7, faces), Err(SurfaceError::NonManifoldVertex(1)));
    }

    #[test]
    fn link_cycle_follows_orientation() {
        assert_eq!(octa().link_cycle(4), vec![0, 1, 2, 3]);
        assert_eq!(octa().link_cycle(5), vec![0, 3, 2, 1]);
    }
}
