//! Piecewise-linear paths on `[0, 1]`.

use serde::{Deserialize, Serialize};

/// A continuous path on `[0, 1]` given by its values at the mesh points
/// `k/m`, `k = 0..=m`, and linear in between.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridPath {
    vertices: Vec<f64>,
}

impl GridPath {
    /// Panics if fewer than two vertices are given (a path needs a segment).
    pub fn from_vertices(vertices: Vec<f64>) -> Self {
        assert!(
            vertices.len() >= 2,
            "a grid path needs at least one segment"
        );
        GridPath { vertices }
    }

    pub fn zero(mesh: usize) -> Self {
        GridPath::from_vertices(vec![0.0; mesh + 1])
    }

    /// Number of segments `m`.
    pub fn mesh(&self) -> usize {
        self.vertices.len() - 1
    }

    pub fn vertices(&self) -> &[f64] {
        &self.vertices
    }

    pub(crate) fn vertices_mut(&mut self) -> &mut [f64] {
        &mut self.vertices
    }

    /// Value at `t ∈ [0, 1]`. Mesh points return the stored vertex exactly.
    pub fn eval(&self, t: f64) -> f64 {
        let m = self.mesh();
        let s = (t.clamp(0.0, 1.0)) * m as f64;
        let nearest = s.round();
        if (s - nearest).abs() <= 4.0 * f64::EPSILON * s.max(1.0) {
            return self.vertices[nearest as usize];
        }
        let k = (s.floor() as usize).min(m - 1);
        let lambda = s - k as f64;
        self.vertices[k] + lambda * (self.vertices[k + 1] - self.vertices[k])
    }

    /// `sup_t |x(t)|`, attained at a vertex.
    pub fn sup_norm(&self) -> f64 {
        self.vertices.iter().fold(0.0, |acc, v| acc.max(v.abs()))
    }

    /// `sup_t |x(t) − y(t)|` for two paths on the same mesh.
    pub fn sup_distance(&self, other: &GridPath) -> f64 {
        assert_eq!(
            self.mesh(),
            other.mesh(),
            "sup distance needs a common mesh"
        );
        self.vertices
            .iter()
            .zip(&other.vertices)
            .fold(0.0, |acc, (a, b)| acc.max((a - b).abs()))
    }

    /// The same polyline with every segment split into `factor` pieces.
    pub fn refine(&self, factor: usize) -> GridPath {
        assert!(factor >= 1);
        let m = self.mesh();
        let mut out = Vec::with_capacity(m * factor + 1);
        for k in 0..m {
            let (a, b) = (self.vertices[k], self.vertices[k + 1]);
            for j in 0..factor {
                let lambda = j as f64 / factor as f64;
                out.push(a + lambda * (b - a));
            }
        }
        out.push(self.vertices[m]);
        GridPath::from_vertices(out)
    }

    /// Vertex-wise `self + c·other`.
    pub fn add_scaled(&self, c: f64, other: &GridPath) -> GridPath {
        assert_eq!(self.mesh(), other.mesh(), "paths must share a mesh");
        GridPath::from_vertices(
            self.vertices
                .iter()
                .zip(&other.vertices)
                .map(|(a, b)| a + c * b)
                .collect(),
        )
    }
}
