//! Triangulated surfaces in `R^m` and the numeric estimators built on them.

mod cone;
mod generate;
mod geodesic;
mod level_set;
mod off;
mod topology;

use std::collections::{BTreeMap, HashMap};

use thiserror::Error;

use crate::scalar::Real;

pub use cone::{cone_directions, cone_directions_of_curve, cone_directions_of_points, ConeSummary};
pub use generate::{generate_surface, Family, Resolution};
pub(crate) use generate::{graded_axis, mesh_from_f64, tensor_surface, veronese, DoubledDomain};
pub use geodesic::{inner_distance, lne_constant, GeodesicGraph};
pub use level_set::{growth_exponent, link_length, GrowthEstimate, LinkLength};
pub use off::marks_path;
pub use topology::{mesh_topology, MeshTopology};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MeshError {
    #[error("bad parameters: {0}")]
    BadParams(String),
    #[error("triangle {triangle} references vertex {index}, but the mesh has {count} vertices")]
    IndexOutOfRange { triangle: usize, index: u32, count: usize },
    #[error("triangle {0} repeats a vertex")]
    DegenerateTriangle(usize),
    #[error("coordinate buffer length is not a multiple of the dimension")]
    BadCoordinates,
    #[error("edge ({a}, {b}) is shared by {count} triangles")]
    NonManifold { a: u32, b: u32, count: usize },
    #[error("mesh is disconnected")]
    Disconnected,
    #[error("level set at radius {r} is empty")]
    LevelSetEmpty { r: f64 },
    #[error("need at least 6 radii, got {0}")]
    TooFewRadii(usize),
    #[error("radii must be strictly monotone")]
    NonMonotoneRadii,
    #[error("only {found} samples beyond the radius; need {needed}")]
    TooFewFarSamples { found: usize, needed: usize },
    #[error("pair budget {0} is below the minimum of 1000")]
    PairBudget(usize),
    #[error("OFF line {line}: {message}")]
    Off { line: usize, message: String },
    #[error("marks file: {0}")]
    Marks(String),
    #[error("{0}")]
    Io(String),
}

/// Vertex coordinates are stored flat, `dim` values per vertex.
#[derive(Debug, Clone, PartialEq)]
pub struct Mesh<T> {
    dim: usize,
    coords: Vec<T>,
    triangles: Vec<[u32; 3]>,
    marks: BTreeMap<usize, String>,
}

impl<T: Real> Mesh<T> {
    pub fn new(dim: usize, coords: Vec<T>, triangles: Vec<[u32; 3]>) -> Result<Self, MeshError> {
        if dim == 0 || coords.len() % dim != 0 {
            return Err(MeshError::BadCoordinates);
        }
        let count = coords.len() / dim;
        for (t, tri) in triangles.iter().enumerate() {
            if let Some(&index) = tri.iter().find(|&&i| i as usize >= count) {
                return Err(MeshError::IndexOutOfRange { triangle: t, index, count });
            }
            if tri[0] == tri[1] || tri[1] == tri[2] || tri[0] == tri[2] {
                return Err(MeshError::DegenerateTriangle(t));
            }
        }
        Ok(Mesh { dim, coords, triangles, marks: BTreeMap::new() })
    }

    pub fn from_points(points: &[Vec<T>], triangles: Vec<[u32; 3]>) -> Result<Self, MeshError> {
        let dim = points.first().map_or(3, Vec::len);
        if points.iter().any(|p| p.len() != dim) {
            return Err(MeshError::BadCoordinates);
        }
        Self::new(dim, points.concat(), triangles)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn vertex_count(&self) -> usize {
        self.coords.len() / self.dim
    }

    pub fn vertex(&self, i: usize) -> &[T] {
        &self.coords[i * self.dim..(i + 1) * self.dim]
    }

    pub fn vertices(&self) -> std::slice::ChunksExact<'_, T> {
        self.coords.chunks_exact(self.dim)
    }

    pub fn triangles(&self) -> &[[u32; 3]] {
        &self.triangles
    }

    pub fn marks(&self) -> &BTreeMap<usize, String> {
        &self.marks
    }

    pub fn mark(&self, vertex: usize) -> Option<&str> {
        self.marks.get(&vertex).map(String::as_str)
    }

    pub fn set_mark(&mut self, vertex: usize, tag: impl Into<String>) {
        self.marks.insert(vertex, tag.into());
    }

    pub fn with_marks(mut self, marks: BTreeMap<usize, String>) -> Result<Self, MeshError> {
        if let Some((&v, _)) = marks.iter().find(|(&v, _)| v >= self.vertex_count()) {
            return Err(MeshError::Marks(format!("vertex {v} out of range")));
        }
        self.marks = marks;
        Ok(self)
    }

    /// Vertices carrying the given tag.
    pub fn marked(&self, tag: &str) -> Vec<usize> {
        self.marks.iter().filter(|(_, t)| *t == tag).map(|(&v, _)| v).collect()
    }

    /// Apply `f` to every vertex; the combinatorics and marks are kept.
    pub fn map_vertices(&self, dim: usize, f: impl Fn(&[T]) -> Vec<T>) -> Self {
        let coords: Vec<T> = self.vertices().flat_map(|v| {
            let p = f(v);
            debug_assert_eq!(p.len(), dim);
            p
        }).collect();
        Mesh { dim, coords, triangles: self.triangles.clone(), marks: self.marks.clone() }
    }

    /// Keep the flagged vertices and the triangles spanned by them. Returns
    /// the compacted mesh and the old-to-new index map.
    pub fn retain_vertices(&self, keep: &[bool]) -> (Self, Vec<Option<u32>>) {
        let mut map = vec![None; self.vertex_count()];
        let mut coords = Vec::new();
        let mut next = 0u32;
        for (i, v) in self.vertices().enumerate() {
            if keep[i] {
                map[i] = Some(next);
                coords.extend_from_slice(v);
                next += 1;
            }
        }
        let triangles = self
            .triangles
            .iter()
            .filter_map(|t| Some([map[t[0] as usize]?, map[t[1] as usize]?, map[t[2] as usize]?]))
            .collect();
        let marks = self
            .marks
            .iter()
            .filter_map(|(&v, tag)| map[v].map(|n| (n as usize, tag.clone())))
            .collect();
        (Mesh { dim: self.dim, coords, triangles, marks }, map)
    }

    /// Keep only the given triangles and the vertices they use.
    pub fn retain_triangles(&self, keep: impl Fn(&[u32; 3]) -> bool) -> (Self, Vec<Option<u32>>) {
        let triangles: Vec<[u32; 3]> = self.triangles.iter().copied().filter(|t| keep(t)).collect();
        let mut used = vec![false; self.vertex_count()];
        for t in &triangles {
            for &i in t {
                used[i as usize] = true;
            }
        }
        let pruned = Mesh { triangles, ..self.clone() };
        pruned.retain_vertices(&used)
    }

    /// One round of midpoint subdivision: each triangle becomes four.
    pub fn subdivided(&self) -> Self {
        let mut coords = self.coords.clone();
        let mut mid: HashMap<(u32, u32), u32> = HashMap::new();
        let mut next = self.vertex_count() as u32;
        let half = T::lit(0.5);
        let mut midpoint = |a: u32, b: u32, coords: &mut Vec<T>| -> u32 {
            let key = (a.min(b), a.max(b));
            *mid.entry(key).or_insert_with(|| {
                let (pa, pb) = (a as usize * self.dim, b as usize * self.dim);
                for k in 0..self.dim {
                    let v = (self.coords[pa + k] + self.coords[pb + k]) * half;
                    coords.push(v);
                }
                next += 1;
                next - 1
            })
        };
        let mut triangles = Vec::with_capacity(self.triangles.len() * 4);
        for &[a, b, c] in &self.triangles {
            let ab = midpoint(a, b, &mut coords);
            let bc = midpoint(b, c, &mut coords);
            let ca = midpoint(c, a, &mut coords);
            triangles.extend([[a, ab, ca], [ab, b, bc], [ca, bc, c], [ab, bc, ca]]);
        }
        Mesh { dim: self.dim, coords, triangles, marks: self.marks.clone() }
    }

    /// Relabel vertices by `perm` (old index → new index) and reorder
    /// triangles by `tri_order` (new position → old triangle).
    pub fn permuted(&self, perm: &[usize], tri_order: &[usize]) -> Self {
        let mut coords = vec![T::zero(); self.coords.len()];
        for (old, &new) in perm.iter().enumerate() {
            coords[new * self.dim..(new + 1) * self.dim].copy_from_slice(self.vertex(old));
        }
        let triangles = tri_order
            .iter()
            .map(|&t| self.triangles[t].map(|i| perm[i as usize] as u32))
            .collect();
        let marks = self.marks.iter().map(|(&v, tag)| (perm[v], tag.clone())).collect();
        Mesh { dim: self.dim, coords, triangles, marks }
    }

    /// Diagonal of the axis-aligned bounding box.
    pub fn bounding_diagonal(&self) -> T {
        let mut lo = vec![T::infinity(); self.dim];
        let mut hi = vec![T::neg_infinity(); self.dim];
        for v in self.vertices() {
            for k in 0..self.dim {
                lo[k] = lo[k].min(v[k]);
                hi[k] = hi[k].max(v[k]);
            }
        }
        if self.vertex_count() == 0 {
            return T::zero();
        }
        crate::scalar::dist(&lo, &hi)
    }

    pub fn cast<U: Real>(&self) -> Mesh<U> {
        Mesh {
            dim: self.dim,
            coords: self.coords.iter().map(|&x| U::lit(x.to_f64_lossy())).collect(),
            triangles: self.triangles.clone(),
            marks: self.marks.clone(),
        }
    }
}
