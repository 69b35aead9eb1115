//! Level sets of the distance to a point, and the growth of their length.

use std::collections::HashMap;

use rayon::prelude::*;
use serde::Serialize;

use super::{Mesh, MeshError};
use crate::rational::{rational_round, Rational};
use crate::regression::fit_power_law;
use crate::scalar::{dist, Real};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LinkLength<T> {
    pub length: T,
    pub components: usize,
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn find(&mut self, mut x: usize) -> usize {
        while self.0[x] != x {
            self.0[x] = self.0[self.0[x]];
            x = self.0[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.0[ra] = rb;
        }
    }
}

/// Point where the segment `a → b` crosses the sphere `|x - c| = r`.
fn crossing<T: Real>(a: &[T], b: &[T], c: &[T], r: T, a_inside: bool) -> Vec<T> {
    let d: Vec<T> = a.iter().zip(b).map(|(&x, &y)| y - x).collect();
    let ac: Vec<T> = a.iter().zip(c).map(|(&x, &y)| x - y).collect();
    let qa: T = d.iter().map(|&x| x * x).sum();
    let qb: T = T::lit(2.0) * d.iter().zip(&ac).map(|(&x, &y)| x * y).sum::<T>();
    let qc: T = ac.iter().map(|&x| x * x).sum::<T>() - r * r;
    let disc = (qb * qb - T::lit(4.0) * qa * qc).max(T::zero()).sqrt();
    let t = if a_inside { (-qb + disc) / (T::lit(2.0) * qa) } else { (-qb - disc) / (T::lit(2.0) * qa) };
    let t = t.max(T::zero()).min(T::one());
    a.iter().zip(&d).map(|(&x, &y)| x + t * y).collect()
}

/// Length and number of components of the polyline `{|x - centre| = r}`
/// traced across the triangles. Vertices lying on the sphere up to a
/// relative `1e-12` are pushed outward.
pub fn link_length<T: Real>(mesh: &Mesh<T>, centre: &[T], r: T) -> Result<LinkLength<T>, MeshError> {
    if centre.len() != mesh.dim() {
        return Err(MeshError::BadParams(format!("centre has {} coordinates, mesh has {}", centre.len(), mesh.dim())));
    }
    if !(r > T::zero()) {
        return Err(MeshError::BadParams("radius must be positive".into()));
    }
    let jitter = T::lit(1e-12) * r;
    let inside: Vec<bool> = mesh
        .vertices()
        .map(|v| {
            let f = dist(v, centre) - r;
            f < T::zero() && f.abs() > jitter
        })
        .collect();

    let mut keys: HashMap<(u32, u32), usize> = HashMap::new();
    let mut segments: Vec<(usize, usize, T)> = Vec::new();
    for tri in mesh.triangles() {
        let mut ends: Vec<((u32, u32), Vec<T>)> = Vec::with_capacity(2);
        for k in 0..3 {
            let (a, b) = (tri[k], tri[(k + 1) % 3]);
            if inside[a as usize] != inside[b as usize] {
                let p = crossing(mesh.vertex(a as usize), mesh.vertex(b as usize), centre, r, inside[a as usize]);
                ends.push(((a.min(b), a.max(b)), p));
            }
        }
        if let [(ka, pa), (kb, pb)] = ends.as_slice() {
            let next = keys.len();
            let ia = *keys.entry(*ka).or_insert(next);
            let next = keys.len();
            let ib = *keys.entry(*kb).or_insert(next);
            segments.push((ia, ib, dist(pa, pb)));
        }
    }
    if segments.is_empty() {
        return Err(MeshError::LevelSetEmpty { r: r.to_f64_lossy() });
    }
    let mut uf = UnionFind((0..keys.len()).collect());
    let mut length = T::zero();
    for &(a, b, l) in &segments {
        uf.union(a, b);
        length = length + l;
    }
    let components = (0..keys.len()).filter(|&k| uf.find(k) == k).count();
    Ok(LinkLength { length, components })
}

#[derive(Debug, Clone, Serialize)]
pub struct GrowthEstimate<T> {
    pub slope: T,
    /// Absent when no rational with denominator ≤ 16 lies within 0.1.
    pub rounded: Option<Rational>,
    pub residual: T,
    pub radii_used: Vec<T>,
    pub lengths: Vec<T>,
}

/// Log-log slope of link length against radius.
pub fn growth_exponent<T: Real>(mesh: &Mesh<T>, centre: &[T], radii: &[T]) -> Result<GrowthEstimate<T>, MeshError> {
    if radii.len() < 6 {
        return Err(MeshError::TooFewRadii(radii.len()));
    }
    let increasing = radii.windows(2).all(|w| w[1] > w[0]);
    let decreasing = radii.windows(2).all(|w| w[1] < w[0]);
    if !(increasing || decreasing) {
        return Err(MeshError::NonMonotoneRadii);
    }
    let lengths: Vec<T> = radii
        .par_iter()
        .map(|&r| link_length(mesh, centre, r).map(|l| l.length))
        .collect::<Result<_, _>>()?;
    let fit = fit_power_law(radii, &lengths)
        .ok_or_else(|| MeshError::BadParams("radii must be positive with non-degenerate lengths".into()))?;
    Ok(GrowthEstimate {
        slope: fit.slope,
        rounded: rational_round(fit.slope, 16, T::lit(0.1)).ok(),
        residual: fit.rms_residual,
        radii_used: radii.to_vec(),
        lengths,
    })
}
