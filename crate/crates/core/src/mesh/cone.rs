//! Dimension of the tangent cone at infinity from far samples.
//!
//! Two point sets are covered by greedy ε-nets at `ε` and `ε/2`: the unit
//! directions `x/|x|` of samples with `|x| ≥ R`, and the rescaled shell
//! `{x/R : R ≤ |x| ≤ 2R}`. The shell of a cone over a set of dimension `k`
//! is a set of dimension `k + 1`, so its net ratio (≈ 2^dim) decides the
//! dimension of the cone itself.

use serde::Serialize;

use super::{Mesh, MeshError};
use crate::contact::CurveSampler;
use crate::scalar::{norm, Real};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConeSummary {
    pub far_samples: usize,
    pub shell_samples: usize,
    /// Net size of the unit directions at `ε`.
    pub direction_clusters: usize,
    pub direction_ratio: f64,
    pub shell_ratio: f64,
    /// Verdict from the shell ratio: ≥ 3 → 2, ≥ 1.5 → 1, otherwise 0.
    pub cone_dim: u8,
}

const MIN_SAMPLES: usize = 8;

fn net_size(points: &[Vec<f64>], eps: f64) -> usize {
    let mut centres: Vec<&Vec<f64>> = Vec::new();
    let e2 = eps * eps;
    for p in points {
        let covered = centres.iter().any(|c| c.iter().zip(p).map(|(a, b)| (a - b) * (a - b)).sum::<f64>() < e2);
        if !covered {
            centres.push(p);
        }
    }
    centres.len()
}

fn verdict(ratio: f64) -> u8 {
    if ratio >= 3.0 {
        2
    } else if ratio >= 1.5 {
        1
    } else {
        0
    }
}

pub fn cone_directions_of_points<'a, T: Real>(
    points: impl IntoIterator<Item = &'a [T]>,
    radius: T,
    eps: T,
) -> Result<ConeSummary, MeshError> {
    if !(radius > T::zero()) || !(eps > T::zero()) {
        return Err(MeshError::BadParams("radius and eps must be positive".into()));
    }
    let r = radius.to_f64_lossy();
    let mut dirs = Vec::new();
    let mut shell = Vec::new();
    for p in points {
        let n = norm(p).to_f64_lossy();
        if n >= r {
            let q: Vec<f64> = p.iter().map(|x| x.to_f64_lossy()).collect();
            dirs.push(q.iter().map(|x| x / n).collect::<Vec<_>>());
            if n <= 2.0 * r {
                shell.push(q.iter().map(|x| x / r).collect::<Vec<_>>());
            }
        }
    }
    if shell.len() < MIN_SAMPLES {
        return Err(MeshError::TooFewFarSamples { found: shell.len(), needed: MIN_SAMPLES });
    }
    let e = eps.to_f64_lossy();
    let (d1, d2) = (net_size(&dirs, e), net_size(&dirs, e / 2.0));
    let (s1, s2) = (net_size(&shell, e), net_size(&shell, e / 2.0));
    let shell_ratio = s2 as f64 / s1 as f64;
    Ok(ConeSummary {
        far_samples: dirs.len(),
        shell_samples: shell.len(),
        direction_clusters: d1,
        direction_ratio: d2 as f64 / d1 as f64,
        shell_ratio,
        cone_dim: verdict(shell_ratio),
    })
}

pub fn cone_directions<T: Real>(mesh: &Mesh<T>, radius: T, eps: T) -> Result<ConeSummary, MeshError> {
    cone_directions_of_points(mesh.vertices(), radius, eps)
}

/// Samples the curve log-uniformly in the parameter up to norm `4·radius`.
pub fn cone_directions_of_curve<T: Real>(curve: &CurveSampler<T>, radius: T, eps: T) -> Result<ConeSummary, MeshError> {
    let mut t_hi = curve.t0();
    let mut guard = 0;
    while curve.norm_at(t_hi) < T::lit(4.0) * radius && guard < 4000 {
        t_hi = t_hi * T::lit(2.0);
        guard += 1;
    }
    let n = 8192;
    let span = (t_hi / curve.t0()).ln();
    let pts: Vec<Vec<T>> = (0..n)
        .map(|i| curve.eval(curve.t0() * (span * T::from_usize_lossy(i) / T::from_usize_lossy(n - 1)).exp()))
        .collect();
    cone_directions_of_points(pts.iter().map(Vec::as_slice), radius, eps)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn net_ratios_of_simple_sets() {
        let segment: Vec<Vec<f64>> = (0..2000).map(|i| vec![1.0 + i as f64 / 2000.0, 0.0]).collect();
        let r = net_size(&segment, 0.05) as f64 / net_size(&segment, 0.1) as f64;
        assert!((1.5..3.0).contains(&r), "{r}");
        let mut square = Vec::new();
        for i in 0..100 {
            for j in 0..100 {
                square.push(vec![i as f64 / 100.0, j as f64 / 100.0]);
            }
        }
        let r = net_size(&square, 0.05) as f64 / net_size(&square, 0.1) as f64;
        assert!(r >= 3.0, "{r}");
    }

    #[test]
    fn ray_and_plane_curves() {
        let ray = CurveSampler::<f64>::parse("t; 0").unwrap();
        let s = cone_directions_of_curve(&ray, 100.0, 0.2).unwrap();
        assert_eq!(s.direction_clusters, 1);
        assert_eq!(s.cone_dim, 1);
    }

    #[test]
    fn too_few_samples() {
        let pts = [vec![1.0f64, 0.0]];
        assert_eq!(
            cone_directions_of_points(pts.iter().map(Vec::as_slice), 10.0, 0.2),
            Err(MeshError::TooFewFarSamples { found: 0, needed: 8 })
        );
    }
}
