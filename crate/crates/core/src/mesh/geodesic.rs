//! Inner distance on a triangulated surface.
//!
//! Shortest paths run on a Steiner graph: the mesh vertices plus evenly
//! spaced nodes on every edge. All node pairs of a triangle are joined, and
//! so are node pairs of two triangles sharing an edge whenever the straight
//! segment in their unfolding crosses that edge. Segment lengths are rounded up to integer
//! multiples of a power-of-two quantum, so path sums are exact and the
//! resulting distance is an exact metric on the vertices.

use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashMap};

use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::{Mesh, MeshError};
use crate::scalar::{dist, Real};

const UNREACHED: u64 = u64::MAX;
const DEFAULT_STEINER: usize = 2;

#[derive(Debug, Clone)]
pub struct GeodesicGraph {
    vertices: usize,
    offsets: Vec<usize>,
    targets: Vec<u32>,
    weights: Vec<u64>,
    quantum: f64,
}

impl GeodesicGraph {
    pub fn new<T: Real>(mesh: &Mesh<T>) -> Self {
        Self::with_steiner_points(mesh, DEFAULT_STEINER, true)
    }

    /// Graph with `per_edge` evenly spaced interior nodes on every mesh edge.
    pub fn with_steiner_points<T: Real>(mesh: &Mesh<T>, per_edge: usize, unfold: bool) -> Self {
        let n = mesh.vertex_count();
        let pos = |i: usize| -> Vec<f64> { mesh.vertex(i).iter().map(|x| x.to_f64_lossy()).collect() };
        let mut nodes: Vec<Vec<f64>> = (0..n).map(pos).collect();
        let mut interior: HashMap<(u32, u32), u32> = HashMap::new();
        // Interior nodes of edge (a, b), listed from a to b.
        let mut edge_nodes = |a: u32, b: u32, nodes: &mut Vec<Vec<f64>>| -> Vec<u32> {
            let (lo, hi) = (a.min(b), a.max(b));
            let first = *interior.entry((lo, hi)).or_insert_with(|| {
                let first = nodes.len() as u32;
                for k in 1..=per_edge {
                    let t = k as f64 / (per_edge + 1) as f64;
                    let p = nodes[lo as usize].iter().zip(&nodes[hi as usize]).map(|(x, y)| x + t * (y - x)).collect();
                    nodes.push(p);
                }
                first
            });
            (first..first + per_edge as u32).collect()
        };
        let mut cliques: Vec<Vec<u32>> = Vec::with_capacity(mesh.triangles().len());
        for &[a, b, c] in mesh.triangles() {
            let mut clique = vec![a, b, c];
            clique.extend(edge_nodes(a, b, &mut nodes));
            clique.extend(edge_nodes(b, c, &mut nodes));
            clique.extend(edge_nodes(c, a, &mut nodes));
            cliques.push(clique);
        }

        let diag = mesh.bounding_diagonal().to_f64_lossy();
        let quantum = if diag > 0.0 { 2f64.powi(diag.log2().floor() as i32 - 48) } else { 2f64.powi(-48) };
        let quantize = |d: f64| -> u64 { (d / quantum * (1.0 + 1e-12)).floor() as u64 + 1 };
        let weight = |u: u32, v: u32| -> u64 { quantize(dist(&nodes[u as usize], &nodes[v as usize])) };

        let k = 3 + 3 * per_edge;
        let mut edges: Vec<(u32, u32, u64)> = Vec::with_capacity(cliques.len() * k * (k - 1));
        for clique in &cliques {
            for i in 0..k {
                for j in i + 1..k {
                    let (u, v) = (clique[i], clique[j]);
                    let w = weight(u, v);
                    edges.push((u, v, w));
                    edges.push((v, u, w));
                }
            }
        }

        // Straight segments across each interior edge, measured in the
        // unfolding of its two triangles.
        if unfold {
            let mut sides: HashMap<(u32, u32), Vec<usize>> = HashMap::new();
            for (t, &[a, b, c]) in mesh.triangles().iter().enumerate() {
                for (x, y) in [(a, b), (b, c), (c, a)] {
                    sides.entry((x.min(y), x.max(y))).or_default().push(t);
                }
            }
            let off_edge = |t: usize, a: u32, b: u32| -> Vec<u32> {
                let on: Vec<u32> = interior.get(&(a, b)).map(|&f| (f..f + per_edge as u32).collect()).unwrap_or_default();
                cliques[t].iter().copied().filter(|&v| v != a && v != b && !on.contains(&v)).collect()
            };
            for (&(a, b), ts) in &sides {
                if ts.len() != 2 {
                    continue;
                }
                let (pa, pb) = (&nodes[a as usize], &nodes[b as usize]);
                let len = dist(pa, pb);
                if len == 0.0 {
                    continue;
                }
                let axis: Vec<f64> = pa.iter().zip(pb).map(|(x, y)| (y - x) / len).collect();
                let frame = |v: u32| -> (f64, f64) {
                    let rel: Vec<f64> = nodes[v as usize].iter().zip(pa).map(|(x, y)| x - y).collect();
                    let s: f64 = rel.iter().zip(&axis).map(|(x, y)| x * y).sum();
                    let h2: f64 = rel.iter().map(|x| x * x).sum::<f64>() - s * s;
                    (s, h2.max(0.0).sqrt())
                };
                let (left, right) = (off_edge(ts[0], a, b), off_edge(ts[1], a, b));
                for &u in &left {
                    let (su, hu) = frame(u);
                    for &v in &right {
                        let (sv, hv) = frame(v);
                        let h = hu + hv;
                        if h == 0.0 {
                            continue;
                        }
                        let cross = su + (sv - su) * hu / h;
                        if (0.0..=len).contains(&cross) {
                            let w = quantize(((sv - su).powi(2) + h * h).sqrt());
                            edges.push((u, v, w));
                            edges.push((v, u, w));
                        }
                    }
                }
            }
        }
        edges.par_sort_unstable();
        edges.dedup_by(|a, b| a.0 == b.0 && a.1 == b.1);
        let mut offsets = vec![0usize; nodes.len() + 1];
        for &(u, _, _) in &edges {
            offsets[u as usize + 1] += 1;
        }
        for i in 0..nodes.len() {
            offsets[i + 1] += offsets[i];
        }
        GeodesicGraph {
            vertices: n,
            offsets,
            targets: edges.iter().map(|e| e.1).collect(),
            weights: edges.iter().map(|e| e.2).collect(),
            quantum,
        }
    }

    /// Length represented by one unit of integer path weight.
    pub fn quantum(&self) -> f64 {
        self.quantum
    }

    fn run(&self, source: usize, stop_at: Option<usize>) -> Vec<u64> {
        let mut d = vec![UNREACHED; self.offsets.len() - 1];
        let mut heap = BinaryHeap::new();
        d[source] = 0;
        heap.push(Reverse((0u64, source as u32)));
        while let Some(Reverse((du, u))) = heap.pop() {
            let u = u as usize;
            if du > d[u] {
                continue;
            }
            if stop_at == Some(u) {
                break;
            }
            for k in self.offsets[u]..self.offsets[u + 1] {
                let v = self.targets[k] as usize;
                let nd = du.saturating_add(self.weights[k]);
                if nd < d[v] {
                    d[v] = nd;
                    heap.push(Reverse((nd, v as u32)));
                }
            }
        }
        d
    }

    /// Inner distances from `source` to every vertex; `None` when unreachable.
    pub fn distances_from<T: Real>(&self, source: usize) -> Vec<Option<T>> {
        self.run(source, None)[..self.vertices]
            .iter()
            .map(|&w| (w != UNREACHED).then(|| T::lit(w as f64 * self.quantum)))
            .collect()
    }

    /// Inner distance between two vertices. The search always starts from
    /// the smaller index, so the result is exactly symmetric.
    pub fn distance<T: Real>(&self, p: usize, q: usize) -> Result<T, MeshError> {
        if p == q {
            return Ok(T::zero());
        }
        let (s, t) = (p.min(q), p.max(q));
        match self.run(s, Some(t))[t] {
            UNREACHED => Err(MeshError::Disconnected),
            w => Ok(T::lit(w as f64 * self.quantum)),
        }
    }
}

pub fn inner_distance<T: Real>(mesh: &Mesh<T>, p: usize, q: usize) -> Result<T, MeshError> {
    let n = mesh.vertex_count();
    if p >= n || q >= n {
        return Err(MeshError::BadParams(format!("vertex index out of range (mesh has {n} vertices)")));
    }
    GeodesicGraph::new(mesh).distance(p, q)
}

/// Largest ratio of inner to Euclidean distance over sampled vertex pairs.
///
/// Sources are half farthest-point samples (in inner distance) and half
/// uniform random vertices; each source is paired with every other vertex.
/// At least `pair_budget` pairs are evaluated unless the mesh has fewer.
pub fn lne_constant<T: Real>(mesh: &Mesh<T>, pair_budget: usize, seed: u64) -> Result<T, MeshError> {
    if pair_budget < 1000 {
        return Err(MeshError::PairBudget(pair_budget));
    }
    let n = mesh.vertex_count();
    if n < 2 {
        return Err(MeshError::BadParams("need at least two vertices".into()));
    }
    let graph = GeodesicGraph::new(mesh);
    let sources_needed = pair_budget.div_ceil(n - 1).max(8).min(n);

    let ratio_from = |s: usize, d: &[u64]| -> Result<f64, MeshError> {
        let ps: Vec<f64> = mesh.vertex(s).iter().map(|x| x.to_f64_lossy()).collect();
        let mut worst = 1.0f64;
        for (v, &w) in d[..n].iter().enumerate() {
            if v == s {
                continue;
            }
            if w == UNREACHED {
                return Err(MeshError::Disconnected);
            }
            let pv: Vec<f64> = mesh.vertex(v).iter().map(|x| x.to_f64_lossy()).collect();
            let e = dist(&ps, &pv);
            if e > 0.0 {
                worst = worst.max(w as f64 * graph.quantum / e);
            }
        }
        Ok(worst)
    };

    let farthest = sources_needed.div_ceil(2);
    let mut chosen = Vec::with_capacity(sources_needed);
    let mut nearest = vec![UNREACHED; n];
    let mut worst = 1.0f64;
    let mut next = 0usize;
    for _ in 0..farthest {
        chosen.push(next);
        let d = graph.run(next, None);
        worst = worst.max(ratio_from(next, &d)?);
        for v in 0..n {
            nearest[v] = nearest[v].min(d[v]);
        }
        next = (0..n).max_by_key(|&v| (nearest[v], Reverse(v))).expect("non-empty");
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pool: Vec<usize> = (0..n).filter(|v| !chosen.contains(v)).collect();
    let extra = (sources_needed - chosen.len()).min(pool.len());
    let random: Vec<usize> = sample(&mut rng, pool.len(), extra).into_iter().map(|i| pool[i]).collect();
    let ratios: Vec<f64> = random
        .par_iter()
        .map(|&s| ratio_from(s, &graph.run(s, None)))
        .collect::<Result<_, _>>()?;
    worst = ratios.into_iter().fold(worst, f64::max);
    Ok(T::lit(worst))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::{generate_surface, Family, Resolution};

    fn grid(n: usize) -> Mesh<f64> {
        let mut pts = Vec::new();
        for i in 0..=n {
            for j in 0..=n {
                pts.push(vec![i as f64 / n as f64, j as f64 / n as f64]);
            }
        }
        let id = |i: usize, j: usize| (i * (n + 1) + j) as u32;
        let mut tris = Vec::new();
        for i in 0..n {
            for j in 0..n {
                tris.push([id(i, j), id(i + 1, j), id(i + 1, j + 1)]);
                tris.push([id(i, j), id(i + 1, j + 1), id(i, j + 1)]);
            }
        }
        Mesh::from_points(&pts, tris).unwrap()
    }

    #[test]
    fn flat_square_distances_are_close_to_euclidean() {
        let m = grid(10);
        let g = GeodesicGraph::new(&m);
        let d: f64 = g.distance(0, m.vertex_count() - 1).unwrap();
        assert!((d - 2f64.sqrt()).abs() < 1e-9, "{d}");
        let d: f64 = g.distance(0, 10).unwrap();
        assert!((d - 1.0).abs() < 1e-9);
        assert_eq!(g.distance::<f64>(5, 5).unwrap(), 0.0);
        // A knight's move uses the midpoint nodes.
        let d: f64 = g.distance(0, 2 * 11 + 1).unwrap();
        assert!(d / (5f64.sqrt() / 10.0) < 1.01, "{d}");
    }

    #[test]
    fn disconnected_and_range_errors() {
        let m = Mesh::<f64>::from_points(
            &[vec![0.0, 0.0], vec![1.0, 0.0], vec![0.0, 1.0], vec![5.0, 5.0], vec![6.0, 5.0], vec![5.0, 6.0]],
            vec![[0, 1, 2], [3, 4, 5]],
        )
        .unwrap();
        assert_eq!(inner_distance(&m, 0, 4), Err(MeshError::Disconnected));
        assert!(matches!(inner_distance(&m, 0, 9), Err(MeshError::BadParams(_))));
        assert_eq!(lne_constant(&m, 1000, 1), Err(MeshError::Disconnected));
        assert_eq!(lne_constant(&grid(4), 999, 1), Err(MeshError::PairBudget(999)));
    }

    #[test]
    fn flat_disc_is_nearly_normally_embedded() {
        let m: Mesh<f64> = generate_surface(&Family::Disc { radius: 1.0 }, Resolution::square(12)).unwrap();
        let c: f64 = lne_constant(&m, 10_000, 7).unwrap();
        assert!((1.0..=1.02).contains(&c), "{c}");
    }

    #[test]
    fn deterministic_for_a_seed() {
        let m = grid(12);
        let a: f64 = lne_constant(&m, 2000, 42).unwrap();
        let b: f64 = lne_constant(&m, 2000, 42).unwrap();
        assert_eq!(a, b);
    }
}
