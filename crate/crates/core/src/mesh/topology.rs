//! Orientability, genus, and boundary count from the combinatorics alone.

use std::collections::{HashMap, VecDeque};

use serde::Serialize;

use super::{Mesh, MeshError};
use crate::code_model::Theta;
use crate::scalar::Real;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct MeshTopology {
    pub theta: Theta,
    /// Orientable genus, or cross-caps minus one when non-orientable (the
    /// genus of the orientable double cover).
    pub genus: u32,
    /// Cross-cap count; zero for orientable surfaces.
    pub cross_caps: u32,
    pub boundary_components: usize,
    pub euler_characteristic: i64,
}

/// Directed edge `a → b` as it appears in a triangle.
fn directed(tri: &[u32; 3], k: usize) -> (u32, u32) {
    (tri[k], tri[(k + 1) % 3])
}

pub fn mesh_topology<T: Real>(mesh: &Mesh<T>) -> Result<MeshTopology, MeshError> {
    let tris = mesh.triangles();
    let mut edge_tris: HashMap<(u32, u32), Vec<usize>> = HashMap::with_capacity(tris.len() * 2);
    for (t, tri) in tris.iter().enumerate() {
        for k in 0..3 {
            let (a, b) = directed(tri, k);
            edge_tris.entry((a.min(b), a.max(b))).or_default().push(t);
        }
    }
    if let Some((&(a, b), ts)) = edge_tris.iter().filter(|(_, ts)| ts.len() > 2).min_by_key(|(k, _)| **k) {
        return Err(MeshError::NonManifold { a, b, count: ts.len() });
    }

    // Orientation propagation; also checks that the triangles form one piece.
    let mut sign = vec![0i8; tris.len()];
    let mut orientable = true;
    let mut reached = 0;
    if !tris.is_empty() {
        sign[0] = 1;
        reached = 1;
        let mut queue = VecDeque::from([0usize]);
        while let Some(t) = queue.pop_front() {
            for k in 0..3 {
                let (a, b) = directed(&tris[t], k);
                for &u in &edge_tris[&(a.min(b), a.max(b))] {
                    if u == t {
                        continue;
                    }
                    // Consistent neighbours traverse the shared edge in opposite directions.
                    let same_direction = (0..3).any(|j| directed(&tris[u], j) == (a, b));
                    let want = if same_direction { -sign[t] } else { sign[t] };
                    if sign[u] == 0 {
                        sign[u] = want;
                        reached += 1;
                        queue.push_back(u);
                    } else if sign[u] != want {
                        orientable = false;
                    }
                }
            }
        }
    }
    if reached != tris.len() {
        return Err(MeshError::Disconnected);
    }

    let mut used = vec![false; mesh.vertex_count()];
    for tri in tris {
        for &i in tri {
            used[i as usize] = true;
        }
    }
    let v = used.iter().filter(|&&u| u).count() as i64;
    let chi = v - edge_tris.len() as i64 + tris.len() as i64;

    let mut parent: HashMap<u32, u32> = HashMap::new();
    fn find(p: &mut HashMap<u32, u32>, x: u32) -> u32 {
        let mut r = x;
        while p[&r] != r {
            r = p[&r];
        }
        let mut y = x;
        while p[&y] != r {
            let next = p[&y];
            p.insert(y, r);
            y = next;
        }
        r
    }
    for (&(a, b), ts) in &edge_tris {
        if ts.len() == 1 {
            parent.entry(a).or_insert(a);
            parent.entry(b).or_insert(b);
            let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
            if ra != rb {
                parent.insert(ra, rb);
            }
        }
    }
    let keys: Vec<u32> = parent.keys().copied().collect();
    let boundary = keys.iter().filter(|&&k| find(&mut parent, k) == k).count();

    let deficit = 2 - chi - boundary as i64;
    let inconsistent = || MeshError::BadParams(format!("Euler characteristic {chi} with {boundary} boundary loops is not a surface"));
    if orientable {
        if deficit < 0 || deficit % 2 != 0 {
            return Err(inconsistent());
        }
        Ok(MeshTopology {
            theta: Theta::Orientable,
            genus: (deficit / 2) as u32,
            cross_caps: 0,
            boundary_components: boundary,
            euler_characteristic: chi,
        })
    } else {
        if deficit < 1 {
            return Err(inconsistent());
        }
        Ok(MeshTopology {
            theta: Theta::NonOrientable,
            genus: (deficit - 1) as u32,
            cross_caps: deficit as u32,
            boundary_components: boundary,
            euler_characteristic: chi,
        })
    }
}
