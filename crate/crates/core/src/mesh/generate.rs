//! Sampled model surfaces.
//!
//! Grids are built in `f64` and converted at the end. Profiles that scale
//! (horns, tubes, paraboloids) use geometric ring spacing so that every
//! dyadic shell of radii is resolved by roughly the same number of rings.

use std::collections::HashMap;
use std::f64::consts::{PI, TAU};

use super::{Mesh, MeshError};
use crate::rational::Rational;
use crate::scalar::Real;

#[derive(Debug, Clone, PartialEq)]
pub enum Family {
    /// `x² + y² = z^{2β}`, `0 ≤ z ≤ height`, `β ≥ 1`. The apex is marked `apex`.
    Horn { beta: Rational, height: f64 },
    /// `x² + y² = z^{2β}`, `z_min ≤ z ≤ z_max`, `β ≤ 1`.
    Tube { beta: Rational, z_min: f64, z_max: f64 },
    /// Planar region `x_min ≤ x ≤ x_max`, `0 ≤ y ≤ x^β`, `β ≤ 1`. The two
    /// arcs `y = 0` and `y = x^β` are marked `lower` and `upper`.
    Strip { beta: Rational, x_min: f64, x_max: f64 },
    /// `x² + y² = radius²`, `|z| ≤ half_length`.
    Cylinder { radius: f64, half_length: f64 },
    /// `z = x² + y²`, `z ≤ z_max`.
    Paraboloid { z_max: f64 },
    Torus { major: f64, minor: f64 },
    /// Closed orientable surface of the given genus: two copies of a planar
    /// domain with `genus` holes, glued along the boundary.
    GenusG { genus: u32 },
    /// `((1 + t cos(φ/2)) cos φ, (1 + t cos(φ/2)) sin φ, t sin(φ/2))`, `|t| ≤ half_width`.
    MoebiusBand { half_width: f64 },
    Sphere { radius: f64 },
    /// Two spheres of the given radius touching at the origin, which is a
    /// shared vertex marked `contact`.
    TouchingSpheres { radius: f64 },
    /// Flat disc in the plane.
    Disc { radius: f64 },
}

/// `rings` counts samples along the profile (or columns of a strip),
/// `around` counts samples around the axis (or rows across a strip).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Resolution {
    pub rings: usize,
    pub around: usize,
}

impl Resolution {
    pub fn square(n: usize) -> Self {
        Resolution { rings: n, around: n }
    }
}

fn bad(msg: impl Into<String>) -> MeshError {
    MeshError::BadParams(msg.into())
}

pub(crate) struct Tensor {
    pub points: Vec<Vec<f64>>,
    pub triangles: Vec<[u32; 3]>,
    pub cols: usize,
    pub start_cap: Option<u32>,
    pub end_cap: Option<u32>,
}

impl Tensor {
    pub fn index(&self, i: usize, j: usize) -> u32 {
        (i * self.cols + j) as u32
    }
}

/// Quad grid over `us × vs` split into consistently oriented triangles.
/// Caps are single vertices fanned to the first or last row; they need a
/// periodic `v` axis.
pub(crate) fn tensor_surface(
    us: &[f64],
    u_periodic: bool,
    vs: &[f64],
    v_periodic: bool,
    start_cap: Option<Vec<f64>>,
    end_cap: Option<Vec<f64>>,
    f: impl Fn(f64, f64) -> Vec<f64>,
) -> Tensor {
    let (rows, cols) = (us.len(), vs.len());
    let mut points = Vec::with_capacity(rows * cols + 2);
    for &u in us {
        for &v in vs {
            points.push(f(u, v));
        }
    }
    let id = |i: usize, j: usize| (i % rows * cols + j % cols) as u32;
    let mut triangles = Vec::new();
    let row_quads = if u_periodic { rows } else { rows - 1 };
    let col_quads = if v_periodic { cols } else { cols - 1 };
    for i in 0..row_quads {
        for j in 0..col_quads {
            let (a, b, c, d) = (id(i, j), id(i + 1, j), id(i + 1, j + 1), id(i, j + 1));
            triangles.push([a, b, c]);
            triangles.push([a, c, d]);
        }
    }
    let mut cap = |p: Option<Vec<f64>>, row: usize, flip: bool| {
        p.map(|p| {
            let c = points.len() as u32;
            points.push(p);
            for j in 0..cols {
                let (x, y) = (id(row, j), id(row, j + 1));
                triangles.push(if flip { [c, y, x] } else { [c, x, y] });
            }
            c
        })
    };
    let start_cap = cap(start_cap, 0, false);
    let end_cap = cap(end_cap, rows - 1, true);
    Tensor { points, triangles, cols, start_cap, end_cap }
}

pub(crate) fn mesh_from_f64<T: Real>(points: &[Vec<f64>], triangles: Vec<[u32; 3]>) -> Result<Mesh<T>, MeshError> {
    let dim = points.first().map_or(3, Vec::len);
    let coords = points.iter().flatten().map(|&x| T::lit(x)).collect();
    Mesh::new(dim, coords, triangles)
}

/// `n` values from `lo` to `hi` in geometric progression.
fn geometric(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let q = (hi / lo).ln() / (n - 1) as f64;
    (0..n).map(|i| if i + 1 == n { hi } else { lo * (q * i as f64).exp() }).collect()
}

fn uniform_periodic(n: usize) -> Vec<f64> {
    (0..n).map(|j| TAU * j as f64 / n as f64).collect()
}

/// Symmetric node set on `[-half, half]`. Nodes include 0, `±half`, every
/// `±break`, and every `±graded` point; near graded points the spacing is
/// proportional to the distance (ratio `kappa`), clamped to `[h_min, h]`.
pub(crate) fn graded_axis(half: f64, breaks: &[f64], graded: &[f64], h: f64, h_min: f64, kappa: f64) -> Vec<f64> {
    let mut keys: Vec<f64> = [0.0, half]
        .into_iter()
        .chain(breaks.iter().chain(graded).map(|b| b.abs()).filter(|&b| b < half))
        .collect();
    keys.sort_by(f64::total_cmp);
    keys.dedup_by(|a, b| (*a - *b).abs() < 1e-12);
    let is_graded = |x: f64| graded.iter().any(|g| (g.abs() - x).abs() < 1e-12);

    let mut pos = vec![0.0];
    for w in keys.windows(2) {
        let (a, b) = (w[0], w[1]);
        let (ga, gb) = (is_graded(a), is_graded(b));
        let sigma = |x: f64| {
            let mut d = f64::INFINITY;
            if ga {
                d = d.min(x - a);
            }
            if gb {
                d = d.min(b - x);
            }
            if d.is_finite() {
                (kappa * d).clamp(h_min, h)
            } else {
                h
            }
        };
        let mut x = a;
        loop {
            let s = sigma(x).min(sigma((x + sigma(x)).min(b)));
            if x + 1.5 * s >= b {
                if x + s < b && b - x > 1.2 * h.min(sigma(x)) {
                    pos.push((x + b) / 2.0);
                }
                break;
            }
            x += s;
            pos.push(x);
        }
        pos.push(b);
    }
    let mut out: Vec<f64> = pos.iter().skip(1).rev().map(|x| -x).collect();
    out.extend(pos);
    out
}

/// Planar rectangle with `genus` square holes on the x-axis, doubled into a
/// closed surface `z = ±c·√d` where `d` is the distance to the boundary.
/// The layout is symmetric under `(x, y) ↦ (-x, -y)`.
pub(crate) struct DoubledDomain {
    pub genus: u32,
    pub width: f64,
    pub height: f64,
}

const SHEET_HEIGHT: f64 = 0.6;

impl DoubledDomain {
    pub fn new(genus: u32, min_width: f64) -> Self {
        DoubledDomain { genus, width: (4.0 * genus as f64 + 4.0).max(min_width), height: 10.0 }
    }

    fn hole_centres(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.genus).map(move |k| 4.0 * k as f64 - 2.0 * (self.genus as f64 - 1.0))
    }

    pub fn x_breaks(&self) -> Vec<f64> {
        self.hole_centres().flat_map(|c| [c - 1.0, c + 1.0]).collect()
    }

    pub fn y_breaks(&self) -> Vec<f64> {
        vec![-1.0, 1.0]
    }

    pub fn boundary_distance(&self, x: f64, y: f64) -> f64 {
        let outer = (self.width / 2.0 - x.abs()).min(self.height / 2.0 - y.abs());
        self.hole_centres()
            .map(|c| {
                let dx = ((x - c).abs() - 1.0).max(0.0);
                let dy = (y.abs() - 1.0).max(0.0);
                dx.hypot(dy)
            })
            .fold(outer, f64::min)
            .max(0.0)
    }

    fn contains(&self, x: f64, y: f64) -> bool {
        x.abs() < self.width / 2.0
            && y.abs() < self.height / 2.0
            && self.hole_centres().all(|c| (x - c).abs() > 1.0 || y.abs() > 1.0)
    }

    /// Triangles of the top sheet on the grid `xs × ys`, as grid index
    /// triples `(i, j)`, oriented counterclockwise in the plane.
    fn top_triangles(&self, xs: &[f64], ys: &[f64]) -> Vec<[(usize, usize); 3]> {
        let on_rim = |i: usize, j: usize| self.boundary_distance(xs[i], ys[j]) < 1e-9;
        let mut out = Vec::new();
        for i in 0..xs.len() - 1 {
            for j in 0..ys.len() - 1 {
                if !self.contains((xs[i] + xs[i + 1]) / 2.0, (ys[j] + ys[j + 1]) / 2.0) {
                    continue;
                }
                let (a, b, c, d) = ((i, j), (i + 1, j), (i + 1, j + 1), (i, j + 1));
                let all_rim = |t: [(usize, usize); 3]| t.iter().all(|&(p, q)| on_rim(p, q));
                let first = [[a, b, c], [a, c, d]];
                if first.iter().any(|&t| all_rim(t)) {
                    out.extend([[a, b, d], [b, c, d]]);
                } else {
                    out.extend(first);
                }
            }
        }
        out
    }

    pub fn height_at(&self, x: f64, y: f64) -> f64 {
        SHEET_HEIGHT * self.boundary_distance(x, y).sqrt()
    }

    /// Closed surface in `R³`, scaled by `scale`. Returns the points, the
    /// triangles, and the top-sheet vertex of every grid node in the domain.
    pub fn build(&self, xs: &[f64], ys: &[f64], scale: f64) -> (Vec<Vec<f64>>, Vec<[u32; 3]>, HashMap<(usize, usize), u32>) {
        let tris = self.top_triangles(xs, ys);
        let mut top: HashMap<(usize, usize), u32> = HashMap::new();
        let mut bottom: HashMap<(usize, usize), u32> = HashMap::new();
        let mut points = Vec::new();
        for t in &tris {
            for &(i, j) in t {
                top.entry((i, j)).or_insert_with(|| {
                    points.push(vec![xs[i] * scale, ys[j] * scale, self.height_at(xs[i], ys[j]) * scale]);
                    (points.len() - 1) as u32
                });
            }
        }
        let mut keys: Vec<_> = top.keys().copied().collect();
        keys.sort();
        for (i, j) in keys {
            let z = self.height_at(xs[i], ys[j]);
            let id = if z == 0.0 {
                top[&(i, j)]
            } else {
                points.push(vec![xs[i] * scale, ys[j] * scale, -z * scale]);
                (points.len() - 1) as u32
            };
            bottom.insert((i, j), id);
        }
        let mut triangles = Vec::with_capacity(2 * tris.len());
        for [a, b, c] in &tris {
            triangles.push([top[a], top[b], top[c]]);
            triangles.push([bottom[a], bottom[c], bottom[b]]);
        }
        (points, triangles, top)
    }

    /// Quotient of the closed surface by `p ↦ -p`, realized as the top sheet
    /// with antipodal rim points identified and embedded in `R⁶` by
    /// `p ↦ p pᵀ`. The grids must be symmetric about 0.
    pub fn build_antipodal(&self, xs: &[f64], ys: &[f64], scale: f64) -> (Vec<Vec<f64>>, Vec<[u32; 3]>, HashMap<(usize, usize), u32>) {
        let (nx, ny) = (xs.len(), ys.len());
        let tris = self.top_triangles(xs, ys);
        let mut ids: HashMap<(usize, usize), u32> = HashMap::new();
        let mut points = Vec::new();
        let mut nodes: Vec<(usize, usize)> = tris.iter().flatten().copied().collect();
        nodes.sort();
        nodes.dedup();
        for &(i, j) in &nodes {
            if ids.contains_key(&(i, j)) {
                continue;
            }
            let (x, y) = (xs[i] * scale, ys[j] * scale);
            let z = self.height_at(xs[i], ys[j]) * scale;
            points.push(veronese(&[x, y, z]));
            let id = (points.len() - 1) as u32;
            ids.insert((i, j), id);
            if z == 0.0 {
                ids.insert((nx - 1 - i, ny - 1 - j), id);
            }
        }
        let triangles = tris.iter().map(|t| t.map(|k| ids[&k])).collect();
        (points, triangles, ids)
    }
}

/// `p ↦ p pᵀ` written in the orthonormal coordinates of symmetric 3×3
/// matrices, so that it is injective on pairs `±p`.
pub(crate) fn veronese(p: &[f64; 3]) -> Vec<f64> {
    let s = std::f64::consts::SQRT_2;
    let [x, y, z] = *p;
    vec![x * x, y * y, z * z, s * x * y, s * x * z, s * y * z]
}

fn ring_mesh(centre: bool, rings: &[(f64, usize)]) -> (Vec<Vec<f64>>, Vec<[u32; 3]>) {
    let mut points = Vec::new();
    let mut triangles = Vec::new();
    let mut prev: Vec<(u32, f64)> = Vec::new();
    if centre {
        points.push(vec![0.0, 0.0]);
    }
    for &(r, n) in rings {
        let ring: Vec<(u32, f64)> = (0..n)
            .map(|k| {
                let a = TAU * k as f64 / n as f64;
                points.push(vec![r * a.cos(), r * a.sin()]);
                ((points.len() - 1) as u32, a)
            })
            .collect();
        if prev.is_empty() && centre {
            for k in 0..n {
                triangles.push([0, ring[k].0, ring[(k + 1) % n].0]);
            }
        } else if !prev.is_empty() {
            zip_rings(&prev, &ring, &mut triangles);
        }
        prev = ring;
    }
    (points, triangles)
}

/// Triangulate the annulus between two closed rings, both starting at angle 0.
fn zip_rings(inner: &[(u32, f64)], outer: &[(u32, f64)], out: &mut Vec<[u32; 3]>) {
    let (na, nb) = (inner.len(), outer.len());
    let angle = |ring: &[(u32, f64)], k: usize| if k >= ring.len() { TAU } else { ring[k].1 };
    let (mut ia, mut ib) = (0, 0);
    while ia < na || ib < nb {
        let advance_inner = ib == nb || (ia < na && angle(inner, ia + 1) <= angle(outer, ib + 1));
        let a = inner[ia % na].0;
        let b = outer[ib % nb].0;
        if advance_inner {
            out.push([a, b, inner[(ia + 1) % na].0]);
            ia += 1;
        } else {
            out.push([a, b, outer[(ib + 1) % nb].0]);
            ib += 1;
        }
    }
}

fn check_res(res: Resolution, min_rings: usize, min_around: usize) -> Result<(), MeshError> {
    if res.rings < min_rings || res.around < min_around {
        return Err(bad(format!("resolution must be at least {min_rings}×{min_around}")));
    }
    Ok(())
}

fn positive(name: &str, v: f64) -> Result<f64, MeshError> {
    if v > 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err(bad(format!("{name} must be positive")))
    }
}

fn sphere_tensor(radius: f64, centre: [f64; 3], res: Resolution) -> Tensor {
    let n = res.rings;
    let thetas: Vec<f64> = (1..n).map(|i| PI * i as f64 / n as f64).collect();
    let [cx, cy, cz] = centre;
    tensor_surface(
        &thetas,
        false,
        &uniform_periodic(res.around),
        true,
        Some(vec![cx, cy, cz + radius]),
        Some(vec![cx, cy, cz - radius]),
        |t, p| vec![cx + radius * t.sin() * p.cos(), cy + radius * t.sin() * p.sin(), cz + radius * t.cos()],
    )
}

pub fn generate_surface<T: Real>(family: &Family, res: Resolution) -> Result<Mesh<T>, MeshError> {
    match family {
        Family::Horn { beta, height } => {
            if *beta < Rational::one() {
                return Err(bad("horn exponent must be at least 1"));
            }
            check_res(res, 2, 3)?;
            let h = positive("height", *height)?;
            let b = beta.to_f64();
            let zs = geometric(h * 1e-5, h, res.rings);
            let t = tensor_surface(&zs, false, &uniform_periodic(res.around), true, Some(vec![0.0; 3]), None, |z, p| {
                vec![z.powf(b) * p.cos(), z.powf(b) * p.sin(), z]
            });
            let mut m = mesh_from_f64(&t.points, t.triangles.clone())?;
            m.set_mark(t.start_cap.expect("apex") as usize, "apex");
            Ok(m)
        }
        Family::Tube { beta, z_min, z_max } => {
            if *beta > Rational::one() {
                return Err(bad("tube exponent must be at most 1"));
            }
            check_res(res, 2, 3)?;
            let lo = positive("z_min", *z_min)?;
            if !(*z_max > lo) {
                return Err(bad("z_max must exceed z_min"));
            }
            let b = beta.to_f64();
            let zs = geometric(lo, *z_max, res.rings);
            let t = tensor_surface(&zs, false, &uniform_periodic(res.around), true, None, None, |z, p| {
                vec![z.powf(b) * p.cos(), z.powf(b) * p.sin(), z]
            });
            let mut m = mesh_from_f64(&t.points, t.triangles.clone())?;
            for j in 0..res.around {
                m.set_mark(t.index(res.rings - 1, j) as usize, "end:0");
            }
            Ok(m)
        }
        Family::Strip { beta, x_min, x_max } => {
            if *beta > Rational::one() {
                return Err(bad("strip exponent must be at most 1"));
            }
            check_res(res, 2, 1)?;
            let lo = positive("x_min", *x_min)?;
            if !(*x_max > lo) {
                return Err(bad("x_max must exceed x_min"));
            }
            let b = beta.to_f64();
            let rows = res.around;
            let xs = if b > 0.0 {
                // Column width tracks the local height so cells stay square.
                let mut xs = vec![lo];
                while let Some(&x) = xs.last() {
                    if x >= *x_max {
                        break;
                    }
                    let step = x.powf(b) / rows as f64;
                    xs.push(if x + 1.5 * step >= *x_max { *x_max } else { x + step });
                }
                xs
            } else {
                geometric(lo, *x_max, res.rings)
            };
            let fracs: Vec<f64> = (0..=rows).map(|j| j as f64 / rows as f64).collect();
            let t = tensor_surface(&xs, false, &fracs, false, None, None, |x, s| vec![x, s * x.powf(b)]);
            let mut m = mesh_from_f64(&t.points, t.triangles.clone())?;
            for i in 0..xs.len() {
                m.set_mark(t.index(i, 0) as usize, "lower");
                m.set_mark(t.index(i, rows) as usize, "upper");
            }
            Ok(m)
        }
        Family::Cylinder { radius, half_length } => {
            check_res(res, 2, 3)?;
            let r = positive("radius", *radius)?;
            let l = positive("half_length", *half_length)?;
            // z = l·sinh(a u)/sinh(a): spacing near z = 0 matches the spacing around.
            let n = res.rings;
            let target = TAU * r / res.around as f64;
            let uniform = 2.0 * l / (n - 1) as f64;
            let a = if uniform <= target {
                0.0
            } else {
                let want = target / uniform;
                let (mut lo, mut hi) = (1e-9, 50.0);
                for _ in 0..100 {
                    let mid = 0.5 * (lo + hi);
                    if mid / f64::sinh(mid) > want {
                        lo = mid;
                    } else {
                        hi = mid;
                    }
                }
                lo
            };
            let zs: Vec<f64> = (0..n)
                .map(|i| {
                    let u = -1.0 + 2.0 * i as f64 / (n - 1) as f64;
                    if a == 0.0 {
                        l * u
                    } else {
                        l * (a * u).sinh() / a.sinh()
                    }
                })
                .collect();
            let t = tensor_surface(&zs, false, &uniform_periodic(res.around), true, None, None, |z, p| {
                vec![r * p.cos(), r * p.sin(), z]
            });
            let mut m = mesh_from_f64(&t.points, t.triangles.clone())?;
            for j in 0..res.around {
                m.set_mark(t.index(n - 1, j) as usize, "end:0");
                m.set_mark(t.index(0, j) as usize, "end:1");
            }
            Ok(m)
        }
        Family::Paraboloid { z_max } => {
            check_res(res, 2, 3)?;
            let rho_max = positive("z_max", *z_max)?.sqrt();
            let rhos = geometric(rho_max * 1e-3, rho_max, res.rings);
            let t = tensor_surface(&rhos, false, &uniform_periodic(res.around), true, Some(vec![0.0; 3]), None, |r, p| {
                vec![r * p.cos(), r * p.sin(), r * r]
            });
            let mut m = mesh_from_f64(&t.points, t.triangles.clone())?;
            for j in 0..res.around {
                m.set_mark(t.index(res.rings - 1, j) as usize, "end:0");
            }
            Ok(m)
        }
        Family::Torus { major, minor } => {
            check_res(res, 3, 3)?;
            let (big, small) = (positive("major", *major)?, positive("minor", *minor)?);
            if small >= big {
                return Err(bad("minor radius must be below the major radius"));
            }
            let t = tensor_surface(&uniform_periodic(res.rings), true, &uniform_periodic(res.around), true, None, None, |u, v| {
                let w = big + small * v.cos();
                vec![w * u.cos(), w * u.sin(), small * v.sin()]
            });
            mesh_from_f64(&t.points, t.triangles)
        }
        Family::GenusG { genus } => {
            check_res(res, 1, 20)?;
            let dom = DoubledDomain::new(*genus, 8.0);
            let h = dom.height / res.around as f64;
            let xs = graded_axis(dom.width / 2.0, &dom.x_breaks(), &[], h, h, 0.0);
            let ys = graded_axis(dom.height / 2.0, &dom.y_breaks(), &[], h, h, 0.0);
            let (points, triangles, _) = dom.build(&xs, &ys, 1.0);
            mesh_from_f64(&points, triangles)
        }
        Family::MoebiusBand { half_width } => {
            check_res(res, 3, 2)?;
            let w = positive("half_width", *half_width)?;
            if w >= 1.0 {
                return Err(bad("half_width must be below 1"));
            }
            let (n, m) = (res.rings, res.around);
            let mut points = Vec::with_capacity(n * m);
            for i in 0..n {
                let phi = TAU * i as f64 / n as f64;
                for j in 0..m {
                    let t = -w + 2.0 * w * j as f64 / (m - 1) as f64;
                    let s = 1.0 + t * (phi / 2.0).cos();
                    points.push(vec![s * phi.cos(), s * phi.sin(), t * (phi / 2.0).sin()]);
                }
            }
            // Column n is column 0 read backwards.
            let id = |i: usize, j: usize| if i == n { (m - 1 - j) as u32 } else { (i * m + j) as u32 };
            let mut triangles = Vec::new();
            for i in 0..n {
                for j in 0..m - 1 {
                    let (a, b, c, d) = (id(i, j), id(i + 1, j), id(i + 1, j + 1), id(i, j + 1));
                    triangles.push([a, b, c]);
                    triangles.push([a, c, d]);
                }
            }
            mesh_from_f64(&points, triangles)
        }
        Family::Sphere { radius } => {
            check_res(res, 3, 3)?;
            let r = positive("radius", *radius)?;
            let t = sphere_tensor(r, [0.0; 3], res);
            mesh_from_f64(&t.points, t.triangles)
        }
        Family::TouchingSpheres { radius } => {
            check_res(res, 3, 3)?;
            let r = positive("radius", *radius)?;
            let upper = sphere_tensor(r, [0.0, 0.0, r], res);
            let lower = sphere_tensor(r, [0.0, 0.0, -r], res);
            let contact = upper.end_cap.expect("south pole");
            let shared = lower.start_cap.expect("north pole");
            let mut points = upper.points.clone();
            let mut remap = vec![contact; lower.points.len()];
            for (k, p) in lower.points.iter().enumerate() {
                if k as u32 != shared {
                    remap[k] = points.len() as u32;
                    points.push(p.clone());
                }
            }
            let mut triangles = upper.triangles;
            triangles.extend(lower.triangles.iter().map(|t| t.map(|i| remap[i as usize])));
            let mut m = mesh_from_f64(&points, triangles)?;
            m.set_mark(contact as usize, "contact");
            Ok(m)
        }
        Family::Disc { radius } => {
            check_res(res, 1, 1)?;
            let r = positive("radius", *radius)?;
            let n = res.rings;
            let rings: Vec<(f64, usize)> = (1..=n).map(|i| (r * i as f64 / n as f64, 6 * i)).collect();
            let (points, triangles) = ring_mesh(true, &rings);
            mesh_from_f64(&points, triangles)
        }
    }
}
