//! Normal-form surfaces: a closed base surface punctured at `e` points and
//! re-embedded so that a neighbourhood of each puncture becomes an end with
//! a prescribed tube exponent.
//!
//! Near puncture `xᵢ` the map
//!
//! ```text
//! F(x) = ( …, (x − xᵢ)/‖x − xᵢ‖^{1+βᵢ}, ‖x − xᵢ‖⁻¹, … )
//! ```
//!
//! sends the circle of base radius `s` to a circle of radius `s^{-βᵢ}` at
//! height `1/s`, so the far part of the end grows like `r^{βᵢ}`.

use std::collections::BTreeMap;
use std::f64::consts::{PI, TAU};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::code_model::{code_equiv, make_component_code, BetaVector, CodeError, InnerLipschitzCode, Theta};
use crate::mesh::{
    graded_axis, growth_exponent, mesh_from_f64, mesh_topology, tensor_surface, DoubledDomain, GeodesicGraph,
    GrowthEstimate, Mesh, MeshError, MeshTopology,
};
use crate::rational::Rational;
use crate::scalar::{dist, Real};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum NormalFormError {
    #[error("invalid normal-form spec: {0}")]
    InvalidSpec(String),
    #[error("base surface is unusable: {0}")]
    BadBase(String),
    #[error("punctures {a} and {b} are {distance} apart, closer than 10·r_cut = {limit}")]
    PunctureTooClose { a: usize, b: usize, distance: f64, limit: f64 },
    #[error("end {end} has no usable measurement range (radii {lo} to {hi})")]
    EndTooShort { end: usize, lo: f64, hi: f64 },
    #[error(transparent)]
    Mesh(#[from] MeshError),
    #[error(transparent)]
    Code(#[from] CodeError),
}

/// Requested invariants `(θ, g, β)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawSpec")]
pub struct NormalFormSpec {
    theta: Theta,
    genus: u32,
    beta: BetaVector,
}

#[derive(Deserialize)]
struct RawSpec {
    theta: Theta,
    genus: u32,
    #[serde(default)]
    beta: Vec<Rational>,
}

impl TryFrom<RawSpec> for NormalFormSpec {
    type Error = NormalFormError;
    fn try_from(raw: RawSpec) -> Result<Self, Self::Error> {
        NormalFormSpec::new(raw.theta, raw.genus, raw.beta)
    }
}

impl NormalFormSpec {
    pub fn new(theta: Theta, genus: u32, beta: Vec<Rational>) -> Result<Self, NormalFormError> {
        if let Some(b) = beta.iter().find(|b| **b > Rational::one()) {
            return Err(NormalFormError::InvalidSpec(format!("end exponent {b} exceeds 1")));
        }
        Ok(NormalFormSpec { theta, genus, beta: BetaVector::new(beta) })
    }

    pub fn theta(&self) -> Theta {
        self.theta
    }

    pub fn genus(&self) -> u32 {
        self.genus
    }

    pub fn beta(&self) -> &BetaVector {
        &self.beta
    }

    pub fn end_count(&self) -> usize {
        self.beta.len()
    }
}

/// Single-component code `{θ, g, β, ∅}`.
pub fn normal_form_code(spec: &NormalFormSpec) -> InnerLipschitzCode {
    let comp = make_component_code(spec.theta, spec.genus, spec.beta.as_slice().to_vec(), BTreeMap::new())
        .expect("spec exponents are at most 1");
    InnerLipschitzCode::single(comp)
}

/// Diameter the base models are scaled to.
pub const BASE_DIAMETER: f64 = 1.0;
/// Default puncture cut radius as a fraction of the base diameter.
pub const DEFAULT_R_CUT_FRACTION: f64 = 0.02;
/// Cut radius used when building normal forms for verification.
pub const BUILD_R_CUT_FRACTION: f64 = 0.002;

const GRADING: f64 = 0.12;
const AROUND: usize = 128;

/// Closed base surface with the puncture vertices chosen.
#[derive(Debug, Clone)]
pub struct BaseModel<T> {
    pub mesh: Mesh<T>,
    pub punctures: Vec<usize>,
}

/// Index of the axis value closest to `v`, comparing angles modulo 2π when
/// `periodic`.
fn nearest(axis: &[f64], v: f64, periodic: bool) -> usize {
    let gap = |a: f64| {
        let d = (a - v).abs();
        if periodic {
            d.min(TAU - d)
        } else {
            d
        }
    };
    (0..axis.len()).min_by(|&i, &j| gap(axis[i]).total_cmp(&gap(axis[j]))).expect("non-empty axis")
}

/// Angles in `(-π, π]`.
fn wrap(a: f64) -> f64 {
    let w = a.rem_euclid(TAU);
    if w > PI {
        w - TAU
    } else {
        w
    }
}

/// Periodic axis on `[-π, π)` graded at the given angles.
fn periodic_axis(graded: &[f64], h: f64, h_min: f64) -> Vec<f64> {
    let mut axis = graded_axis(PI, &[], graded, h, h_min, GRADING);
    axis.pop();
    axis
}

fn double_sweep(points: &[Vec<f64>]) -> f64 {
    let far = |from: &[f64]| {
        points
            .iter()
            .map(|p| (dist(from, p), p))
            .max_by(|a, b| a.0.total_cmp(&b.0))
            .expect("non-empty point set")
    };
    let (_, a) = far(&points[0]);
    far(a).0
}

/// Euclidean diameter estimate: farthest vertex from the farthest vertex of
/// vertex 0. Exact for centrally symmetric convex samples, and never more
/// than a factor two off.
pub fn diameter<T: Real>(mesh: &Mesh<T>) -> T {
    let far = |from: usize| {
        (0..mesh.vertex_count())
            .map(|v| (dist(mesh.vertex(from), mesh.vertex(v)), v))
            .fold((T::zero(), from), |a, b| if b.0 > a.0 { b } else { a })
    };
    if mesh.vertex_count() == 0 {
        return T::zero();
    }
    let (_, a) = far(0);
    far(a).0
}

/// Compact model of `N(θ, g)` with `e` puncture vertices, scaled to
/// diameter [`BASE_DIAMETER`]. The mesh is graded towards the punctures
/// finely enough for a cut radius of [`BUILD_R_CUT_FRACTION`].
///
/// Orientable genus 0 and 1 use a round sphere and a torus; other
/// orientable genera double a planar domain with `g` holes. Non-orientable
/// bases are antipodal quotients of the doubled domain embedded in `R⁶`.
pub fn base_model<T: Real>(theta: Theta, genus: u32, ends: usize) -> Result<BaseModel<T>, NormalFormError> {
    let (points, triangles, punctures) = match (theta, genus) {
        (Theta::Orientable, 0) => sphere_base(ends),
        (Theta::Orientable, 1) => torus_base(ends),
        _ => doubled_base(theta, genus, ends),
    };
    let scale = BASE_DIAMETER / double_sweep(&points);
    let scaled: Vec<Vec<f64>> = points.iter().map(|p| p.iter().map(|x| x * scale).collect()).collect();
    Ok(BaseModel { mesh: mesh_from_f64(&scaled, triangles)?, punctures })
}

type RawBase = (Vec<Vec<f64>>, Vec<[u32; 3]>, Vec<usize>);

/// Unit sphere; punctures at the north pole, the south pole, then evenly on
/// the equator.
fn sphere_base(ends: usize) -> RawBase {
    let h_min = 0.1 * BUILD_R_CUT_FRACTION * 2.0;
    let equator: Vec<f64> = (0..ends.saturating_sub(2)).map(|k| wrap(TAU * k as f64 / (ends - 2) as f64)).collect();
    let mut graded_t = Vec::new();
    if ends > 0 {
        graded_t.push(PI / 2.0);
    }
    if !equator.is_empty() {
        graded_t.push(0.0);
    }
    let ts = graded_axis(PI / 2.0, &[], &graded_t, PI / 64.0, h_min, GRADING);
    let thetas: Vec<f64> = ts[1..ts.len() - 1].iter().map(|t| t + PI / 2.0).collect();
    let phis = periodic_axis(&equator, TAU / AROUND as f64, h_min);
    let t = tensor_surface(&thetas, false, &phis, true, Some(vec![0.0, 0.0, 1.0]), Some(vec![0.0, 0.0, -1.0]), |t, p| {
        vec![t.sin() * p.cos(), t.sin() * p.sin(), t.cos()]
    });
    let mut punctures = Vec::with_capacity(ends);
    if ends > 0 {
        punctures.push(t.start_cap.expect("north cap") as usize);
    }
    if ends > 1 {
        punctures.push(t.end_cap.expect("south cap") as usize);
    }
    let row = nearest(&thetas, PI / 2.0, false);
    for &p in &equator {
        punctures.push(t.index(row, nearest(&phis, p, true)) as usize);
    }
    (t.points, t.triangles, punctures)
}

/// Torus with radii 1 and 1/2; punctures evenly on the outer equator.
fn torus_base(ends: usize) -> RawBase {
    let (big, small) = (1.0, 0.5);
    let r_cut = BUILD_R_CUT_FRACTION * 2.0 * (big + small);
    let us: Vec<f64> = (0..ends).map(|j| wrap(TAU * j as f64 / ends as f64)).collect();
    let vs: Vec<f64> = if ends > 0 { vec![0.0] } else { vec![] };
    let u_axis = periodic_axis(&us, TAU / AROUND as f64, 0.1 * r_cut / (big + small));
    let v_axis = periodic_axis(&vs, TAU / (AROUND / 2) as f64, 0.1 * r_cut / small);
    let t = tensor_surface(&u_axis, true, &v_axis, true, None, None, |u, v| {
        let w = big + small * v.cos();
        vec![w * u.cos(), w * u.sin(), small * v.sin()]
    });
    let col = nearest(&v_axis, 0.0, true);
    let punctures = us.iter().map(|&u| t.index(nearest(&u_axis, u, true), col) as usize).collect();
    (t.points, t.triangles, punctures)
}

/// Planar domain with `genus` holes, doubled (orientable) or with antipodal
/// rim points identified (non-orientable). Punctures sit on the top sheet,
/// alternating between the rows `y = ±3`.
fn doubled_base(theta: Theta, genus: u32, ends: usize) -> RawBase {
    let dom = DoubledDomain::new(genus, 16.0);
    let sites: Vec<(f64, f64)> = (0..ends)
        .map(|j| {
            let x = -dom.width / 2.0 + (j as f64 + 0.5) * dom.width / ends as f64;
            (x, if j % 2 == 0 { 3.0 } else { -3.0 })
        })
        .collect();
    let orientable = theta == Theta::Orientable;
    let embed = |x: f64, y: f64| -> Vec<f64> {
        let p = [x, y, dom.height_at(x, y)];
        if orientable {
            p.to_vec()
        } else {
            crate::mesh::veronese(&p)
        }
    };

    // Cut radius in domain units: the embedded diameter over the smallest
    // local stretch at a puncture.
    let h = dom.height / 40.0;
    let coarse_x = graded_axis(dom.width / 2.0, &dom.x_breaks(), &[], 4.0 * h, 4.0 * h, 0.0);
    let coarse_y = graded_axis(dom.height / 2.0, &dom.y_breaks(), &[], 4.0 * h, 4.0 * h, 0.0);
    let mut coarse: Vec<Vec<f64>> = Vec::new();
    for &x in &coarse_x {
        for &y in &coarse_y {
            if dom.boundary_distance(x, y) > 0.0 || x.abs() == dom.width / 2.0 || y.abs() == dom.height / 2.0 {
                coarse.push(embed(x, y));
                if orientable {
                    let mut q = embed(x, y);
                    q[2] = -q[2];
                    coarse.push(q);
                }
            }
        }
    }
    let diam = double_sweep(&coarse);
    let stretch = sites
        .iter()
        .flat_map(|&(x, y)| {
            let d = 1e-4;
            let p = embed(x, y);
            [dist(&p, &embed(x + d, y)) / d, dist(&p, &embed(x, y + d)) / d]
        })
        .fold(f64::INFINITY, f64::min);
    let h_min = if sites.is_empty() { h } else { (0.1 * BUILD_R_CUT_FRACTION * diam / stretch).min(h) };

    let gx: Vec<f64> = sites.iter().map(|s| s.0).collect();
    let gy: Vec<f64> = if sites.is_empty() { vec![] } else { vec![3.0] };
    let xs = graded_axis(dom.width / 2.0, &dom.x_breaks(), &gx, h, h_min, GRADING);
    let ys = graded_axis(dom.height / 2.0, &dom.y_breaks(), &gy, h, h_min, GRADING);
    let (points, triangles, top) = if orientable { dom.build(&xs, &ys, 1.0) } else { dom.build_antipodal(&xs, &ys, 1.0) };
    let punctures = sites.iter().map(|&(x, y)| top[&(nearest(&xs, x, false), nearest(&ys, y, false))] as usize).collect();
    (points, triangles, punctures)
}

/// Punctured image together with what the end measurements need.
struct Embedded<T> {
    mesh: Mesh<T>,
    /// Base vertex → image vertex.
    kept: Vec<Option<u32>>,
    r_cut: T,
    /// Inner distances on the base from each puncture.
    inner: Vec<Vec<Option<T>>>,
}

fn f_map<T: Real>(x: &[T], sites: &[&[T]], beta: &[T]) -> Vec<T> {
    let mut out = Vec::with_capacity((x.len() + 1) * sites.len());
    for (site, &b) in sites.iter().zip(beta) {
        let n = dist(x, site);
        let scale = n.powf(T::one() + b);
        out.extend(x.iter().zip(site.iter()).map(|(&a, &c)| (a - c) / scale));
        out.push(n.recip());
    }
    out
}

fn embed<T: Real>(
    base: &Mesh<T>,
    punctures: &[usize],
    beta: &BetaVector,
    r_cut: Option<T>,
) -> Result<Embedded<T>, NormalFormError> {
    if punctures.len() != beta.len() {
        return Err(NormalFormError::InvalidSpec(format!(
            "{} punctures for {} exponents",
            punctures.len(),
            beta.len()
        )));
    }
    let n = base.vertex_count();
    for (k, &p) in punctures.iter().enumerate() {
        if p >= n {
            return Err(NormalFormError::InvalidSpec(format!("puncture {p} out of range ({n} vertices)")));
        }
        if punctures[..k].contains(&p) {
            return Err(NormalFormError::InvalidSpec(format!("puncture {p} repeated")));
        }
    }
    let topo = mesh_topology(base)?;
    if topo.boundary_components > 0 {
        return Err(NormalFormError::BadBase(format!("{} boundary loops", topo.boundary_components)));
    }
    let r_cut = r_cut.unwrap_or_else(|| T::lit(DEFAULT_R_CUT_FRACTION) * diameter(base));
    if !(r_cut > T::zero()) {
        return Err(NormalFormError::InvalidSpec("r_cut must be positive".into()));
    }
    if punctures.is_empty() {
        return Ok(Embedded { mesh: base.clone(), kept: (0..n as u32).map(Some).collect(), r_cut, inner: vec![] });
    }

    let graph = GeodesicGraph::new(base);
    let inner: Vec<Vec<Option<T>>> = punctures.par_iter().map(|&p| graph.distances_from(p)).collect();
    let limit = T::lit(10.0) * r_cut;
    for i in 0..punctures.len() {
        for j in i + 1..punctures.len() {
            let d = inner[i][punctures[j]].ok_or(MeshError::Disconnected)?;
            if d < limit {
                return Err(NormalFormError::PunctureTooClose {
                    a: i,
                    b: j,
                    distance: d.to_f64_lossy(),
                    limit: limit.to_f64_lossy(),
                });
            }
        }
    }

    let sites: Vec<&[T]> = punctures.iter().map(|&p| base.vertex(p)).collect();
    let betas: Vec<T> = beta.iter().map(Rational::to_real).collect();
    let cut_by: Vec<Option<usize>> =
        base.vertices().map(|x| sites.iter().position(|s| dist(x, s) <= r_cut)).collect();
    let dim = (base.dim() + 1) * punctures.len();
    let image = base.map_vertices(dim, |x| {
        if sites.iter().any(|s| dist(x, s) <= r_cut) {
            vec![T::zero(); dim]
        } else {
            f_map(x, &sites, &betas)
        }
    });
    let keep: Vec<bool> = cut_by.iter().map(Option::is_none).collect();
    let (mut mesh, kept) = image.retain_vertices(&keep);
    for tri in base.triangles() {
        if let Some(end) = tri.iter().find_map(|&v| cut_by[v as usize]) {
            for &v in tri {
                if let Some(new) = kept[v as usize] {
                    mesh.set_mark(new as usize, format!("end:{end}"));
                }
            }
        }
    }
    Ok(Embedded { mesh, kept, r_cut, inner })
}

/// Apply the puncture map to a closed base mesh. Vertices within `r_cut`
/// of a puncture (default: 2% of the base diameter) are removed, and the
/// new boundary vertices of end `i` are marked `end:i`.
pub fn puncture_embed<T: Real>(
    base: &Mesh<T>,
    punctures: &[usize],
    beta: &BetaVector,
    r_cut: Option<T>,
) -> Result<Mesh<T>, NormalFormError> {
    Ok(embed(base, punctures, beta, r_cut)?.mesh)
}

/// Region of the image where one end is measured.
#[derive(Debug, Clone, Serialize)]
pub struct EndZone<T> {
    pub beta: Rational,
    /// Image of the puncture with its own block removed: the point the end
    /// recedes from.
    pub centre: Vec<T>,
    /// Image vertices forming a collar of the end.
    pub vertices: Vec<usize>,
    /// Link radii about `centre`, increasing, whose level sets lie inside
    /// the collar.
    pub radii: Vec<T>,
}

#[derive(Debug, Clone)]
pub struct NormalFormMesh<T> {
    pub mesh: Mesh<T>,
    pub ends: Vec<EndZone<T>>,
    pub r_cut: T,
}

impl<T: Real> NormalFormMesh<T> {
    /// A closed surface with no ends, e.g. a base model taken as is.
    pub fn closed(mesh: Mesh<T>) -> Self {
        NormalFormMesh { mesh, ends: vec![], r_cut: T::zero() }
    }
}

const RADII: usize = 8;
/// Largest tolerated ratio between the drift of the other blocks and the
/// radius of an end's own circle.
const CROSSTALK: f64 = 0.15;

fn end_zone<T: Real>(base: &Mesh<T>, emb: &Embedded<T>, punctures: &[usize], beta: &BetaVector, i: usize) -> Result<EndZone<T>, NormalFormError> {
    let site = base.vertex(punctures[i]);
    let b = beta.as_slice()[i].to_real::<T>();
    let s_of = |v: usize| dist(base.vertex(v), site);
    let geo = &emb.inner[i];

    let min_sep = (0..punctures.len())
        .filter(|&j| j != i)
        .map(|j| dist(base.vertex(punctures[j]), site))
        .fold(T::infinity(), T::min);
    let fold_ratio = T::lit(1.3);
    let s_fold = (0..base.vertex_count())
        .filter(|&v| v != punctures[i])
        .filter(|&v| geo[v].is_some_and(|g| g > fold_ratio * s_of(v)))
        .map(s_of)
        .fold(T::infinity(), T::min);
    let s_zone = (T::lit(0.4) * min_sep).min(T::lit(0.8) * s_fold).min(T::lit(0.5) * diameter(base));

    let zone: Vec<(usize, usize)> = (0..base.vertex_count())
        .filter(|&v| s_of(v) < s_zone && geo[v].is_some_and(|g| g < fold_ratio * s_zone))
        .filter_map(|v| emb.kept[v].map(|n| (v, n as usize)))
        .collect();

    let block = base.dim() + 1;
    let sites: Vec<&[T]> = punctures.iter().map(|&p| base.vertex(p)).collect();
    let betas: Vec<T> = beta.iter().map(Rational::to_real).collect();
    // Every other block evaluated at the puncture, this end's block zero.
    let mut centre = f_map(site, &sites, &betas);
    centre[i * block..(i + 1) * block].fill(T::zero());
    let others = |p: &[T]| -> Vec<T> {
        p.iter().enumerate().filter(|(k, _)| k / block != i).map(|(_, &x)| x).collect()
    };
    let c_others = others(&centre);
    let drift = zone
        .iter()
        .map(|&(v, n)| dist(&others(emb.mesh.vertex(n)), &c_others) / s_of(v))
        .fold(T::zero(), T::max);
    let mut s_hi = s_zone / T::lit(1.5);
    if drift > T::zero() {
        let p = (T::one() + b).max(T::lit(0.25));
        s_hi = s_hi.min((T::lit(CROSSTALK) / drift).powf(p.recip()));
    }
    // The link sits at distance ≈ √(r² + r^{2β}) with r = 1/s; keep the
    // log-slope of that against r within 1% of one.
    let lean = b * (T::one() - b);
    if lean > T::lit(0.01) {
        s_hi = s_hi.min((T::lit(100.0) * lean).powf(-(T::lit(2.0) - T::lit(2.0) * b).recip()));
    }
    let s_lo = T::lit(1.5) * emb.r_cut;

    let rho = |n: usize| dist(emb.mesh.vertex(n), &centre);
    let r_min = T::lit(1.05) * zone.iter().filter(|&&(v, _)| s_of(v) >= s_hi).map(|&(_, n)| rho(n)).fold(T::zero(), T::max);
    let r_max = zone.iter().filter(|&&(v, _)| s_of(v) <= s_lo).map(|&(_, n)| rho(n)).fold(T::infinity(), T::min) / T::lit(1.05);
    if !(r_min > T::zero() && r_max.is_finite() && r_max > T::lit(1.5) * r_min) {
        return Err(NormalFormError::EndTooShort { end: i, lo: r_min.to_f64_lossy(), hi: r_max.to_f64_lossy() });
    }
    let q = (r_max / r_min).ln() / T::from_usize_lossy(RADII - 1);
    let radii = (0..RADII).map(|k| r_min * (q * T::from_usize_lossy(k)).exp()).collect();
    Ok(EndZone { beta: beta.as_slice()[i].clone(), centre, vertices: zone.iter().map(|&(_, n)| n).collect(), radii })
}

/// Base model for the spec, punctured and re-embedded, with a measurement
/// collar for every end. Uses a cut radius of [`BUILD_R_CUT_FRACTION`] of
/// the base diameter.
pub fn build_normal_form<T: Real>(spec: &NormalFormSpec) -> Result<NormalFormMesh<T>, NormalFormError> {
    let base: BaseModel<T> = base_model(spec.theta, spec.genus, spec.end_count())?;
    let r_cut = T::lit(BUILD_R_CUT_FRACTION) * diameter(&base.mesh);
    let emb = embed(&base.mesh, &base.punctures, &spec.beta, Some(r_cut))?;
    let ends = (0..spec.end_count())
        .into_par_iter()
        .map(|i| end_zone(&base.mesh, &emb, &base.punctures, &spec.beta, i))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(NormalFormMesh { mesh: emb.mesh, ends, r_cut })
}

/// One invariant compared against the spec.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub measured: String,
    pub expected: String,
    pub tolerance: Option<f64>,
    pub pass: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct NormalFormReport<T> {
    pub spec: NormalFormSpec,
    pub topology: MeshTopology,
    pub ends: Vec<GrowthEstimate<T>>,
    pub checks: Vec<Check>,
}

impl<T> NormalFormReport<T> {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }
}

/// Tolerance on each measured end exponent.
pub const EXPONENT_TOL: f64 = 0.1;

/// Compare a built surface with the spec: orientability, genus, number of
/// ends, each end's growth exponent, and the assembled code.
pub fn verify_against<T: Real>(spec: &NormalFormSpec, nf: &NormalFormMesh<T>) -> Result<NormalFormReport<T>, NormalFormError> {
    let topology = mesh_topology(&nf.mesh)?;
    let ends = nf
        .ends
        .par_iter()
        .map(|end| {
            let mut keep = vec![false; nf.mesh.vertex_count()];
            for &v in &end.vertices {
                keep[v] = true;
            }
            let (collar, _) = nf.mesh.retain_vertices(&keep);
            growth_exponent(&collar, &end.centre, &end.radii)
        })
        .collect::<Result<Vec<_>, _>>()?;

    let check = |name: &str, measured: String, expected: String, tolerance: Option<f64>, pass: bool| Check {
        name: name.to_string(),
        measured,
        expected,
        tolerance,
        pass,
    };
    let mut checks = vec![
        check("theta", topology.theta.to_string(), spec.theta.to_string(), None, topology.theta == spec.theta),
        check("genus", topology.genus.to_string(), spec.genus.to_string(), None, topology.genus == spec.genus),
        check(
            "ends",
            topology.boundary_components.to_string(),
            spec.end_count().to_string(),
            None,
            topology.boundary_components == spec.end_count() && nf.ends.len() == spec.end_count(),
        ),
    ];
    for (k, want) in spec.beta.iter().enumerate() {
        let (measured, pass) = match (ends.get(k), nf.ends.get(k)) {
            (Some(est), Some(zone)) if zone.beta == *want => {
                let slope = est.slope.to_f64_lossy();
                (format!("{slope:.4}"), (slope - want.to_f64()).abs() <= EXPONENT_TOL)
            }
            _ => ("missing".to_string(), false),
        };
        checks.push(check(&format!("end:{k}"), measured, want.to_string(), Some(EXPONENT_TOL), pass));
    }

    let rounded: Option<Vec<Rational>> = ends.iter().map(|e| e.rounded.clone()).collect();
    let measured_code = rounded.and_then(|betas| {
        make_component_code(topology.theta, topology.genus, betas, BTreeMap::new()).ok().map(InnerLipschitzCode::single)
    });
    let expected_code = normal_form_code(spec);
    let code_pass = measured_code.as_ref().is_some_and(|c| code_equiv(c, &expected_code).is_some());
    checks.push(check(
        "code",
        measured_code.map_or_else(|| "unrounded".to_string(), |c| c.to_json()),
        expected_code.to_json(),
        None,
        code_pass,
    ));
    Ok(NormalFormReport { spec: spec.clone(), topology, ends, checks })
}

/// Build the normal form of `spec` and check it against the spec.
pub fn verify_normal_form<T: Real>(spec: &NormalFormSpec) -> Result<NormalFormReport<T>, NormalFormError> {
    if spec.genus > 3 || spec.end_count() > 4 {
        return Err(NormalFormError::InvalidSpec("verification supports genus ≤ 3 and at most 4 ends".into()));
    }
    verify_against(spec, &build_normal_form(spec)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(theta: i64, genus: u32, beta: &[(i64, i64)]) -> NormalFormSpec {
        NormalFormSpec::new(
            Theta::from_sign(theta).unwrap(),
            genus,
            beta.iter().map(|&(p, q)| Rational::new(p, q)).collect(),
        )
        .unwrap()
    }

    #[test]
    fn spec_rejects_exponents_above_one() {
        let err = NormalFormSpec::new(Theta::Orientable, 0, vec![Rational::new(3, 2)]).unwrap_err();
        assert!(matches!(err, NormalFormError::InvalidSpec(_)));
        let s: NormalFormSpec = serde_json::from_str(r#"{"theta": 1, "genus": 0, "beta": ["1", "1/2"]}"#).unwrap();
        assert_eq!(s.beta().as_slice(), &[Rational::new(1, 2), Rational::one()]);
    }

    #[test]
    fn code_of_a_spec() {
        let c = normal_form_code(&spec(1, 2, &[]));
        assert_eq!(c.components().len(), 1);
        assert_eq!((c.components()[0].theta(), c.components()[0].genus(), c.components()[0].end_count()), (Theta::Orientable, 2, 0));
    }

    #[test]
    fn base_models_have_the_requested_topology() {
        for (theta, genus, ends) in [(1, 0, 3), (1, 1, 2), (1, 2, 1), (-1, 0, 1), (-1, 1, 2)] {
            let t = Theta::from_sign(theta).unwrap();
            let b: BaseModel<f64> = base_model(t, genus, ends).unwrap();
            let topo = mesh_topology(&b.mesh).unwrap();
            assert_eq!((topo.theta, topo.genus, topo.boundary_components), (t, genus, 0), "{theta} {genus}");
            assert_eq!(b.punctures.len(), ends);
            let d = diameter(&b.mesh);
            assert!((d - BASE_DIAMETER).abs() < 0.01 * BASE_DIAMETER, "{d}");
        }
    }

    #[test]
    fn puncturing_removes_discs_and_marks_ends() {
        let b: BaseModel<f64> = base_model(Theta::Orientable, 0, 2).unwrap();
        let beta = BetaVector::new(vec![Rational::one(), Rational::new(1, 2)]);
        let m = puncture_embed(&b.mesh, &b.punctures, &beta, None).unwrap();
        assert_eq!(m.dim(), 8);
        assert!(m.vertex_count() < b.mesh.vertex_count());
        let topo = mesh_topology(&m).unwrap();
        assert_eq!((topo.genus, topo.boundary_components), (0, 2));
        assert!(!m.marked("end:0").is_empty() && !m.marked("end:1").is_empty());
    }

    #[test]
    fn no_punctures_leaves_the_base_alone() {
        let b: BaseModel<f64> = base_model(Theta::Orientable, 1, 0).unwrap();
        let m = puncture_embed(&b.mesh, &[], &BetaVector::default(), None).unwrap();
        assert_eq!(m, b.mesh);
    }

    #[test]
    fn puncture_errors() {
        let b: BaseModel<f64> = base_model(Theta::Orientable, 0, 2).unwrap();
        let one = BetaVector::ones(1);
        assert!(matches!(puncture_embed(&b.mesh, &b.punctures, &one, None), Err(NormalFormError::InvalidSpec(_))));
        let two = BetaVector::ones(2);
        let huge = Some(0.2);
        assert!(matches!(
            puncture_embed(&b.mesh, &b.punctures, &two, huge),
            Err(NormalFormError::PunctureTooClose { a: 0, b: 1, .. })
        ));
        let same = [b.punctures[0], b.punctures[0]];
        assert!(matches!(puncture_embed(&b.mesh, &same, &two, None), Err(NormalFormError::InvalidSpec(_))));
    }

    #[test]
    fn sphere_base_fails_a_non_orientable_spec() {
        let b: BaseModel<f64> = base_model(Theta::Orientable, 0, 0).unwrap();
        let r = verify_against(&spec(-1, 0, &[]), &NormalFormMesh::closed(b.mesh)).unwrap();
        assert!(!r.passed());
        let theta = r.checks.iter().find(|c| c.name == "theta").unwrap();
        assert!(!theta.pass);
        assert!(r.checks.iter().find(|c| c.name == "genus").unwrap().pass);
    }
}
