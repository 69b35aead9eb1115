//! Contact exponent at infinity between two unbounded arcs.
//!
//! For `K > 1` the annulus `A^K_r = {y : r/K <= |y| <= K r}` cuts each arc
//! into pieces; `f^K(r)` is the Euclidean distance between the two pieces.
//! The contact exponent is the growth order of `f^K` in `r`, estimated here
//! by a log-log fit over a geometric grid of radii and snapped to a small
//! rational.

mod parser;

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::puiseux::PuiseuxExpr;
use crate::rational::{rational_round, Rational};
use crate::regression::fit_power_law;
use crate::scalar::{dist, Real};

pub use parser::ParseError;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ContactError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("curve norm does not diverge (largest leading exponent {0})")]
    UnboundedCheckFailed(String),
    #[error("start parameter must be positive")]
    BadStart,
    #[error("curve has no points with norm in [{lo}, {hi}]")]
    EmptyAnnulus { lo: f64, hi: f64 },
    #[error("radius grid too small: need at least 6 radii spanning 3 decades")]
    GridTooSmall,
    #[error("annulus factor K must exceed 1")]
    BadK,
}

/// Parametrized arc `t ↦ (x_1(t), …, x_n(t))`, `t ∈ [t0, ∞)`, each coordinate
/// a finite Puiseux sum.
#[derive(Debug, Clone, PartialEq)]
pub struct CurveSampler<T> {
    coords: Vec<PuiseuxExpr<T>>,
    t0: T,
}

impl<T: Real> CurveSampler<T> {
    pub fn new(coords: Vec<PuiseuxExpr<T>>, t0: T) -> Result<Self, ContactError> {
        if !(t0 > T::zero()) {
            return Err(ContactError::BadStart);
        }
        let lead = coords.iter().filter_map(|c| c.leading().map(|(_, q)| q.clone())).max();
        match lead {
            Some(q) if q.is_positive() => Ok(CurveSampler { coords, t0 }),
            Some(q) => Err(ContactError::UnboundedCheckFailed(q.to_string())),
            None => Err(ContactError::UnboundedCheckFailed("none".into())),
        }
    }

    /// Parse the curve grammar; `@ t0` defaults to 1.
    pub fn parse(text: &str) -> Result<Self, ContactError> {
        let parsed = parser::parse::<T>(text)?;
        Self::new(parsed.coords, parsed.t0.unwrap_or_else(T::one))
    }

    pub fn coords(&self) -> &[PuiseuxExpr<T>] {
        &self.coords
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn t0(&self) -> T {
        self.t0
    }

    pub fn eval(&self, t: T) -> Vec<T> {
        self.coords.iter().map(|c| c.eval(t)).collect()
    }

    pub fn norm_at(&self, t: T) -> T {
        self.coords.iter().map(|c| c.eval(t)).map(|x| x * x).sum::<T>().sqrt()
    }

    /// Image under the linear map with the given rows.
    pub fn transformed(&self, rows: &[Vec<T>]) -> Result<Self, ContactError> {
        let coords = rows
            .iter()
            .map(|row| {
                row.iter()
                    .zip(&self.coords)
                    .fold(PuiseuxExpr::zero(), |acc, (&a, c)| acc.plus(&c.scaled(a)))
            })
            .collect();
        Self::new(coords, self.t0)
    }

    /// Limit of `γ(t)/|γ(t)|`: the normalized leading coefficients of the
    /// coordinates that share the top exponent.
    pub fn limit_direction(&self) -> Vec<T> {
        let top = self.coords.iter().filter_map(|c| c.leading().map(|(_, q)| q.clone())).max();
        let v: Vec<T> = self
            .coords
            .iter()
            .map(|c| match (c.leading(), &top) {
                (Some((coef, q)), Some(t)) if q == t => coef,
                _ => T::zero(),
            })
            .collect();
        let n = v.iter().map(|&x| x * x).sum::<T>().sqrt();
        v.into_iter().map(|x| x / n).collect()
    }
}

/// Tunables of the annulus-distance evaluation.
#[derive(Debug, Clone, Copy)]
pub struct AnnulusOptions {
    /// Scan points used to locate the parameter intervals inside the annulus.
    pub scan_points: usize,
    /// Samples per parameter interval; at least 200.
    pub samples_per_run: usize,
    /// Local minima of the sampled distance that get refined.
    pub refine_candidates: usize,
}

impl Default for AnnulusOptions {
    fn default() -> Self {
        AnnulusOptions { scan_points: 4096, samples_per_run: 400, refine_candidates: 4 }
    }
}

struct Piece<T> {
    ts: Vec<T>,
    pts: Vec<Vec<T>>,
}

fn bisect_boundary<T: Real>(c: &CurveSampler<T>, mut inside: T, mut outside: T, lo: T, hi: T) -> T {
    for _ in 0..80 {
        let mid = (inside + outside) / T::lit(2.0);
        let n = c.norm_at(mid);
        if n >= lo && n <= hi {
            inside = mid;
        } else {
            outside = mid;
        }
    }
    inside
}

/// Parameter samples of `c` whose images lie in `lo <= |y| <= hi`, grouped
/// into maximal intervals.
fn annulus_pieces<T: Real>(c: &CurveSampler<T>, lo: T, hi: T, opts: &AnnulusOptions) -> Vec<Piece<T>> {
    let two = T::lit(2.0);
    let mut t_hi = c.t0;
    let mut guard = 0;
    while c.norm_at(t_hi) <= hi && guard < 4000 {
        t_hi = t_hi * two;
        guard += 1;
    }
    t_hi = t_hi * two;
    let n = opts.scan_points.max(16);
    let ratio = (t_hi / c.t0).ln();
    let scan: Vec<T> = (0..n)
        .map(|i| c.t0 * (ratio * T::from_usize_lossy(i) / T::from_usize_lossy(n - 1)).exp())
        .collect();
    let inside: Vec<bool> = scan
        .iter()
        .map(|&t| {
            let r = c.norm_at(t);
            r >= lo && r <= hi
        })
        .collect();

    let mut pieces = Vec::new();
    let mut i = 0;
    while i < n {
        if !inside[i] {
            i += 1;
            continue;
        }
        let start = i;
        while i + 1 < n && inside[i + 1] {
            i += 1;
        }
        let end = i;
        let a = if start == 0 { scan[0] } else { bisect_boundary(c, scan[start], scan[start - 1], lo, hi) };
        let b = if end == n - 1 { scan[n - 1] } else { bisect_boundary(c, scan[end], scan[end + 1], lo, hi) };
        let m = opts.samples_per_run.max(200);
        let span = (b / a).ln();
        let ts: Vec<T> = (0..m)
            .map(|k| {
                let t = a * (span * T::from_usize_lossy(k) / T::from_usize_lossy(m - 1)).exp();
                t.max(a).min(b)
            })
            .collect();
        let pts = ts.iter().map(|&t| c.eval(t)).collect();
        pieces.push(Piece { ts, pts });
        i += 1;
    }
    pieces
}

/// Golden-section minimization of a unimodal function on `[a, b]`.
fn golden_min<T: Real>(mut a: T, mut b: T, f: impl Fn(T) -> T) -> (T, T) {
    let g = T::lit(0.618_033_988_749_894_8);
    let mut x1 = b - g * (b - a);
    let mut x2 = a + g * (b - a);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    for _ in 0..90 {
        if f1 <= f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - g * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + g * (b - a);
            f2 = f(x2);
        }
    }
    let (fa, fb) = (f(a), f(b));
    let mut best = if f1 <= f2 { (x1, f1) } else { (x2, f2) };
    if fa < best.1 {
        best = (a, fa);
    }
    if fb < best.1 {
        best = (b, fb);
    }
    best
}

fn one_sided_distance<T: Real>(
    c1: &CurveSampler<T>,
    c2: &CurveSampler<T>,
    k: T,
    r: T,
    opts: &AnnulusOptions,
) -> Result<T, ContactError> {
    let (lo, hi) = (r / k, r * k);
    let empty = || ContactError::EmptyAnnulus { lo: lo.to_f64_lossy(), hi: hi.to_f64_lossy() };
    let p1 = annulus_pieces(c1, lo, hi, opts);
    let p2 = annulus_pieces(c2, lo, hi, opts);
    if p1.is_empty() || p2.is_empty() {
        return Err(empty());
    }

    let mut best = T::infinity();
    for a in &p1 {
        for b in &p2 {
            // Nearest sample of `b` for every sample of `a`.
            let nearest: Vec<(usize, T)> = a
                .pts
                .iter()
                .map(|pa| {
                    b.pts
                        .iter()
                        .enumerate()
                        .map(|(j, pb)| (j, dist(pa, pb)))
                        .fold((0, T::infinity()), |acc, x| if x.1 < acc.1 { x } else { acc })
                })
                .collect();
            let raw = nearest.iter().map(|x| x.1).fold(T::infinity(), T::min);
            best = best.min(raw);

            // Refine the deepest local minima along `a` by nested golden search
            // over the neighbouring parameter cells.
            let mut minima: Vec<usize> = (0..nearest.len())
                .filter(|&i| {
                    let d = nearest[i].1;
                    (i == 0 || d <= nearest[i - 1].1) && (i + 1 == nearest.len() || d <= nearest[i + 1].1)
                })
                .collect();
            minima.sort_by(|&x, &y| nearest[x].1.partial_cmp(&nearest[y].1).unwrap_or(std::cmp::Ordering::Equal));
            for &i in minima.iter().take(opts.refine_candidates) {
                let j = nearest[i].0;
                let (a_lo, a_hi) = (a.ts[i.saturating_sub(1)], a.ts[(i + 1).min(a.ts.len() - 1)]);
                let (b_lo, b_hi) = (b.ts[j.saturating_sub(1)], b.ts[(j + 1).min(b.ts.len() - 1)]);
                let inner = |s: T| {
                    let ps = c1.eval(s);
                    golden_min(b_lo, b_hi, |t| dist(&ps, &c2.eval(t))).1
                };
                let (_, d) = golden_min(a_lo, a_hi, inner);
                best = best.min(d);
            }
        }
    }
    Ok(best)
}

/// `f^K(r)`: distance between the parts of the two curves inside the annulus
/// `r/K <= |y| <= K r`. Symmetric in its curve arguments.
pub fn annulus_distance<T: Real>(
    c1: &CurveSampler<T>,
    c2: &CurveSampler<T>,
    k: T,
    r: T,
    opts: &AnnulusOptions,
) -> Result<T, ContactError> {
    if !(k > T::one()) {
        return Err(ContactError::BadK);
    }
    let d12 = one_sided_distance(c1, c2, k, r, opts)?;
    let d21 = one_sided_distance(c2, c1, k, r, opts)?;
    Ok(d12.min(d21))
}

/// Estimated contact exponent.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum ContactValue {
    /// The curves meet in an unbounded set.
    NegInfinity,
    Finite(Rational),
}

#[derive(Debug, Clone, Serialize)]
pub struct ContactEstimate<T> {
    /// Mean of the per-K slopes; `-inf` for coincident curves.
    pub slope: T,
    /// Present only when the fit is tight and a small rational is nearby.
    pub rounded: Option<ContactValue>,
    /// Largest RMS residual of the per-K log-log fits.
    pub residual: T,
    pub per_k: Vec<(T, T)>,
}

#[derive(Debug, Clone)]
pub struct ContactOptions<T> {
    pub abs_tol: T,
    pub residual_tol: T,
    pub round_tol: T,
    pub max_den: u64,
    pub annulus: AnnulusOptions,
}

impl<T: Real> Default for ContactOptions<T> {
    fn default() -> Self {
        ContactOptions {
            abs_tol: T::lit(1e-9),
            residual_tol: T::lit(0.05),
            round_tol: T::lit(0.05),
            max_den: 16,
            annulus: AnnulusOptions::default(),
        }
    }
}

/// `r = 10 · 2^j`, `j = 0..12`.
pub fn default_radii<T: Real>() -> Vec<T> {
    geometric_grid(T::lit(10.0), T::lit(2.0), 12)
}

pub fn default_ks<T: Real>() -> Vec<T> {
    vec![T::lit(2.0), T::lit(3.0), T::lit(4.0)]
}

pub fn geometric_grid<T: Real>(start: T, factor: T, count: usize) -> Vec<T> {
    (0..count).map(|j| start * factor.powi(j as i32)).collect()
}

pub fn estimate_contact<T: Real>(
    c1: &CurveSampler<T>,
    c2: &CurveSampler<T>,
    ks: &[T],
    radii: &[T],
    opts: &ContactOptions<T>,
) -> Result<ContactEstimate<T>, ContactError> {
    let (rmin, rmax) = radii
        .iter()
        .fold((T::infinity(), T::neg_infinity()), |(a, b), &r| (a.min(r), b.max(r)));
    if radii.len() < 6 || !(rmin > T::zero()) || rmax / rmin < T::lit(999.999) {
        return Err(ContactError::GridTooSmall);
    }
    if ks.is_empty() || ks.iter().any(|&k| !(k > T::one())) {
        return Err(ContactError::BadK);
    }
    let mut sorted = radii.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).unwrap_or(std::cmp::Ordering::Equal));

    let jobs: Vec<(usize, usize)> = (0..ks.len()).flat_map(|a| (0..sorted.len()).map(move |b| (a, b))).collect();
    let values: Vec<T> = jobs
        .par_iter()
        .map(|&(ki, ri)| annulus_distance(c1, c2, ks[ki], sorted[ri], &opts.annulus))
        .collect::<Result<_, _>>()?;
    let table: Vec<&[T]> = values.chunks(sorted.len()).collect();

    let coincident = table.iter().all(|row| row[row.len() - 2..].iter().all(|&f| f < opts.abs_tol));
    if coincident {
        return Ok(ContactEstimate {
            slope: T::neg_infinity(),
            rounded: Some(ContactValue::NegInfinity),
            residual: T::zero(),
            per_k: ks.iter().map(|&k| (k, T::neg_infinity())).collect(),
        });
    }

    let mut per_k = Vec::with_capacity(ks.len());
    let mut residual = T::zero();
    for (row, &k) in table.iter().zip(ks) {
        let (xs, ys): (Vec<T>, Vec<T>) =
            sorted.iter().zip(row.iter()).filter(|(_, &f)| f > T::zero()).map(|(&r, &f)| (r, f)).unzip();
        match (xs.len() >= 3).then(|| fit_power_law(&xs, &ys)).flatten() {
            Some(fit) => {
                per_k.push((k, fit.slope));
                residual = residual.max(fit.rms_residual);
            }
            None => {
                per_k.push((k, T::nan()));
                residual = T::infinity();
            }
        }
    }
    let slope = per_k.iter().map(|p| p.1).sum::<T>() / T::from_usize_lossy(per_k.len());
    let rounded = if residual <= opts.residual_tol {
        rational_round(slope, opts.max_den, opts.round_tol).ok().map(ContactValue::Finite)
    } else {
        None
    };
    Ok(ContactEstimate { slope, rounded, residual, per_k })
}

/// Whether the two tangent cones at infinity differ: the angle between the
/// limit directions exceeds `angle_tol` radians. Curves of different ambient
/// dimension are compared after padding with zeros.
pub fn cones_differ<T: Real>(c1: &CurveSampler<T>, c2: &CurveSampler<T>, angle_tol: T) -> bool {
    let mut d1 = c1.limit_direction();
    let mut d2 = c2.limit_direction();
    let n = d1.len().max(d2.len());
    d1.resize(n, T::zero());
    d2.resize(n, T::zero());
    let dot: T = d1.iter().zip(&d2).map(|(&a, &b)| a * b).sum();
    dot.max(-T::one()).min(T::one()).acos() > angle_tol
}
