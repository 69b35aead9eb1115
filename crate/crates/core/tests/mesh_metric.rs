use horncode::mesh::{generate_surface, inner_distance, lne_constant, Family, GeodesicGraph, Mesh, MeshError, Resolution};
use horncode::Rational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;

fn euclid(m: &Mesh<f64>, p: usize, q: usize) -> f64 {
    m.vertex(p).iter().zip(m.vertex(q)).map(|(a, b)| (a - b) * (a - b)).sum::<f64>().sqrt()
}

fn strip(beta: Rational, x_max: f64, res: Resolution) -> Mesh<f64> {
    generate_surface(&Family::Strip { beta, x_min: 1.0, x_max }, res).unwrap()
}

#[test]
fn metric_axioms_on_random_triples() {
    let m: Mesh<f64> = generate_surface(&Family::Torus { major: 1.0, minor: 0.4 }, Resolution { rings: 48, around: 24 }).unwrap();
    let g = GeodesicGraph::new(&m);
    let n = m.vertex_count();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    // Full distance rows from a pool of sources keep the run short.
    let pool: Vec<usize> = (0..40).map(|_| rng.gen_range(0..n)).collect();
    let rows: Vec<Vec<f64>> = pool.iter().map(|&s| g.distances_from::<f64>(s).into_iter().map(Option::unwrap).collect()).collect();
    for _ in 0..1000 {
        let (i, j) = (rng.gen_range(0..pool.len()), rng.gen_range(0..pool.len()));
        let (p, q, r) = (pool[i], pool[j], rng.gen_range(0..n));
        let dpq = rows[i][q];
        assert_eq!(dpq, rows[j][p], "symmetry {p} {q}");
        assert_eq!(dpq, g.distance::<f64>(q, p).unwrap());
        assert_eq!(dpq == 0.0, p == q);
        assert!(rows[i][r] <= dpq + rows[j][r], "triangle {p} {q} {r}");
        assert!(dpq >= euclid(&m, p, q) * (1.0 - 1e-12), "shorter than a chord");
    }
    assert_eq!(inner_distance(&m, 5, 5).unwrap(), 0.0);
}

#[test]
fn antipodal_points_on_a_cylinder() {
    let around = 256;
    let m: Mesh<f64> = generate_surface(&Family::Cylinder { radius: 1.0, half_length: 2.0 }, Resolution::square(around)).unwrap();
    // The ring closest to z = 0; vertex j sits at angle 2πj/around.
    let ring = (0..around).min_by(|&a, &b| m.vertex(a * around)[2].abs().total_cmp(&m.vertex(b * around)[2].abs())).unwrap();
    let p = ring * around;
    let d: f64 = inner_distance(&m, p, p + around / 2).unwrap();
    assert!((d / PI - 1.0).abs() < 0.05, "{d}");
}

fn refinement_families() -> Vec<(Family, Resolution)> {
    vec![
        (Family::Torus { major: 1.0, minor: 0.4 }, Resolution { rings: 24, around: 12 }),
        (Family::Horn { beta: Rational::from_integer(2), height: 1.0 }, Resolution { rings: 16, around: 12 }),
        (Family::Sphere { radius: 1.0 }, Resolution { rings: 12, around: 16 }),
        (Family::Strip { beta: Rational::new(1, 2), x_min: 1.0, x_max: 20.0 }, Resolution { rings: 8, around: 4 }),
        (Family::Disc { radius: 1.0 }, Resolution { rings: 6, around: 24 }),
    ]
}

/// Largest relative increase and decrease of vertex distances after one
/// midpoint subdivision, over all sources.
fn refinement_change(family: &Family, res: Resolution, per_edge: usize, unfold: bool) -> (f64, f64) {
    let coarse: Mesh<f64> = generate_surface(family, res).unwrap();
    let fine = coarse.subdivided();
    let gc = GeodesicGraph::with_steiner_points(&coarse, per_edge, unfold);
    let gf = GeodesicGraph::with_steiner_points(&fine, per_edge, unfold);
    let n = coarse.vertex_count();
    let (mut up, mut down) = (0f64, 0f64);
    for s in 0..n {
        let (dc, df) = (gc.distances_from::<f64>(s), gf.distances_from::<f64>(s));
        for v in (0..n).filter(|&v| v != s) {
            // One quantum per coarse segment is the rounding allowance.
            let slack = 64.0 * gf.quantum();
            let (c, f) = (dc[v].unwrap(), df[v].unwrap());
            up = up.max((f - slack - c).max(0.0) / c);
            down = down.max((c - f) / c);
        }
    }
    (up, down)
}

#[test]
fn midpoint_graph_is_monotone_under_refinement() {
    // Segments between vertices and edge midpoints are unions of segments
    // of the subdivided mesh, so distances can only shrink.
    for (family, res) in refinement_families() {
        let (up, down) = refinement_change(&family, res, 1, false);
        assert!(up <= 1e-9, "{family:?}: grew by {up}");
        assert!(down <= 0.05, "{family:?}: shrank by {down}");
    }
}

#[test]
fn default_graph_is_nearly_monotone_under_refinement() {
    for (family, res) in refinement_families() {
        let (up, down) = refinement_change(&family, res, 2, true);
        assert!(up <= 0.02, "{family:?}: grew by {up}");
        assert!(down <= 0.05, "{family:?}: shrank by {down}");
    }
}

#[test]
fn convex_strip_is_nearly_flat() {
    let m = strip(Rational::new(1, 2), 400.0, Resolution { rings: 2, around: 8 });
    let c: f64 = lne_constant(&m, 10_000, 1).unwrap();
    assert!((1.0..=1.05).contains(&c), "{c}");
}

#[test]
fn cusp_strip_stays_within_two() {
    let m = strip(Rational::from_integer(-1), 1000.0, Resolution { rings: 400, around: 8 });
    let c: f64 = lne_constant(&m, 10_000, 1).unwrap();
    assert!((1.0..=2.05).contains(&c), "{c}");
    // Lower and upper boundary points far out, a short chord apart.
    let (lower, upper) = (m.marked("lower"), m.marked("upper"));
    let (p, q) = (*lower.last().unwrap(), upper[upper.len() - 2]);
    let d: f64 = inner_distance(&m, p, q).unwrap();
    assert!(d <= 2.0 * euclid(&m, p, q), "{d}");
}

#[test]
fn flat_disc() {
    let m: Mesh<f64> = generate_surface(&Family::Disc { radius: 1.0 }, Resolution { rings: 12, around: 48 }).unwrap();
    let c: f64 = lne_constant(&m, 10_000, 3).unwrap();
    assert!((1.0..=1.02).contains(&c), "{c}");
}

#[test]
fn small_pair_budget_is_rejected() {
    let m: Mesh<f64> = generate_surface(&Family::Disc { radius: 1.0 }, Resolution { rings: 4, around: 8 }).unwrap();
    assert_eq!(lne_constant::<f64>(&m, 999, 0), Err(MeshError::PairBudget(999)));
}

#[test]
fn single_precision_agrees() {
    let m: Mesh<f64> = generate_surface(&Family::Sphere { radius: 1.0 }, Resolution { rings: 16, around: 24 }).unwrap();
    let m32 = m.cast::<f32>();
    let (a, b): (f64, f32) = (inner_distance(&m, 0, 100).unwrap(), inner_distance(&m32, 0, 100).unwrap());
    assert!((a - b as f64).abs() < 1e-4 * a, "{a} {b}");
}
