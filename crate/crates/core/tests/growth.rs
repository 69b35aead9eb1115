use std::f64::consts::TAU;
use std::time::Instant;

use horncode::mesh::{generate_surface, growth_exponent, link_length, Family, Mesh, Resolution};
use horncode::Rational;

fn dyadic(ks: std::ops::RangeInclusive<i32>) -> Vec<f64> {
    ks.map(|k| 2f64.powi(k)).collect()
}

/// Height `z` where the surface `x² + y² = z^{2β}` meets the sphere of radius `r`
/// about the origin, by bisection.
fn meeting_height(beta: f64, r: f64) -> f64 {
    let (mut lo, mut hi) = (0.0, r);
    for _ in 0..200 {
        let z = 0.5 * (lo + hi);
        if z * z + z.powf(2.0 * beta) < r * r {
            lo = z;
        } else {
            hi = z;
        }
    }
    0.5 * (lo + hi)
}

fn oracle_slope(beta: f64, radii: &[f64]) -> f64 {
    let pts: Vec<(f64, f64)> = radii.iter().map(|&r| (r.ln(), (TAU * meeting_height(beta, r).powf(beta)).ln())).collect();
    let n = pts.len() as f64;
    let (mx, my) = (pts.iter().map(|p| p.0).sum::<f64>() / n, pts.iter().map(|p| p.1).sum::<f64>() / n);
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    sxy / sxx
}

#[test]
fn horn_exponents() {
    for (p, q) in [(1, 1), (3, 2), (2, 1)] {
        let beta = Rational::new(p, q);
        let b = beta.to_f64();
        let start = Instant::now();
        let m: Mesh<f64> = generate_surface(&Family::Horn { beta: beta.clone(), height: 1.0 }, Resolution::square(200)).unwrap();
        let radii: Vec<f64> = dyadic(-10..=-3).into_iter().rev().collect();
        let est = growth_exponent(&m, &[0.0; 3], &radii).unwrap();
        let elapsed = start.elapsed().as_secs_f64();
        assert!((est.slope - b).abs() <= 0.1, "β = {beta}: slope {}", est.slope);
        assert!((est.slope - oracle_slope(b, &radii)).abs() <= 0.05, "β = {beta}: slope {}", est.slope);
        assert_eq!(est.rounded, Some(beta.clone()));
        assert!(elapsed < 30.0, "β = {beta}: {elapsed} s");
        for (r, l) in est.radii_used.iter().zip(&est.lengths) {
            let exact = TAU * meeting_height(b, *r).powf(b);
            assert!((l / exact - 1.0).abs() < 0.02, "β = {beta}, r = {r}: {l} vs {exact}");
        }
    }
}

#[test]
fn tube_exponents() {
    for (p, q) in [(1, 1), (1, 2), (0, 1)] {
        let beta = Rational::new(p, q);
        let m: Mesh<f64> =
            generate_surface(&Family::Tube { beta: beta.clone(), z_min: 1.0, z_max: 4096.0 }, Resolution { rings: 200, around: 128 }).unwrap();
        let radii = dyadic(4..=11);
        let est = growth_exponent(&m, &[0.0; 3], &radii).unwrap();
        assert!((est.slope - beta.to_f64()).abs() <= 0.1, "β = {beta}: slope {}", est.slope);
        assert_eq!(est.rounded, Some(beta));
    }
}

#[test]
fn cylinder_end_does_not_grow() {
    let m: Mesh<f64> =
        generate_surface(&Family::Cylinder { radius: 1.0, half_length: 2048.0 }, Resolution { rings: 400, around: 64 }).unwrap();
    let est = growth_exponent(&m, &[0.0; 3], &dyadic(3..=10)).unwrap();
    assert!(est.slope.abs() <= 0.1, "{}", est.slope);
    assert_eq!(est.rounded, Some(Rational::zero()));
    // The link at each radius is two circles, one per end.
    assert_eq!(link_length(&m, &[0.0; 3], 64.0).unwrap().components, 2);
}

#[test]
fn paraboloid_end_grows_like_a_square_root() {
    let m: Mesh<f64> = generate_surface(&Family::Paraboloid { z_max: 4096.0 }, Resolution { rings: 200, around: 128 }).unwrap();
    let est = growth_exponent(&m, &[0.0; 3], &dyadic(4..=11)).unwrap();
    assert!((est.slope - 0.5).abs() <= 0.1, "{}", est.slope);
    assert_eq!(est.rounded, Some(Rational::new(1, 2)));
}

#[test]
fn single_precision_horn() {
    let m = generate_surface::<f32>(&Family::Horn { beta: Rational::from_integer(2), height: 1.0 }, Resolution::square(100)).unwrap();
    let radii: Vec<f32> = (3..=8).rev().map(|k| 2f32.powi(-k)).collect();
    let est = growth_exponent(&m, &[0.0; 3], &radii).unwrap();
    assert!((est.slope - 2.0).abs() <= 0.1, "{}", est.slope);
}
