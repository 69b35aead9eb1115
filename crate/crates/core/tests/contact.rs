use std::time::Instant;

use horncode::contact::{
    annulus_distance, cones_differ, default_ks, default_radii, estimate_contact, AnnulusOptions, ContactOptions,
    ContactValue,
};
use horncode::corpus::CONTACT_PAIRS;
use horncode::{CurveSampler, Rational};

fn curve(s: &str) -> CurveSampler {
    CurveSampler::parse(s).unwrap()
}

fn estimate(a: &str, b: &str, ks: &[f64]) -> horncode::ContactEstimate {
    estimate_contact(&curve(a), &curve(b), ks, &default_radii(), &ContactOptions::default()).unwrap()
}

const GRAPHS: [(&str, (i64, i64)); 5] =
    [("t; t", (1, 1)), ("t; t^(1/2)", (1, 2)), ("t; 1", (0, 1)), ("t; t^(-1/2)", (-1, 2)), ("t; t^(-1)", (-1, 1))];

#[test]
fn graphs_over_the_axis_recover_their_exponent() {
    let start = Instant::now();
    for (g, (p, q)) in GRAPHS {
        let e = estimate("t; 0", g, &default_ks());
        assert!(e.residual <= 0.05, "{g}: residual {}", e.residual);
        assert_eq!(e.rounded, Some(ContactValue::Finite(Rational::new(p, q))), "{g}: slope {}", e.slope);
    }
    assert!(start.elapsed().as_secs_f64() < 10.0, "{:?}", start.elapsed());
}

#[test]
fn slope_does_not_depend_on_the_annulus_ratio() {
    for (g, _) in GRAPHS {
        let e = estimate("t; 0", g, &[2.0, 4.0]);
        let (s2, s4) = (e.per_k[0].1, e.per_k[1].1);
        assert!((s2 - s4).abs() <= 0.05, "{g}: {s2} vs {s4}");
    }
}

#[test]
fn identical_curves_have_no_finite_contact() {
    let e = estimate("t; 0", "t; 0", &default_ks());
    assert_eq!(e.rounded, Some(ContactValue::NegInfinity));
    assert_eq!(e.slope, f64::NEG_INFINITY);
    let e = estimate("t; t^(1/2)", "4*t; 2*t^(1/2)@0.25", &default_ks());
    assert_eq!(e.rounded, Some(ContactValue::NegInfinity));
}

#[test]
fn reference_pairs_and_tangent_cones() {
    for (a, b, want) in CONTACT_PAIRS {
        let e = estimate(a, b, &default_ks());
        let k_gap = e.per_k.first().unwrap().1 - e.per_k.last().unwrap().1;
        let want = want.map_or(ContactValue::NegInfinity, |(p, q)| ContactValue::Finite(Rational::new(p, q)));
        assert_eq!(e.rounded.as_ref(), Some(&want), "{a} / {b}: slope {}", e.slope);
        if want != ContactValue::NegInfinity {
            assert!(k_gap.abs() <= 0.05, "{a} / {b}: {k_gap}");
        }
        let is_one = want == ContactValue::Finite(Rational::one());
        assert_eq!(is_one, cones_differ(&curve(a), &curve(b), 1e-3), "{a} / {b}");
    }
}

#[test]
fn rotating_both_curves_keeps_the_slope() {
    let (c, s) = (0.6f64, 0.8f64);
    let rot = vec![vec![c, -s, 0.0], vec![s, c, 0.0], vec![0.0, 0.0, 1.0]];
    let opts = ContactOptions::default();
    for (a, b) in [("t; 0; 0", "t; t^(1/2); 0"), ("t; 0; 0", "t; 1; t^(-1/2)"), ("t; 0; t^(1/3)", "t; t; 0")] {
        let (ca, cb) = (curve(a), curve(b));
        let plain = estimate_contact(&ca, &cb, &default_ks(), &default_radii(), &opts).unwrap();
        let (ra, rb) = (ca.transformed(&rot).unwrap(), cb.transformed(&rot).unwrap());
        let turned = estimate_contact(&ra, &rb, &default_ks(), &default_radii(), &opts).unwrap();
        assert!((plain.slope - turned.slope).abs() <= 0.02, "{a} / {b}: {} vs {}", plain.slope, turned.slope);
    }
}

#[test]
fn annulus_distance_is_symmetric() {
    let opts = AnnulusOptions::default();
    let pairs = [("t; 0", "t; t^(1/2)"), ("t; 1", "t; t^(2/3) - 3"), ("t; t^(1/2); 0", "-t; 1; t^(1/3)")];
    for (a, b) in pairs {
        for r in [10.0, 137.0, 2500.0] {
            let d1 = annulus_distance(&curve(a), &curve(b), 3.0, r, &opts).unwrap();
            let d2 = annulus_distance(&curve(b), &curve(a), 3.0, r, &opts).unwrap();
            assert_eq!(d1, d2);
        }
    }
}

#[test]
fn parallel_lines_are_one_apart() {
    let d = annulus_distance(&curve("t; 0"), &curve("t; 1"), 3.0, 100.0, &AnnulusOptions::default()).unwrap();
    assert!((d - 1.0).abs() < 1e-6, "{d}");
}

#[test]
fn single_precision_estimate() {
    let a = horncode::CurveSampler32::parse("t; 0").unwrap();
    let b = horncode::CurveSampler32::parse("t; t^(1/2)").unwrap();
    let e = estimate_contact(&a, &b, &default_ks(), &default_radii(), &ContactOptions::default()).unwrap();
    assert_eq!(e.rounded, Some(ContactValue::Finite(Rational::new(1, 2))));
}
