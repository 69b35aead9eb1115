use std::collections::BTreeMap;
use std::time::Instant;

use horncode::code_model::Theta;
use horncode::mesh::{generate_surface, growth_exponent, mesh_topology, Family, Resolution};
use horncode::normal_forms::{
    base_model, build_normal_form, normal_form_code, puncture_embed, verify_against, verify_normal_form, BaseModel,
    NormalFormMesh, NormalFormSpec,
};
use horncode::strata::{StrataSpec, StripSpec};
use horncode::{code_equiv, code_from_strata, BetaVector, Rational, StratifiedSurface};

fn q(s: &str) -> Rational {
    s.parse().unwrap()
}

fn spec(theta: i64, genus: u32, beta: &[&str]) -> NormalFormSpec {
    NormalFormSpec::new(Theta::from_sign(theta).unwrap(), genus, beta.iter().map(|b| q(b)).collect()).unwrap()
}

#[test]
fn listed_specs_verify_within_two_minutes() {
    let start = Instant::now();
    for s in [spec(1, 0, &["1"]), spec(1, 1, &["1"]), spec(1, 0, &["1/2", "1"])] {
        let report = verify_normal_form::<f64>(&s).unwrap();
        assert!(report.passed(), "{s:?}: {:#?}", report.checks);
        assert_eq!((report.topology.theta, report.topology.genus), (s.theta(), s.genus()));
        for (est, b) in report.ends.iter().zip(s.beta().iter()) {
            assert!((est.slope - b.to_f64()).abs() <= 0.1, "{s:?}: {} vs {b}", est.slope);
        }
    }
    assert!(start.elapsed().as_secs_f64() < 120.0);
}

#[test]
fn end_exponents_one_half_and_zero() {
    for b in ["1", "1/2", "0"] {
        let s = spec(1, 0, &[b]);
        let nf = build_normal_form::<f64>(&s).unwrap();
        let end = &nf.ends[0];
        let est = growth_exponent(&nf.mesh, &end.centre, &end.radii).unwrap();
        assert!((est.slope - q(b).to_f64()).abs() <= 0.1, "β = {b}: {}", est.slope);
    }
}

#[test]
fn non_orientable_and_higher_genus() {
    for s in [spec(-1, 0, &["1"]), spec(1, 2, &["1/2"])] {
        let report = verify_normal_form::<f64>(&s).unwrap();
        assert!(report.passed(), "{s:?}: {:#?}", report.checks);
    }
}

#[test]
fn orientation_mismatch_is_reported() {
    let sphere = generate_surface::<f64>(&Family::Sphere { radius: 1.0 }, Resolution::square(32)).unwrap();
    let report = verify_against(&spec(-1, 0, &[]), &NormalFormMesh::closed(sphere)).unwrap();
    assert!(!report.passed());
    let theta = report.checks.iter().find(|c| c.name == "theta").unwrap();
    assert!(!theta.pass);
    assert!(report.checks.iter().find(|c| c.name == "genus").unwrap().pass);
}

#[test]
fn codes_agree_exactly_when_invariants_agree() {
    let specs = [
        spec(1, 0, &[]),
        spec(1, 0, &["1"]),
        spec(1, 0, &["1/2"]),
        spec(1, 0, &["1/2", "1"]),
        spec(1, 0, &["1", "1/2"]),
        spec(1, 1, &["1"]),
        spec(-1, 0, &["1"]),
        spec(-1, 1, &["1"]),
        spec(1, 2, &[]),
        spec(1, 0, &["0", "0"]),
    ];
    for a in &specs {
        for b in &specs {
            let same = (a.theta(), a.genus(), a.beta()) == (b.theta(), b.genus(), b.beta());
            let equiv = code_equiv(&normal_form_code(a), &normal_form_code(b)).is_some();
            assert_eq!(same, equiv, "{a:?} vs {b:?}");
        }
    }
}

#[test]
fn code_matches_the_stratified_description() {
    for s in [spec(1, 0, &["1/2"]), spec(1, 1, &[]), spec(-1, 0, &["1"]), spec(1, 2, &["0", "1/3", "1"])] {
        // Each end as a cycle of two strips: one with the end's exponent and one flatter.
        let ends = s
            .beta()
            .iter()
            .map(|b| vec![StripSpec::Beta(b.clone()), StripSpec::Beta(b.clone().min(q("-1")))])
            .collect();
        let strata = StratifiedSurface::from(StrataSpec { theta: s.theta(), genus: s.genus(), ends, singular_points: BTreeMap::new() });
        let from_strata = code_from_strata(&strata).unwrap();
        assert!(code_equiv(&normal_form_code(&s), &from_strata).is_some(), "{s:?}");
    }
}

#[test]
fn puncture_embed_keeps_the_mesh_away_from_punctures() {
    let base: BaseModel<f64> = base_model(Theta::Orientable, 1, 0).unwrap();
    let same = puncture_embed(&base.mesh, &[], &BetaVector::new(vec![]), None).unwrap();
    assert_eq!(same.triangles(), base.mesh.triangles());

    let base: BaseModel<f64> = base_model(Theta::Orientable, 0, 2).unwrap();
    let beta = BetaVector::new(vec![q("1/2"), q("1")]);
    let out = puncture_embed(&base.mesh, &base.punctures, &beta, None).unwrap();
    assert!(out.triangles().len() < base.mesh.triangles().len());
    assert_eq!(out.dim(), 2 * (base.mesh.dim() + 1));
    let t = mesh_topology(&out).unwrap();
    assert_eq!((t.genus, t.boundary_components), (0, 2));
    assert!(!out.marked("end:0").is_empty() && !out.marked("end:1").is_empty());
}

#[test]
fn spec_validation() {
    assert!(NormalFormSpec::new(Theta::Orientable, 0, vec![q("3/2")]).is_err());
    let s: NormalFormSpec = serde_json::from_str(r#"{"theta":1,"genus":1,"beta":["1","1/2"]}"#).unwrap();
    assert_eq!(s.beta().as_slice(), &[q("1/2"), q("1")]);
    assert!(serde_json::from_str::<NormalFormSpec>(r#"{"theta":1,"genus":0,"beta":["2"]}"#).is_err());
}
