//! The acceptance checks run by `corpus`. Check names start with the
//! criterion number, e.g. `7.horn[3/2]`.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt::Display;
use std::time::Instant;

use horncode::code_model::Label;
use horncode::contact::{default_ks, default_radii, estimate_contact, ContactOptions, ContactValue};
use horncode::corpus::{entry, SURFACES};
use horncode::mesh::{
    cone_directions, generate_surface, growth_exponent, inner_distance, lne_constant, mesh_topology, Family,
    GeodesicGraph, Mesh, Resolution,
};
use horncode::normal_forms::{verify_normal_form, Check, NormalFormSpec};
use horncode::{
    canonicalize, code_equiv, curve_code, glue_strips, make_component_code, tube_from_strips, CurveSampler,
    InnerLipschitzCode, Rational, Theta,
};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const CONTACT_RESIDUAL_TOL: f64 = 0.05;
pub const CONTACT_BUDGET_S: f64 = 10.0;
pub const K_SLOPE_TOL: f64 = 0.05;
pub const GLUING_LISTS: usize = 1000;
pub const RANDOM_CODES: usize = 100;
pub const EXPONENT_TOL: f64 = 0.1;
pub const HORN_RESOLUTION: usize = 200;
pub const HORN_BUDGET_S: f64 = 30.0;
pub const LNE_PAIRS: usize = 10_000;
pub const LNE_HALF_BOUND: f64 = 1.05;
pub const LNE_CUSP_BOUND: f64 = 2.05;
pub const ANTIPODAL_REL_TOL: f64 = 0.05;
pub const CYLINDER_RESOLUTION: usize = 256;
pub const METRIC_TRIPLES: usize = 1000;
pub const NORMAL_FORM_BUDGET_S: f64 = 120.0;

pub struct Criterion {
    pub id: u8,
    pub title: &'static str,
    pub run: fn(u64) -> Vec<Check>,
}

pub const CRITERIA: [Criterion; 14] = [
    Criterion { id: 1, title: "contact recovery", run: contact_recovery },
    Criterion { id: 2, title: "K-independence", run: k_independence },
    Criterion { id: 3, title: "coincidence convention", run: coincidence },
    Criterion { id: 4, title: "gluing algebra", run: gluing },
    Criterion { id: 5, title: "reference surfaces", run: reference_surfaces },
    Criterion { id: 6, title: "equivalence laws", run: equivalence_laws },
    Criterion { id: 7, title: "horn exponents", run: horn_exponents },
    Criterion { id: 8, title: "tube exponents", run: tube_exponents },
    Criterion { id: 9, title: "LNE bounds", run: lne_bounds },
    Criterion { id: 10, title: "inner-distance sanity", run: inner_distance_sanity },
    Criterion { id: 11, title: "topology extraction", run: topology },
    Criterion { id: 12, title: "normal forms", run: normal_forms },
    Criterion { id: 13, title: "complex curves", run: complex_curves },
    Criterion { id: 14, title: "cone dimension", run: cone_dimension },
];

/// Every criterion in order.
pub fn run_all(seed: u64) -> Vec<Check> {
    CRITERIA.iter().flat_map(|c| (c.run)(seed)).collect()
}

fn check(name: impl Into<String>, measured: impl Display, expected: impl Display, tolerance: Option<f64>, pass: bool) -> Check {
    Check { name: name.into(), measured: measured.to_string(), expected: expected.to_string(), tolerance, pass }
}

fn within(name: impl Into<String>, measured: f64, expected: f64, tol: f64) -> Check {
    check(name, format!("{measured:.4}"), expected, Some(tol), (measured - expected).abs() <= tol)
}

fn at_most(name: impl Into<String>, measured: f64, bound: f64) -> Check {
    check(name, format!("{measured:.4}"), format!("<= {bound}"), None, measured <= bound)
}

/// Count of failing cases out of `total`; passes at zero.
fn none_fail(name: impl Into<String>, failures: usize, total: usize) -> Check {
    check(name, format!("{failures} of {total} failed"), format!("0 of {total} failed"), None, failures == 0)
}

/// Wall-clock budget. The measured value is only the verdict so that
/// reports stay byte-identical between runs.
fn budget(name: impl Into<String>, start: Instant, seconds: f64) -> Check {
    let ok = start.elapsed().as_secs_f64() < seconds;
    check(name, if ok { "within budget" } else { "over budget" }, format!("< {seconds} s"), None, ok)
}

fn failed(name: impl Into<String>, err: impl Display) -> Check {
    check(name, format!("error: {err}"), "no error", None, false)
}

fn q(p: i64, d: i64) -> Rational {
    Rational::new(p, d)
}

fn curve(text: &str) -> CurveSampler {
    CurveSampler::parse(text).expect("built-in curve parses")
}

// Contact.

const GRAPHS: [(&str, (i64, i64)); 5] =
    [("t; t", (1, 1)), ("t; t^(1/2)", (1, 2)), ("t; 1", (0, 1)), ("t; t^(-1/2)", (-1, 2)), ("t; t^(-1)", (-1, 1))];

fn graph_estimates() -> Vec<(&'static str, Rational, Result<horncode::ContactEstimate, horncode::contact::ContactError>)> {
    GRAPHS
        .iter()
        .map(|&(g, (p, d))| {
            let est = estimate_contact(&curve("t; 0"), &curve(g), &default_ks(), &default_radii(), &ContactOptions::default());
            (g, q(p, d), est)
        })
        .collect()
}

fn contact_recovery(_: u64) -> Vec<Check> {
    let start = Instant::now();
    let mut out: Vec<Check> = graph_estimates()
        .into_iter()
        .map(|(g, beta, est)| {
            let name = format!("1.contact[{g}]");
            match est {
                Ok(e) => {
                    let rounded = match &e.rounded {
                        Some(ContactValue::Finite(r)) => r.to_string(),
                        Some(ContactValue::NegInfinity) => "-inf".into(),
                        None => "none".into(),
                    };
                    let pass = e.rounded == Some(ContactValue::Finite(beta.clone())) && e.residual <= CONTACT_RESIDUAL_TOL;
                    check(
                        name,
                        format!("slope {:.4}, rounded {rounded}, residual {:.4}", e.slope, e.residual),
                        format!("rounded {beta}, residual <= {CONTACT_RESIDUAL_TOL}"),
                        None,
                        pass,
                    )
                }
                Err(err) => failed(name, err),
            }
        })
        .collect();
    out.push(budget("1.runtime", start, CONTACT_BUDGET_S));
    out
}

fn k_independence(_: u64) -> Vec<Check> {
    graph_estimates()
        .into_iter()
        .map(|(g, _, est)| {
            let name = format!("2.k_independence[{g}]");
            match est {
                Ok(e) => {
                    let slope = |k: f64| e.per_k.iter().find(|p| p.0 == k).map(|p| p.1).unwrap_or(f64::NAN);
                    within(name, (slope(2.0) - slope(4.0)).abs(), 0.0, K_SLOPE_TOL)
                }
                Err(err) => failed(name, err),
            }
        })
        .collect()
}

fn coincidence(_: u64) -> Vec<Check> {
    ["t; 0", "t; t^(1/2)", "t; t^2; t^(1/3)"]
        .iter()
        .map(|&c| {
            let name = format!("3.coincident[{c}]");
            match estimate_contact(&curve(c), &curve(c), &default_ks(), &default_radii(), &ContactOptions::default()) {
                Ok(e) => {
                    let neg = e.rounded == Some(ContactValue::NegInfinity);
                    check(name, if neg { "-inf" } else { "finite" }, "-inf", None, neg)
                }
                Err(err) => failed(name, err),
            }
        })
        .collect()
}

// Gluing.

fn random_exponent(rng: &mut ChaCha8Rng) -> Rational {
    let d = rng.gen_range(1..=6);
    q(rng.gen_range(-3 * d..=d), d)
}

fn gluing(seed: u64) -> Vec<Check> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut order, mut assoc, mut idem, mut cyclic) = (0, 0, 0, 0);
    for _ in 0..GLUING_LISTS {
        let n = rng.gen_range(1..=8);
        let list: Vec<Rational> = (0..n).map(|_| random_exponent(&mut rng)).collect();
        let whole = glue_strips(&list).expect("exponents are at most 1");

        let mut shuffled = list.clone();
        shuffled.shuffle(&mut rng);
        order += usize::from(glue_strips(&shuffled).ok() != Some(whole.clone()));

        if n > 1 {
            let k = rng.gen_range(1..n);
            let parts = [glue_strips(&list[..k]).unwrap(), glue_strips(&list[k..]).unwrap()];
            assoc += usize::from(glue_strips(&parts).ok() != Some(whole.clone()));
        }

        let doubled: Vec<Rational> = list.iter().chain(&list).cloned().collect();
        let x = &list[0];
        idem += usize::from(
            glue_strips(&doubled).ok() != Some(whole.clone()) || glue_strips(&[x.clone(), x.clone()]).ok() != Some(x.clone()),
        );

        let mut rotated = list.clone();
        rotated.rotate_left(rng.gen_range(0..n));
        cyclic += usize::from(tube_from_strips(&rotated).ok() != Some(whole));
    }
    vec![
        none_fail("4.order_independent", order, GLUING_LISTS),
        none_fail("4.associative", assoc, GLUING_LISTS),
        none_fail("4.idempotent", idem, GLUING_LISTS),
        none_fail("4.tube_rotation_invariant", cyclic, GLUING_LISTS),
    ]
}

// Reference surfaces.

fn reference_surfaces(_: u64) -> Vec<Check> {
    let mut out: Vec<Check> = SURFACES
        .iter()
        .map(|e| {
            let name = format!("5.corpus[{}]", e.name);
            match e.run() {
                Ok(r) => check(name, &r.produced, &r.expected, None, r.exact()),
                Err(err) => failed(name, err),
            }
        })
        .collect();
    let cayley = entry('i').expect("Cayley entry").expected().expect("Cayley code parses");
    let links: Vec<usize> = cayley.singular_labels().iter().map(|l| cayley.link_count(l)).collect();
    out.push(check(
        "5.cayley_structure",
        format!("{} components, links {links:?}", cayley.components().len()),
        "5 components, links [2, 2, 2, 2]",
        None,
        cayley.components().len() == 5 && links == [2, 2, 2, 2],
    ));
    out
}

// Equivalence.

fn random_code(rng: &mut ChaCha8Rng) -> InnerLipschitzCode {
    const ENDS: [(i64, i64); 5] = [(-1, 1), (0, 1), (1, 3), (1, 2), (1, 1)];
    const HORNS: [(i64, i64); 3] = [(1, 1), (3, 2), (2, 1)];
    let labels = rng.gen_range(0..4);
    let comps = (0..rng.gen_range(1..5))
        .map(|_| {
            let theta = if rng.gen_bool(0.5) { Theta::Orientable } else { Theta::NonOrientable };
            let ends = (0..rng.gen_range(0..3)).map(|_| ENDS.choose(rng).map(|&(p, d)| q(p, d)).unwrap()).collect();
            let mut att: BTreeMap<Label, Vec<Rational>> = BTreeMap::new();
            for l in 0..labels {
                if rng.gen_bool(0.5) {
                    let sheets = (0..rng.gen_range(1..3)).map(|_| HORNS.choose(rng).map(|&(p, d)| q(p, d)).unwrap()).collect();
                    att.insert(format!("p{l}"), sheets);
                }
            }
            make_component_code(theta, rng.gen_range(0..3), ends, att).expect("valid component")
        })
        .collect();
    InnerLipschitzCode::from_components(comps).expect("labels are inferred")
}

/// Components reordered at random and every label renamed.
fn relabelled(code: &InnerLipschitzCode, rng: &mut ChaCha8Rng) -> InnerLipschitzCode {
    let mut order: Vec<usize> = (0..code.components().len()).collect();
    order.shuffle(rng);
    let tag: u32 = rng.gen();
    let comps = order
        .iter()
        .map(|&i| {
            let c = &code.components()[i];
            let att = c.attachments().iter().map(|(l, b)| (format!("{l}_{tag:x}"), b.as_slice().to_vec())).collect();
            make_component_code(c.theta(), c.genus(), c.ends().as_slice().to_vec(), att).expect("valid component")
        })
        .collect();
    InnerLipschitzCode::from_components(comps).expect("labels are inferred")
}

fn equivalence_laws(seed: u64) -> Vec<Check> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x6);
    // Half fresh codes, half relabelled copies, so equivalent pairs occur.
    let mut codes: Vec<InnerLipschitzCode> = (0..RANDOM_CODES / 2).map(|_| random_code(&mut rng)).collect();
    for i in 0..RANDOM_CODES / 2 {
        let c = relabelled(&codes[i], &mut rng);
        codes.push(c);
    }
    let n = codes.len();
    let eq: Vec<Vec<bool>> = codes.iter().map(|a| codes.iter().map(|b| code_equiv(a, b).is_some()).collect()).collect();
    let canon: Vec<String> = codes.iter().map(|c| canonicalize(c).to_json()).collect();

    let reflexive = (0..n).filter(|&i| code_equiv(&codes[i], &codes[i]).and_then(|w| w.apply(&codes[i])) != Some(codes[i].clone())).count();
    let symmetric = (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).filter(|&(i, j)| eq[i][j] != eq[j][i]).count();
    let mut transitive = 0;
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                transitive += usize::from(eq[i][j] && eq[j][k] && !eq[i][k]);
            }
        }
    }
    let invariance = codes
        .iter()
        .filter(|a| {
            let b = relabelled(a, &mut rng);
            code_equiv(a, &b).and_then(|w| w.apply(a)) != Some(b)
        })
        .count();
    let agreement = (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).filter(|&(i, j)| (canon[i] == canon[j]) != eq[i][j]).count();

    let code_of = |k: char| entry(k).expect("corpus entry").expected().expect("corpus code parses");
    let (torus, klein, spheres) = (code_of('f'), code_of('g'), code_of('h'));
    let swapped = InnerLipschitzCode::from_components(spheres.components().iter().rev().cloned().collect()).expect("same labels");
    let swap_witness = code_equiv(&spheres, &swapped);
    vec![
        none_fail("6.reflexive", reflexive, n),
        none_fail("6.symmetric", symmetric, n * n),
        none_fail("6.transitive", transitive, n * n * n),
        none_fail("6.permutation_and_renaming", invariance, n),
        check("6.torus_vs_klein", code_equiv(&torus, &klein).is_some(), false, None, code_equiv(&torus, &klein).is_none()),
        check(
            "6.two_spheres_swap",
            swap_witness.as_ref().map(|w| format!("{:?}", w.component_bijection)).unwrap_or("none".into()),
            "a witness",
            None,
            swap_witness.and_then(|w| w.apply(&spheres)) == Some(swapped),
        ),
        none_fail("6.canonical_form_agreement", agreement, n * n),
    ]
}

// Meshes.

fn horn_exponents(_: u64) -> Vec<Check> {
    let radii: Vec<f64> = (3..=10).map(|k| 2f64.powi(-k)).collect();
    let mut out = Vec::new();
    for beta in [q(1, 1), q(3, 2), q(2, 1)] {
        let start = Instant::now();
        let name = format!("7.horn[{beta}]");
        let family = Family::Horn { beta: beta.clone(), height: 1.0 };
        match generate_surface::<f64>(&family, Resolution::square(HORN_RESOLUTION))
            .and_then(|m| growth_exponent(&m, &[0.0; 3], &radii))
        {
            Ok(e) => out.push(within(name, e.slope, beta.to_f64(), EXPONENT_TOL)),
            Err(err) => out.push(failed(name, err)),
        }
        out.push(budget(format!("7.runtime[{beta}]"), start, HORN_BUDGET_S));
    }
    out
}

fn end_slope(family: &Family, res: Resolution, radii: &[f64]) -> Result<f64, horncode::mesh::MeshError> {
    let m = generate_surface::<f64>(family, res)?;
    Ok(growth_exponent(&m, &[0.0; 3], radii)?.slope)
}

fn tube_exponents(_: u64) -> Vec<Check> {
    let radii: Vec<f64> = (4..=11).map(|k| 2f64.powi(k)).collect();
    let res = Resolution { rings: 200, around: 128 };
    let mut cases: Vec<(String, Family, f64)> = [q(1, 1), q(1, 2), q(0, 1)]
        .into_iter()
        .map(|b| (format!("8.tube[{b}]"), Family::Tube { beta: b.clone(), z_min: 1.0, z_max: 4096.0 }, b.to_f64()))
        .collect();
    cases.push(("8.cylinder_end".into(), Family::Cylinder { radius: 1.0, half_length: 4096.0 }, 0.0));
    // The reference paraboloid code fixes the expected end exponent.
    let paraboloid = entry('e').expect("paraboloid entry").expected().expect("code parses");
    let end = paraboloid.components()[0].ends().as_slice()[0].to_f64();
    cases.push(("8.paraboloid_end".into(), Family::Paraboloid { z_max: 4096.0 }, end));
    cases
        .into_iter()
        .map(|(name, family, expected)| match end_slope(&family, res, &radii) {
            Ok(s) => within(name, s, expected, EXPONENT_TOL),
            Err(err) => failed(name, err),
        })
        .collect()
}

fn lne_bounds(seed: u64) -> Vec<Check> {
    let cases = [
        ("9.lne[T_1/2]", q(1, 2), 400.0, Resolution { rings: 2, around: 8 }, LNE_HALF_BOUND),
        ("9.lne[T_-1]", q(-1, 1), 1000.0, Resolution { rings: 400, around: 8 }, LNE_CUSP_BOUND),
    ];
    cases
        .into_iter()
        .map(|(name, beta, x_max, res, bound)| {
            match generate_surface::<f64>(&Family::Strip { beta, x_min: 1.0, x_max }, res)
                .and_then(|m| lne_constant(&m, LNE_PAIRS, seed))
            {
                Ok(c) => at_most(name, c, bound),
                Err(err) => failed(name, err),
            }
        })
        .collect()
}

fn euclid(m: &Mesh<f64>, p: usize, q: usize) -> f64 {
    m.vertex(p).iter().zip(m.vertex(q)).map(|(a, b)| (a - b) * (a - b)).sum::<f64>().sqrt()
}

fn inner_distance_sanity(seed: u64) -> Vec<Check> {
    let mut out = Vec::new();
    let n = CYLINDER_RESOLUTION;
    let cyl = generate_surface::<f64>(&Family::Cylinder { radius: 1.0, half_length: 2.0 }, Resolution::square(n))
        .expect("cylinder parameters are valid");
    let ring = (0..n).min_by(|&a, &b| cyl.vertex(a * n)[2].abs().total_cmp(&cyl.vertex(b * n)[2].abs())).expect("rings");
    match inner_distance(&cyl, ring * n, ring * n + n / 2) {
        Ok(d) => out.push(within("10.cylinder_antipodal", d / PI, 1.0, ANTIPODAL_REL_TOL)),
        Err(err) => out.push(failed("10.cylinder_antipodal", err)),
    }

    let torus = generate_surface::<f64>(&Family::Torus { major: 1.0, minor: 0.4 }, Resolution { rings: 48, around: 24 })
        .expect("torus parameters are valid");
    let g = GeodesicGraph::new(&torus);
    let v = torus.vertex_count();
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xA);
    let pool: Vec<usize> = (0..40).map(|_| rng.gen_range(0..v)).collect();
    let rows: Vec<Vec<f64>> = pool.iter().map(|&s| g.distances_from::<f64>(s).into_iter().map(|d| d.unwrap_or(f64::NAN)).collect()).collect();
    let mut bad = 0;
    for _ in 0..METRIC_TRIPLES {
        let (i, j, r) = (rng.gen_range(0..pool.len()), rng.gen_range(0..pool.len()), rng.gen_range(0..v));
        let (p, q) = (pool[i], pool[j]);
        let d = rows[i][q];
        let ok = d == rows[j][p]
            && (d == 0.0) == (p == q)
            && rows[i][r] <= d + rows[j][r]
            && d >= euclid(&torus, p, q) * (1.0 - 1e-12);
        bad += usize::from(!ok);
    }
    out.push(none_fail("10.metric_axioms", bad, METRIC_TRIPLES));
    out
}

fn topology(_: u64) -> Vec<Check> {
    let cases = [
        ("11.torus", Family::Torus { major: 1.0, minor: 0.3 }, Resolution { rings: 40, around: 20 }, "(1, 1, 0)"),
        ("11.sphere", Family::Sphere { radius: 1.0 }, Resolution::square(24), "(1, 0, 0)"),
        ("11.moebius_band", Family::MoebiusBand { half_width: 0.3 }, Resolution { rings: 60, around: 6 }, "(-1, 1 cross-cap, 1)"),
    ];
    cases
        .into_iter()
        .map(|(name, family, res, expected)| {
            match generate_surface::<f64>(&family, res).and_then(|m| mesh_topology(&m)) {
                Ok(t) => {
                    let measured = match t.theta {
                        Theta::Orientable => format!("(1, {}, {})", t.genus, t.boundary_components),
                        Theta::NonOrientable => format!("(-1, {} cross-cap, {})", t.cross_caps, t.boundary_components),
                    };
                    let pass = measured == expected;
                    check(name, measured, expected, None, pass)
                }
                Err(err) => failed(name, err),
            }
        })
        .collect()
}

fn normal_forms(_: u64) -> Vec<Check> {
    let start = Instant::now();
    let specs = [(0, vec![q(1, 1)]), (1, vec![q(1, 1)]), (0, vec![q(1, 2), q(1, 1)])];
    let mut out = Vec::new();
    for (genus, beta) in specs {
        let spec = NormalFormSpec::new(Theta::Orientable, genus, beta).expect("exponents are at most 1");
        let tag = format!("(1,{genus},{})", spec.beta());
        match verify_normal_form::<f64>(&spec) {
            Ok(report) => {
                for c in report.checks {
                    out.push(Check { name: format!("12.normal_form{tag}.{}", c.name), ..c });
                }
            }
            Err(err) => out.push(failed(format!("12.normal_form{tag}"), err)),
        }
    }
    out.push(budget("12.runtime", start, NORMAL_FORM_BUDGET_S));
    out
}

fn complex_curves(_: u64) -> Vec<Check> {
    let cubic = curve_code(&[(1, 3)], &BTreeMap::new());
    let want = make_component_code(Theta::Orientable, 1, vec![q(1, 1); 3], BTreeMap::new()).map(InnerLipschitzCode::single);
    let cubic_check = match (cubic, want) {
        (Ok(c), Ok(w)) => {
            let pass = c == w;
            check("13.smooth_cubic", &c, &w, None, pass)
        }
        (Err(err), _) | (_, Err(err)) => failed("13.smooth_cubic", err),
    };
    let inc = BTreeMap::from([("p".to_string(), BTreeMap::from([(0, 1), (1, 1)]))]);
    let node_check = match curve_code(&[(0, 1), (0, 1)], &inc) {
        Ok(c) => check("13.node_link_count", c.link_count("p"), 2, None, c.link_count("p") == 2),
        Err(err) => failed("13.node_link_count", err),
    };
    vec![cubic_check, node_check]
}

fn cone_dimension(_: u64) -> Vec<Check> {
    let res = Resolution { rings: 400, around: 128 };
    let cases = [
        ("14.cone[1]", q(1, 1), 512.0, 128.0, true),
        ("14.cone[1/2]", q(1, 2), 16384.0, 4096.0, false),
    ];
    cases
        .into_iter()
        .map(|(name, beta, z_max, radius, two)| {
            match generate_surface::<f64>(&Family::Tube { beta, z_min: 1.0, z_max }, res)
                .and_then(|m| cone_directions(&m, radius, 0.2))
            {
                Ok(s) => {
                    let pass = (s.cone_dim == 2) == two;
                    let expected = if two { "dim 2" } else { "dim < 2" };
                    check(name, format!("dim {} (shell ratio {:.2})", s.cone_dim, s.shell_ratio), expected, None, pass)
                }
                Err(err) => failed(name, err),
            }
        })
        .collect()
}
