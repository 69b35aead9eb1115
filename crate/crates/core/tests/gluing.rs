use horncode::corpus::SURFACES;
use horncode::strata::{glue_strips, tube_from_strips};
use horncode::{code_equiv, code_from_strata, Rational};
use proptest::prelude::*;

fn rational_at_most_one() -> impl Strategy<Value = Rational> {
    (-12i64..=12, 1i64..=12).prop_map(|(p, q)| Rational::new(p, q)).prop_filter("≤ 1", |r| *r <= Rational::one())
}

fn list() -> impl Strategy<Value = Vec<Rational>> {
    prop::collection::vec(rational_at_most_one(), 1..12)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn order_independent(xs in list(), rot in 0usize..12) {
        let mut ys = xs.clone();
        ys.reverse();
        let k = rot % ys.len();
        ys.rotate_left(k);
        prop_assert_eq!(glue_strips(&xs).unwrap(), glue_strips(&ys).unwrap());
        prop_assert_eq!(tube_from_strips(&xs).unwrap(), tube_from_strips(&ys).unwrap());
    }

    #[test]
    fn associative(xs in list(), ys in list(), zs in list()) {
        let g = |v: &[Rational]| glue_strips(v).unwrap();
        let left = g(&[g(&[g(&xs), g(&ys)]), g(&zs)]);
        let right = g(&[g(&xs), g(&[g(&ys), g(&zs)])]);
        let flat = g(&[xs.clone(), ys.clone(), zs.clone()].concat());
        prop_assert_eq!(left.clone(), right);
        prop_assert_eq!(left, flat);
    }

    #[test]
    fn idempotent(xs in list()) {
        let doubled = [xs.clone(), xs.clone()].concat();
        prop_assert_eq!(glue_strips(&doubled).unwrap(), glue_strips(&xs).unwrap());
        let b = glue_strips(&xs).unwrap();
        prop_assert_eq!(glue_strips(&[b.clone(), b.clone()]).unwrap(), b);
    }

    #[test]
    fn chain_and_cycle_agree(xs in list()) {
        prop_assert_eq!(glue_strips(&xs).unwrap(), tube_from_strips(&xs).unwrap());
        prop_assert!(xs.contains(&glue_strips(&xs).unwrap()));
    }
}

#[test]
fn reference_surfaces_reproduce_their_codes() {
    for e in &SURFACES {
        let r = e.run().unwrap_or_else(|err| panic!("{}: {err}", e.name));
        assert!(r.exact(), "{}: got {} expected {}", e.name, r.produced, r.expected);
        assert!(code_equiv(&r.produced, &r.expected).is_some());
    }
}

#[test]
fn cayley_has_four_shared_labels() {
    let r = horncode::corpus::entry('i').unwrap().run().unwrap();
    assert_eq!(r.produced.components().len(), 5);
    assert_eq!(r.produced.singular_labels().len(), 4);
    for l in r.produced.singular_labels() {
        assert_eq!(r.produced.link_count(l), 2);
    }
}

#[test]
fn strata_json_round_trips() {
    for e in &SURFACES {
        let s = e.surface().unwrap();
        let back = horncode::strata::StratifiedSurface::from_json(&s.to_json()).unwrap();
        assert_eq!(code_from_strata(&back).unwrap(), code_from_strata(&s).unwrap());
    }
}
