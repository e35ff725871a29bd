//! Randomized invariants across modules, driven by seeded lattice samples.

use num_bigint::BigInt;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use realab::components::{identity_component, pi0_via_glue};
use realab::io::{emit_lattice, gen_random, parse_documents, parse_lattice, random_lattice, Document, LatticeDocument};
use realab::isogeny::{decide_imaginary_isogeny, normal_form_1d, verify_imaginary_isogeny};
use realab::kernel::{ExactMatrix, ExactScalar, Field, IntMatrix};
use realab::lattice::{common_refinement, is_sublattice, verify_isomorphism, GlueGroup, RealLattice};
use realab::polarization::{construct_default, decide_polarizable, PolarizabilityCertificate, SearchBudget};

fn field() -> impl Strategy<Value = Field> {
    prop_oneof![
        Just(Field::Rational),
        Just(Field::Quadratic(2)),
        Just(Field::Quadratic(3)),
        Just(Field::Quadratic(6)),
    ]
}

fn lattice(max_g: usize) -> impl Strategy<Value = RealLattice> {
    (1..=max_g, field(), any::<u64>())
        .prop_map(|(g, f, seed)| random_lattice(g, f, &mut ChaCha8Rng::seed_from_u64(seed)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(150))]

    #[test]
    fn text_roundtrip(l in lattice(4)) {
        let doc = LatticeDocument::new("x", l);
        let text = emit_lattice(&doc);
        let back = parse_lattice(&text).unwrap();
        prop_assert_eq!(&back, &doc);
        prop_assert_eq!(emit_lattice(&back), text);
    }

    #[test]
    fn attached_forms_roundtrip(l in lattice(3).prop_filter("rational", |l| l.has_rational_period())) {
        let s = construct_default(&l).unwrap().unwrap();
        let mut doc = LatticeDocument::new("x", l);
        doc.polarization = Some(s.matrix().clone());
        prop_assert_eq!(parse_lattice(&emit_lattice(&doc)).unwrap(), doc);
    }

    #[test]
    fn component_rank_bounds(l in lattice(5)) {
        let c = pi0_via_glue(&l).unwrap();
        prop_assert!(c.f2_rank <= l.g());
        prop_assert_eq!(c.order(), BigInt::from(1u32) << c.f2_rank);
        prop_assert_eq!(identity_component(&l).dimension, l.g());
    }

    #[test]
    fn isogeny_is_reflexive_and_symmetric(a in lattice(2), seed in any::<u64>()) {
        let b = random_lattice(a.g(), a.field(), &mut ChaCha8Rng::seed_from_u64(seed));
        prop_assert!(decide_imaginary_isogeny(&a, &a, 100).unwrap().is_yes());
        let ab = decide_imaginary_isogeny(&a, &b, 200).unwrap();
        let ba = decide_imaginary_isogeny(&b, &a, 200).unwrap();
        prop_assert_eq!(ab.is_yes(), ba.is_yes());
        if let realab::isogeny::Decision::Yes(u) = ab {
            prop_assert!(verify_imaginary_isogeny(&a, &b, &u).unwrap());
        }
    }

    #[test]
    fn one_dimensional_normal_form_is_isogenous(l in lattice(1)) {
        let nf = normal_form_1d(&l).unwrap();
        let model = nf.to_lattice(l.field()).unwrap();
        prop_assert_eq!(pi0_via_glue(&model).unwrap(), pi0_via_glue(&l).unwrap());
        prop_assert!(decide_imaginary_isogeny(&l, &model, 100).unwrap().is_yes());
    }

    #[test]
    fn refinement_lies_in_both(l in lattice(3), k in 1i64..=3, seed in any::<u64>()) {
        // a commensurable partner: F' = F·k with independent glue
        let g = l.g();
        let period = l.period().scale(&ExactScalar::from_int(k));
        let glue = random_lattice(g, Field::Rational, &mut ChaCha8Rng::seed_from_u64(seed)).glue().clone();
        let other = RealLattice::new(l.field(), period, glue).unwrap();
        let both = common_refinement(&l, &other).unwrap();
        prop_assert!(is_sublattice(&both, &l).unwrap());
        prop_assert!(is_sublattice(&both, &other).unwrap());
        prop_assert_eq!(common_refinement(&l, &l).unwrap(), l.clone());
        prop_assert!(verify_isomorphism(&l, &l, &IntMatrix::identity(g)).unwrap());
    }

    #[test]
    fn polarization_verdicts_are_certified(l in lattice(2)) {
        match decide_polarizable(&l, &SearchBudget { iterations: 300, restarts: 2, seed: 1 }).unwrap() {
            PolarizabilityCertificate::Yes(s) => {
                prop_assert!(realab::polarization::verify_polarization(&l, s.matrix()).unwrap())
            }
            PolarizabilityCertificate::No(q) => {
                prop_assert!(realab::polarization::verify_no_certificate(&l, &q).unwrap())
            }
            PolarizabilityCertificate::Unknown(_) => {}
        }
    }
}

#[test]
fn genus_two_ranks_bounded() {
    let docs = gen_random(2, Field::Quadratic(2), 42, 100).unwrap();
    assert!(docs.iter().all(|d| pi0_via_glue(&d.lattice).unwrap().f2_rank <= 2));
    assert!(docs.iter().all(|d| d.lattice.is_valid()));
}

#[test]
fn generation_is_deterministic() {
    let a: Vec<String> = gen_random(1, Field::Quadratic(5), 3, 2).unwrap().iter().map(emit_lattice).collect();
    let b: Vec<String> = gen_random(1, Field::Quadratic(5), 3, 2).unwrap().iter().map(emit_lattice).collect();
    assert_eq!(a, b);
}

#[test]
fn documents_normalize_on_parse() {
    let text = "# comment\nlattice neg\ng = 1\nF = [[-3]]\nglue = []\n";
    let doc = parse_lattice(text).unwrap();
    assert_eq!(doc.lattice.period(), &ExactMatrix::from_i64_rows(&[&[3]]));
    let again = parse_documents(&emit_lattice(&doc)).unwrap();
    assert!(matches!(&again[..], [Document::Real(d)] if d == &doc));
}

#[test]
fn glue_length_error_has_position() {
    let err = parse_lattice("lattice x\ng = 2\nF = [[1, 0], [0, 1]]\nglue = [10|1]\n").unwrap_err();
    let shown = err.to_string();
    assert!(shown.contains("line 4"), "{shown}");
    assert!(RealLattice::new(Field::Rational, ExactMatrix::identity(Field::Rational, 2), GlueGroup::trivial(2)).is_ok());
}
