use std::thread;

use potpi_core::enumeration::pair_code;
use potpi_core::rho::{
    apply_tower, class_transport, fundamental_sequence, in_a, in_h, rho0_bit, rho_tower, ClassTag,
    LazyPoint, OrdinalNotation, ThreeValued,
};
use potpi_core::testgen::build_test;
use potpi_core::{PointPair, RationalPoint, Word};
use proptest::prelude::*;

const SCAN: u64 = 10_000;

fn o(s: &str) -> OrdinalNotation {
    OrdinalNotation::parse(s).unwrap()
}

/// Whether `bit(⟨i,j⟩) = 1` for some `j ≤ SCAN`.
fn naive_column_has_one(bit: impl Fn(u64) -> bool, i: u64) -> bool {
    (0..=SCAN).any(|j| bit(pair_code(i, j).unwrap()))
}

fn fd_inputs() -> impl Iterator<Item = LazyPoint> {
    (0u32..256).flat_map(|mask| {
        let support: Vec<u64> = (0..8).filter(|k| mask >> k & 1 == 1).collect();
        [
            LazyPoint::fd(false, support.clone()),
            LazyPoint::fd(true, support),
        ]
    })
}

fn exact_bit(p: &LazyPoint, i: u64) -> bool {
    p.bit(i, 0).to_bool().expect("exact point")
}

#[test]
fn constants_swap() {
    for i in 0..=64 {
        assert_eq!(rho0_bit(&LazyPoint::zeros(), i, 0), ThreeValued::One);
        assert_eq!(rho0_bit(&LazyPoint::ones(), i, 0), ThreeValued::Zero);
        let moved = LazyPoint::rational(&RationalPoint::parse("1(0)").unwrap());
        assert_eq!(rho0_bit(&moved, i, 0), ThreeValued::from_bool(i > 0));
    }
}

#[test]
fn successor_law_against_a_scan_of_the_previous_stage() {
    for e in fd_inputs() {
        for eta in 0..=3u64 {
            let stage = apply_tower(&OrdinalNotation::finite(eta), &e);
            assert!(stage.is_exact());
            let forgetful = {
                let stage = stage.clone();
                LazyPoint::opaque(move |i, b| stage.bit(i, b))
            };
            for i in 0..=32 {
                let next = rho_tower(&OrdinalNotation::finite(eta + 1), &e, i, 0);
                let scanned = naive_column_has_one(|k| exact_bit(&stage, k), i);
                assert_eq!(
                    next,
                    ThreeValued::from_bool(!scanned),
                    "{e:?} eta {eta} i {i}"
                );
                // the same composition through a class-blind evaluator
                let blind = rho0_bit(&forgetful, i, SCAN);
                let expected = if scanned {
                    ThreeValued::Zero
                } else {
                    ThreeValued::Unknown
                };
                assert_eq!(blind, expected);
            }
        }
    }
}

#[test]
fn rationals_are_decided_without_budget() {
    for r in RationalPoint::all_with_window(6) {
        let e = LazyPoint::rational(&r);
        for i in 0..=24 {
            let answer = rho0_bit(&e, i, 0);
            assert_ne!(answer, ThreeValued::Unknown);
            let scanned = naive_column_has_one(|k| r.bit_at(k), i);
            assert_eq!(answer, ThreeValued::from_bool(!scanned), "{r} column {i}");
        }
    }
}

#[test]
fn transported_images_match_columns() {
    let rationals = RationalPoint::all_with_window(6)
        .into_iter()
        .map(LazyPoint::from);
    for e in fd_inputs().chain(rationals) {
        let image = class_transport(&e).unwrap();
        for i in 0..=64 {
            assert_eq!(image.bit(i, 0), rho0_bit(&e, i, 0), "{e:?} column {i}");
        }
        let expected_tag = match e.tag() {
            ClassTag::Fd0 => Some(ClassTag::Fd1),
            ClassTag::Fd1 => Some(ClassTag::Fd0),
            _ => None,
        };
        if let Some(tag) = expected_tag {
            assert_eq!(image.tag(), tag);
        }
        if e.tag() == ClassTag::Fd1 {
            assert_eq!(image.is_zero_point(), Some(true));
        }
    }
}

#[test]
fn h_one_is_the_zero_point() {
    for r in RationalPoint::all_with_window(5) {
        let expected = ThreeValued::from_bool(r == RationalPoint::zeros());
        assert_eq!(in_h(&o("0"), &LazyPoint::rational(&r), 0), expected, "{r}");
    }
    assert_eq!(in_h(&o("1"), &LazyPoint::ones(), 0), ThreeValued::One);
    let e = LazyPoint::rational(&RationalPoint::parse("1(0)").unwrap());
    assert_eq!(in_h(&o("2"), &e, 0), ThreeValued::One);
}

#[test]
fn a_one_matches_the_compound_oracle() {
    let table = build_test(12).unwrap();
    let points = RationalPoint::all_with_window(4);
    for a in &points {
        for b in &points {
            let pair = PointPair::new(a.clone(), b.clone());
            let branch =
                pair.in_e0() && (1..=12).all(|p| table.tree_contains(&a.prefix(p), &b.prefix(p)));
            let shifted_nonzero = (1..64).any(|i| a.bit_at(i) != b.bit_at(i));
            let expected = ThreeValued::from_bool(branch && shifted_nonzero);
            assert_eq!(in_a(&o("0"), &table, &pair, 0), Ok(expected), "{a} {b}");
        }
    }
    let r = |s: &str| RationalPoint::parse(s).unwrap();
    let q0 = PointPair::new(r("0(0)"), r("1(0)"));
    assert_eq!(in_a(&o("0"), &table, &q0, 0), Ok(ThreeValued::Zero));
}

#[test]
fn fundamental_sequences_sum_to_their_limit() {
    let cases = [
        (
            "w",
            (0..60).map(OrdinalNotation::finite).collect::<Vec<_>>(),
        ),
        ("w*2", (0..60).map(|n| o(&format!("w+{}", n + 1))).collect()),
        ("w^2", (1..60).map(|n| o(&format!("w*{n}"))).collect()),
    ];
    for (lit, below) in cases {
        let lambda = o(lit);
        let seq = fundamental_sequence(&lambda).unwrap();
        let mut sums = Vec::new();
        let mut total = OrdinalNotation::zero();
        for term in seq.iter().take(100) {
            assert!(!term.is_zero() && term < lambda);
            total = total.checked_add(&term).unwrap();
            assert!(total < lambda);
            sums.push(total.clone());
        }
        assert!(sums.windows(2).all(|w| w[0] < w[1]), "{lit}");
        for beta in below {
            assert!(beta < lambda);
            assert!(
                sums.iter().any(|s| *s > beta),
                "{lit}: {beta} is never passed"
            );
        }
    }
}

#[test]
fn exact_limit_stages_on_rationals() {
    for lambda in ["w", "w+1", "w*2", "w^2", "w^2*2+w+3"] {
        for r in RationalPoint::all_with_window(4) {
            let image = apply_tower(&o(lambda), &LazyPoint::rational(&r));
            assert!(image.is_exact(), "{lambda} {r}");
            assert_ne!(
                in_h(&o(lambda), &LazyPoint::rational(&r), 0),
                ThreeValued::Unknown
            );
        }
    }
}

#[test]
fn opaque_limit_stage_is_deterministic_across_threads() {
    let r = RationalPoint::parse("10(011)").unwrap();
    let e = LazyPoint::opaque(move |i, _| ThreeValued::from_bool(r.bit_at(i)));
    let image = apply_tower(&o("w"), &e);
    assert!(!image.is_exact());
    let serial: Vec<_> = (0..5).map(|i| image.bit(i, 6)).collect();
    let handles: Vec<_> = (0..4)
        .map(|_| {
            let image = image.clone();
            thread::spawn(move || (0..5).rev().map(|i| image.bit(i, 6)).collect::<Vec<_>>())
        })
        .collect();
    for h in handles {
        let mut bits = h.join().unwrap();
        bits.reverse();
        assert_eq!(bits, serial);
    }
    // the exact evaluation can only be refined by the budgeted one, never contradicted
    let exact = apply_tower(
        &o("w"),
        &LazyPoint::rational(&RationalPoint::parse("10(011)").unwrap()),
    );
    for (i, b) in serial.iter().enumerate() {
        assert!(*b == ThreeValued::Unknown || *b == exact.bit(i as u64, 0));
    }
}

proptest! {
    #[test]
    fn shift_and_splice_agree_bitwise(raw_pre in prop::collection::vec(any::<bool>(), 0..6), raw_per in prop::collection::vec(any::<bool>(), 1..5), k in 0u64..12, devs in prop::collection::btree_set(0u64..20, 0..5), base in any::<bool>()) {
        let r = RationalPoint::new(Word::from_bits(raw_pre), Word::from_bits(raw_per)).unwrap();
        let a = LazyPoint::rational(&r);
        let b = LazyPoint::fd(base, devs);
        let opaque_b = { let b = b.clone(); LazyPoint::opaque(move |i, budget| b.bit(i, budget)) };
        for (x, y) in [(&a, &b), (&b, &a), (&a, &opaque_b)] {
            let spliced = x.splice(k, y);
            let moved = x.shift_by(k);
            for i in 0..80 {
                let expected = if i < k { x.bit(i, 0) } else { y.bit(i - k, 0) };
                prop_assert_eq!(spliced.bit(i, 0), expected);
                prop_assert_eq!(moved.bit(i, 0), x.bit(i + k, 0));
            }
        }
    }
}
