//! Small worked examples with values fixed by hand or by independent counts.

use num_bigint::BigUint;
use num_rational::BigRational;
use schottky_scale::colors::{branch_iso_check, refine_dart_colors};
use schottky_scale::enumerate::enumerate_rank;
use schottky_scale::multigraph::Multigraph;
use schottky_scale::scale::{oracle_scale, ramification_profile, AxisWalk, Isometry, ScaleValue};
use schottky_scale::schottky::{spanning_trees, SchottkyElement};
use schottky_scale::volumes::{
    build_bs, build_cycle_gadget, exhaustive_volume, schottky_volume, svol_report,
};

fn theta() -> Multigraph {
    Multigraph::new(2, &[(0, 1), (0, 1), (0, 1)]).unwrap()
}

fn dumbbell() -> Multigraph {
    Multigraph::new(2, &[(0, 0), (0, 1), (1, 1)]).unwrap()
}

fn rational(n: u64) -> BigRational {
    BigRational::from_integer(n.into())
}

#[test]
fn dumbbell_is_one_color() {
    let g = dumbbell();
    let c = refine_dart_colors(&g).unwrap();
    assert_eq!(c.class_count(), 1);
    assert_eq!(c.rounds(), 0);
    assert!(branch_iso_check(&g, 0, 2, 4).unwrap());
}

#[test]
fn b3_separates_heads() {
    let g = build_bs(3, 3).unwrap();
    let c = refine_dart_colors(&g).unwrap();
    let into = |v: usize| -> Vec<usize> { g.darts().filter(|&d| g.head(d) == v).collect() };
    for &a in &into(0) {
        for &b in &into(1) {
            assert_ne!(c.color(a), c.color(b));
        }
    }
    let v0_loop = g
        .darts()
        .find(|&d| g.tail(d) == 0 && g.head(d) == 0)
        .unwrap();
    let bridge_to_v1 = g
        .darts()
        .find(|&d| g.tail(d) == 0 && g.head(d) == 1)
        .unwrap();
    assert_eq!(g.continuations(v0_loop).count(), 4);
    assert_eq!(g.continuations(bridge_to_v1).count(), 2);
    assert!(!branch_iso_check(&g, v0_loop, bridge_to_v1, 1).unwrap());
}

#[test]
fn dumbbell_loop_scale_two() {
    let g = dumbbell();
    let c = refine_dart_colors(&g).unwrap();
    let axis = AxisWalk::new(&g, vec![0]).unwrap();
    assert_eq!(ramification_profile(&g, &c, &axis).unwrap().values(), [2]);
    let o = oracle_scale(&g, &c, Isometry::Hyperbolic(&axis), 6).unwrap();
    assert!(o.stabilized);
    assert_eq!(o.ratio(), Some(&rational(2)));
}

#[test]
fn rose_oracle_ratio_three() {
    let g = Multigraph::new(1, &[(0, 0), (0, 0)]).unwrap();
    let c = refine_dart_colors(&g).unwrap();
    let axis = AxisWalk::new(&g, vec![0]).unwrap();
    let o = oracle_scale(&g, &c, Isometry::Hyperbolic(&axis), 6).unwrap();
    assert!(o.stabilized);
    assert_eq!(o.ratio(), Some(&rational(3)));
    // every step avoids only the reversal of the previous dart
    let expected: Vec<BigUint> = (1..=6).map(|k| BigUint::from(3u32).pow(k)).collect();
    assert_eq!(o.indices, expected);
}

#[test]
fn theta_oracle_ratio_four() {
    let g = theta();
    let c = refine_dart_colors(&g).unwrap();
    let tree = &spanning_trees(&g).unwrap()[0];
    let el = SchottkyElement::new(&g, &tree.mask(&g), 2 * tree.complement(&g)[0]).unwrap();
    assert_eq!(el.translation_length, 2);
    assert_eq!(
        ramification_profile(&g, &c, &el.axis).unwrap().values(),
        [2, 2]
    );
    let o = oracle_scale(&g, &c, Isometry::Hyperbolic(&el.axis), 8).unwrap();
    assert!(o.agrees_with(&ScaleValue::from_u64(4)));
}

#[test]
fn cycle_gadget_small_cases() {
    let g = build_cycle_gadget(2).unwrap();
    assert_eq!(g.canonical_key().unwrap(), theta().canonical_key().unwrap());
    let g = build_cycle_gadget(3).unwrap();
    assert_eq!((g.vertex_count(), g.edge_count()), (4, 6));
    assert!(g.degrees().iter().all(|&d| d == 3));
    assert_eq!(g.betti().unwrap(), 3);
}

#[test]
fn rank_two_volumes() {
    assert_eq!(
        schottky_volume(&dumbbell()).unwrap().volume,
        BigUint::from(4u32)
    );
    assert_eq!(
        schottky_volume(&theta()).unwrap().volume,
        BigUint::from(16u32)
    );
    let rose = Multigraph::new(1, &[(0, 0), (0, 0)]).unwrap();
    assert_eq!(schottky_volume(&rose).unwrap().volume, BigUint::from(9u32));
    for g in enumerate_rank(2).unwrap() {
        assert_eq!(
            schottky_volume(&g).unwrap().volume,
            exhaustive_volume(&g).unwrap()
        );
    }
    let report = svol_report(2).unwrap();
    assert_eq!(report.svol_schottky, BigUint::from(16u32));
    assert_eq!(
        (report.lower_bound, report.upper_bound),
        (9u32.into(), 81u32.into())
    );
}

#[test]
fn rank_maxima_are_homogeneous_thetas() {
    // two vertices joined by n + 1 edges cover the (n + 1)-regular tree; each
    // generator has length 2 and scale n^2, so the volume is n^(2n)
    for rank in 2..=4usize {
        let report = svol_report(rank).unwrap();
        let expected = BigUint::from(rank).pow(2 * rank as u32);
        assert_eq!(report.svol_schottky, expected, "rank {rank}");
        let theta_n = Multigraph::new(2, &vec![(0, 1); rank + 1]).unwrap();
        assert_eq!(schottky_volume(&theta_n).unwrap().volume, expected);
    }
}

#[test]
fn class_counts() {
    let counts: Vec<usize> = (2..=4).map(|n| enumerate_rank(n).unwrap().len()).collect();
    assert_eq!(counts, [3, 15, 111]);
}
