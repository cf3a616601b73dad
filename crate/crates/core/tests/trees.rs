mod common;

use std::collections::BTreeSet;

use common::subsets;
use proptest::prelude::*;
use schottky_scale::colors::refine_dart_colors;
use schottky_scale::enumerate::enumerate_rank;
use schottky_scale::multigraph::{rev, Multigraph};
use schottky_scale::schottky::{
    default_orientation, schottky_basis, spanning_tree_count, spanning_trees, Orientation,
    SpanningTree,
};

/// Trees as edge subsets of size v - 1 that connect every vertex.
fn brute_trees(g: &Multigraph) -> BTreeSet<Vec<usize>> {
    let v = g.vertex_count();
    subsets(g.edge_count(), v - 1)
        .into_iter()
        .filter(|s| {
            let mut parent: Vec<usize> = (0..v).collect();
            fn find(p: &mut Vec<usize>, x: usize) -> usize {
                if p[x] != x {
                    let r = find(p, p[x]);
                    p[x] = r;
                }
                p[x]
            }
            s.iter().all(|&e| {
                let (a, b) = g.endpoints(e);
                let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
                parent[ra] = rb;
                ra != rb
            })
        })
        .collect()
}

#[test]
fn spanning_trees_match_subset_oracle() {
    for rank in 2..=4 {
        for g in enumerate_rank(rank).unwrap() {
            let listed: Vec<Vec<usize>> = spanning_trees(&g)
                .unwrap()
                .iter()
                .map(|t| t.edges().to_vec())
                .collect();
            let distinct: BTreeSet<_> = listed.iter().cloned().collect();
            assert_eq!(distinct.len(), listed.len());
            assert_eq!(distinct, brute_trees(&g));
            assert_eq!(spanning_tree_count(&g), listed.len() as u128);
        }
    }
}

#[test]
fn theta_has_three_trees() {
    let theta = Multigraph::new(2, &[(0, 1), (0, 1), (0, 1)]).unwrap();
    assert_eq!(spanning_trees(&theta).unwrap().len(), 3);
    assert_eq!(spanning_tree_count(&theta), 3);
}

#[test]
fn k4_and_cycle_counts() {
    let k4 = Multigraph::new(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).unwrap();
    assert_eq!(spanning_tree_count(&k4), 16);
    assert_eq!(spanning_trees(&k4).unwrap().len(), 16);
}

#[test]
fn basis_elements_are_closed_walks() {
    for rank in 2..=3 {
        for g in enumerate_rank(rank).unwrap() {
            for tree in spanning_trees(&g).unwrap() {
                let basis = schottky_basis(&g, &tree, &default_orientation(&g, &tree)).unwrap();
                assert_eq!(basis.elements.len(), rank);
                for el in &basis.elements {
                    let darts = el.axis.darts();
                    assert_eq!(darts[0], el.dart);
                    assert_eq!(el.translation_length, darts.len());
                    for i in 0..darts.len() {
                        let next = darts[(i + 1) % darts.len()];
                        assert_eq!(g.head(darts[i]), g.tail(next));
                        assert_ne!(next, rev(darts[i]), "backtracking axis");
                    }
                    assert!(darts[1..].iter().all(|&d| tree.contains(d / 2)));
                }
            }
        }
    }
}

/// Every map choosing one dart per non-tree edge.
fn orientations(g: &Multigraph, tree: &SpanningTree) -> Vec<Orientation> {
    let complement = tree.complement(g);
    (0u32..1 << complement.len())
        .map(|bits| {
            complement
                .iter()
                .enumerate()
                .map(|(i, &e)| (e, 2 * e + ((bits >> i) & 1) as usize))
                .collect()
        })
        .collect()
}

#[test]
fn basis_data_is_independent_of_orientation() {
    for rank in 2..=3 {
        for g in enumerate_rank(rank).unwrap() {
            let colors = refine_dart_colors(&g).unwrap();
            for tree in spanning_trees(&g).unwrap() {
                let signature = |o: &Orientation| {
                    let basis = schottky_basis(&g, &tree, o).unwrap();
                    let mut words: Vec<_> = basis
                        .elements
                        .iter()
                        .map(|el| {
                            (
                                el.translation_length,
                                el.axis.undirected_key(|d| colors.color(d)),
                                el.axis.undirected_key(|d| g.tail(d)),
                            )
                        })
                        .collect();
                    words.sort();
                    words
                };
                let all = orientations(&g, &tree);
                let first = signature(&all[0]);
                for o in &all[1..] {
                    assert_eq!(signature(o), first);
                }
            }
        }
    }
}

#[test]
fn missing_orientation_is_rejected() {
    let theta = Multigraph::new(2, &[(0, 1), (0, 1), (0, 1)]).unwrap();
    let tree = SpanningTree::new(&theta, [0]).unwrap();
    let partial: Orientation = [(1, 2)].into_iter().collect();
    assert!(schottky_basis(&theta, &tree, &partial).is_err());
}

proptest! {
    #[test]
    fn matrix_tree_count_matches_listing(
        v in 1usize..=4,
        edges in prop::collection::vec((0usize..4, 0usize..4), 0..8),
    ) {
        let edges: Vec<_> = edges.into_iter().map(|(a, b)| (a % v, b % v)).collect();
        let g = Multigraph::new(v, &edges).unwrap();
        prop_assume!(g.is_connected());
        let listed = spanning_trees(&g).unwrap();
        prop_assert_eq!(spanning_tree_count(&g), listed.len() as u128);
        prop_assert_eq!(listed.len(), brute_trees(&g).len());
    }
}
