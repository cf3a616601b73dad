//! Maximal subtrees and the free bases they determine.
//!
//! Fix a spanning tree `Y` of the quotient graph and an orientation of every
//! edge outside `Y`. Each such edge `e`, oriented from `o(e)` to `t(e)`, gives a
//! free generator whose axis projects onto the closed walk "cross `e`, then
//! return from `t(e)` to `o(e)` inside `Y`". The translation length is the
//! length of that walk, `d_Y(o(e), t(e)) + 1`. Nothing else about the lift is
//! kept: the scale of the generator depends only on this projected walk.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::multigraph::{rev, Dart, Multigraph};
use crate::scale::AxisWalk;
use crate::{Error, Result};

/// Edge ids of a spanning tree, sorted.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct SpanningTree {
    edges: Vec<usize>,
}

impl SpanningTree {
    /// Validates that `edges` is a spanning tree of `g`.
    pub fn new(g: &Multigraph, edges: impl IntoIterator<Item = usize>) -> Result<Self> {
        let mut edges: Vec<usize> = edges.into_iter().collect();
        edges.sort_unstable();
        edges.dedup();
        let n = g.vertex_count();
        if n == 0 {
            return Err(Error::NotSpanningTree("graph has no vertices".into()));
        }
        if edges.len() != n - 1 {
            return Err(Error::NotSpanningTree(format!(
                "{} edges given, a spanning tree has {}",
                edges.len(),
                n - 1
            )));
        }
        let mut comp: Vec<usize> = (0..n).collect();
        for &e in &edges {
            if e >= g.edge_count() {
                return Err(Error::NotSpanningTree(format!("edge {e} does not exist")));
            }
            let (a, b) = g.endpoints(e);
            let (ca, cb) = (comp[a], comp[b]);
            if ca == cb {
                return Err(Error::NotSpanningTree(format!("edge {e} closes a cycle")));
            }
            comp.iter_mut().filter(|c| **c == cb).for_each(|c| *c = ca);
        }
        Ok(SpanningTree { edges })
    }

    pub fn edges(&self) -> &[usize] {
        &self.edges
    }

    pub fn contains(&self, e: usize) -> bool {
        self.edges.binary_search(&e).is_ok()
    }

    /// Boolean mask over all edge ids of `g`.
    pub fn mask(&self, g: &Multigraph) -> Vec<bool> {
        let mut mask = vec![false; g.edge_count()];
        for &e in &self.edges {
            mask[e] = true;
        }
        mask
    }

    /// Edges of `g` outside the tree, in increasing order.
    pub fn complement(&self, g: &Multigraph) -> Vec<usize> {
        (0..g.edge_count()).filter(|&e| !self.contains(e)).collect()
    }
}

/// All spanning trees of a connected graph, sorted by edge list.
///
/// Deletion-contraction: an edge is either contracted into the tree (allowed
/// when it is not a loop of the current minor) or deleted (allowed when the
/// minor stays connected).
pub fn spanning_trees(g: &Multigraph) -> Result<Vec<SpanningTree>> {
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    let comp: Vec<usize> = (0..g.vertex_count()).collect();
    let mut out = Vec::new();
    let mut chosen = Vec::new();
    collect_trees(g, 0, comp, &mut chosen, &mut out);
    out.sort();
    Ok(out)
}

fn collect_trees(
    g: &Multigraph,
    e: usize,
    comp: Vec<usize>,
    chosen: &mut Vec<usize>,
    out: &mut Vec<SpanningTree>,
) {
    if chosen.len() + 1 == g.vertex_count() {
        out.push(SpanningTree {
            edges: chosen.clone(),
        });
        return;
    }
    if e == g.edge_count() {
        return;
    }
    let (a, b) = g.endpoints(e);
    let (ca, cb) = (comp[a], comp[b]);
    if ca != cb {
        let mut contracted = comp.clone();
        contracted
            .iter_mut()
            .filter(|c| **c == cb)
            .for_each(|c| *c = ca);
        chosen.push(e);
        collect_trees(g, e + 1, contracted, chosen, out);
        chosen.pop();
    }
    if minor_connected_without(g, e, &comp) {
        collect_trees(g, e + 1, comp, chosen, out);
    }
}

// Is the minor (components of `comp`, joined by edges after `e`) connected?
fn minor_connected_without(g: &Multigraph, e: usize, comp: &[usize]) -> bool {
    let mut label = comp.to_vec();
    for f in e + 1..g.edge_count() {
        let (a, b) = g.endpoints(f);
        let (ca, cb) = (label[a], label[b]);
        if ca != cb {
            label.iter_mut().filter(|c| **c == cb).for_each(|c| *c = ca);
        }
    }
    label.iter().all(|&c| c == label[0])
}

/// Number of spanning trees by the matrix-tree theorem (exact Bareiss
/// elimination of the reduced Laplacian; loops ignored, parallel edges counted).
pub fn spanning_tree_count(g: &Multigraph) -> u128 {
    let n = g.vertex_count();
    if n <= 1 {
        return u128::from(n == 1);
    }
    let m = g.multiplicity_matrix();
    let size = n - 1;
    let mut a: Vec<Vec<i128>> = (1..n)
        .map(|i| {
            (1..n)
                .map(|j| {
                    if i == j {
                        (0..n).filter(|&k| k != i).map(|k| m[i][k] as i128).sum()
                    } else {
                        -(m[i][j] as i128)
                    }
                })
                .collect()
        })
        .collect();
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..size {
        if a[k][k] == 0 {
            match (k + 1..size).find(|&r| a[r][k] != 0) {
                Some(r) => {
                    a.swap(k, r);
                    sign = -sign;
                }
                None => return 0,
            }
        }
        for i in k + 1..size {
            for j in k + 1..size {
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
            }
        }
        prev = a[k][k];
    }
    (sign * a[size - 1][size - 1]) as u128
}

/// Chosen dart for every edge outside the tree.
pub type Orientation = BTreeMap<usize, Dart>;

/// Orientation taking dart `2e` (tail at the first listed endpoint) for every
/// non-tree edge `e`.
pub fn default_orientation(g: &Multigraph, tree: &SpanningTree) -> Orientation {
    tree.complement(g).into_iter().map(|e| (e, 2 * e)).collect()
}

/// One free generator, seen through its projected axis.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SchottkyElement {
    pub edge: usize,
    pub dart: Dart,
    pub translation_length: usize,
    pub axis: AxisWalk,
}

impl SchottkyElement {
    /// The element for non-tree dart `dart`: its axis crosses `dart` and
    /// returns to the tail of `dart` along the tree.
    pub fn new(g: &Multigraph, tree_mask: &[bool], dart: Dart) -> Result<Self> {
        if dart >= g.dart_count() {
            return Err(Error::DartOutOfRange {
                dart,
                dart_count: g.dart_count(),
            });
        }
        let edge = Multigraph::edge_of(dart);
        if tree_mask[edge] {
            return Err(Error::InvalidArgument(format!(
                "edge {edge} belongs to the tree"
            )));
        }
        let back = g
            .path_in(tree_mask, g.head(dart), g.tail(dart))
            .ok_or_else(|| Error::NotSpanningTree("tree does not span the graph".into()))?;
        let mut darts = Vec::with_capacity(back.len() + 1);
        darts.push(dart);
        darts.extend(back);
        let translation_length = darts.len();
        Ok(SchottkyElement {
            edge,
            dart,
            translation_length,
            axis: AxisWalk::new(g, darts)?,
        })
    }

    /// The inverse generator, built from the reversed dart.
    pub fn inverse(&self, g: &Multigraph, tree_mask: &[bool]) -> Result<Self> {
        SchottkyElement::new(g, tree_mask, rev(self.dart))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SchottkyBasis {
    pub tree: SpanningTree,
    pub orientation: Orientation,
    pub elements: Vec<SchottkyElement>,
}

/// The basis determined by a spanning tree and an orientation of the edges
/// outside it. Elements are ordered by edge id.
pub fn schottky_basis(
    g: &Multigraph,
    tree: &SpanningTree,
    orientation: &Orientation,
) -> Result<SchottkyBasis> {
    // revalidate: the tree may come from a different graph
    let tree = SpanningTree::new(g, tree.edges().iter().copied())?;
    let mask = tree.mask(g);
    let mut elements = Vec::new();
    let mut used = Orientation::new();
    for e in tree.complement(g) {
        let &dart = orientation.get(&e).ok_or(Error::MissingOrientation(e))?;
        if Multigraph::edge_of(dart) != e {
            return Err(Error::InvalidArgument(format!(
                "dart {dart} does not belong to edge {e}"
            )));
        }
        used.insert(e, dart);
        elements.push(SchottkyElement::new(g, &mask, dart)?);
    }
    Ok(SchottkyBasis {
        tree,
        orientation: used,
        elements,
    })
}

/// Largest translation length of any basis element over all spanning trees.
pub fn max_translation_length(g: &Multigraph) -> Result<usize> {
    let mut best = 0;
    for tree in spanning_trees(g)? {
        let mask = tree.mask(g);
        for e in tree.complement(g) {
            let (a, b) = g.endpoints(e);
            let path = g
                .path_in(&mask, b, a)
                .expect("spanning tree connects all vertices");
            best = best.max(path.len() + 1);
        }
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn theta() -> Multigraph {
        Multigraph::new(2, &[(0, 1), (0, 1), (0, 1)]).unwrap()
    }

    #[test]
    fn tree_examples() {
        let rose = Multigraph::new(1, &[(0, 0), (0, 0), (0, 0)]).unwrap();
        let trees = spanning_trees(&rose).unwrap();
        assert_eq!(trees.len(), 1);
        assert!(trees[0].edges().is_empty());

        assert_eq!(spanning_trees(&theta()).unwrap().len(), 3);
        assert_eq!(spanning_tree_count(&theta()), 3);

        let dumbbell = Multigraph::new(2, &[(0, 0), (0, 1), (1, 1)]).unwrap();
        let trees = spanning_trees(&dumbbell).unwrap();
        assert_eq!(trees.len(), 1);
        assert_eq!(trees[0].edges(), &[1]);
    }

    #[test]
    fn k4_has_sixteen_trees() {
        let k4 = Multigraph::new(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).unwrap();
        assert_eq!(spanning_trees(&k4).unwrap().len(), 16);
        assert_eq!(spanning_tree_count(&k4), 16);
    }

    #[test]
    fn disconnected_rejected() {
        let g = Multigraph::new(2, &[(0, 0), (1, 1)]).unwrap();
        assert_eq!(spanning_trees(&g), Err(Error::Disconnected));
    }

    #[test]
    fn tree_validation() {
        let g = theta();
        assert!(SpanningTree::new(&g, [2]).is_ok());
        assert!(SpanningTree::new(&g, []).is_err());
        assert!(SpanningTree::new(&g, [0, 1]).is_err());
        assert!(SpanningTree::new(&g, [7]).is_err());
        let rose = Multigraph::new(1, &[(0, 0)]).unwrap();
        assert!(SpanningTree::new(&rose, [0]).is_err());
    }

    #[test]
    fn theta_basis() {
        let g = theta();
        let tree = SpanningTree::new(&g, [0]).unwrap();
        let basis = schottky_basis(&g, &tree, &default_orientation(&g, &tree)).unwrap();
        assert_eq!(basis.elements.len(), 2);
        for el in &basis.elements {
            assert_eq!(el.translation_length, 2);
            assert_eq!(el.axis.len(), 2);
        }
        // crossing edge 1 forward (dart 2), back along edge 0 (dart 1)
        assert_eq!(basis.elements[0].axis.darts(), &[2, 1]);
    }

    #[test]
    fn loops_have_length_one() {
        let g = Multigraph::new(2, &[(0, 0), (0, 1), (1, 1)]).unwrap();
        let tree = SpanningTree::new(&g, [1]).unwrap();
        let basis = schottky_basis(&g, &tree, &default_orientation(&g, &tree)).unwrap();
        assert_eq!(
            basis
                .elements
                .iter()
                .map(|e| e.translation_length)
                .collect::<Vec<_>>(),
            vec![1, 1]
        );
    }

    #[test]
    fn orientation_errors() {
        let g = theta();
        let tree = SpanningTree::new(&g, [0]).unwrap();
        let partial = Orientation::from([(1, 2)]);
        assert_eq!(
            schottky_basis(&g, &tree, &partial).unwrap_err(),
            Error::MissingOrientation(2)
        );
        let wrong = Orientation::from([(1, 2), (2, 0)]);
        assert!(schottky_basis(&g, &tree, &wrong).is_err());
    }

    #[test]
    fn inverse_reverses_axis() {
        let g = theta();
        let tree = SpanningTree::new(&g, [0]).unwrap();
        let mask = tree.mask(&g);
        let el = SchottkyElement::new(&g, &mask, 2).unwrap();
        let inv = el.inverse(&g, &mask).unwrap();
        assert_eq!(inv.axis.darts(), &[3, 0]);
        assert_eq!(inv.translation_length, 2);
    }
}
