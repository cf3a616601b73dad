//! Canonical labeling of small multigraphs.
//!
//! The key is the lexicographically smallest upper-triangular encoding of the
//! multiplicity matrix over all vertex orders compatible with an equitable
//! refinement of the vertex partition. Refinement and the choice of the cell
//! to individualize depend only on isomorphism-invariant data, so the set of
//! leaves of the search is mapped onto itself by every isomorphism.

use std::fmt;

use serde::{Serialize, Serializer};

/// Largest vertex count accepted by [`Multigraph::canonical_key`](super::Multigraph::canonical_key).
pub const DEFAULT_CANON_LIMIT: usize = 12;

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CanonicalKey(Vec<u8>);

impl CanonicalKey {
    /// Key of a symmetric matrix with arbitrary `u32` entries. The diagonal
    /// is treated as a vertex label (loop count) and off-diagonal entries as
    /// edge labels (multiplicities, or packed colored multiplicities).
    pub fn from_matrix(matrix: &[Vec<u32>]) -> Self {
        let (_, code) = canonical_form(matrix);
        let mut bytes = Vec::with_capacity(4 * (code.len() + 1));
        bytes.extend_from_slice(&(matrix.len() as u32).to_be_bytes());
        for x in code {
            bytes.extend_from_slice(&x.to_be_bytes());
        }
        CanonicalKey(bytes)
    }

    pub fn as_bytes(&self) -> &[u8] {
        &self.0
    }

    pub fn to_hex(&self) -> String {
        self.0.iter().map(|b| format!("{b:02x}")).collect()
    }
}

impl fmt::Debug for CanonicalKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CanonicalKey({})", self.to_hex())
    }
}

impl fmt::Display for CanonicalKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_hex())
    }
}

impl Serialize for CanonicalKey {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_hex())
    }
}

/// Returns a canonical vertex order (`order[v]` is the new position of `v`)
/// and the corresponding upper-triangular row-major encoding.
pub fn canonical_form(matrix: &[Vec<u32>]) -> (Vec<usize>, Vec<u32>) {
    let n = matrix.len();
    if n == 0 {
        return (Vec::new(), Vec::new());
    }
    let mut best: Option<(Vec<u32>, Vec<usize>)> = None;
    let colors = vec![0u32; n];
    search(matrix, colors, &mut best);
    let (code, order) = best.expect("search visits at least one leaf");
    (order, code)
}

fn search(m: &[Vec<u32>], mut colors: Vec<u32>, best: &mut Option<(Vec<u32>, Vec<usize>)>) {
    refine(m, &mut colors);
    let n = m.len();
    let mut cell_size = vec![0usize; n];
    for &c in &colors {
        cell_size[c as usize] += 1;
    }
    match cell_size.iter().position(|&s| s > 1) {
        None => {
            let order: Vec<usize> = colors.iter().map(|&c| c as usize).collect();
            let code = encode(m, &order);
            if best.as_ref().is_none_or(|(b, _)| code < *b) {
                *best = Some((code, order));
            }
        }
        Some(target) => {
            let target = target as u32;
            let cell: Vec<usize> = (0..n).filter(|&v| colors[v] == target).collect();
            for (i, &x) in cell.iter().enumerate() {
                // swapping twins is an automorphism fixing the partition, so
                // their subtrees yield the same leaves
                if cell[..i].iter().any(|&y| are_twins(m, x, y)) {
                    continue;
                }
                let mut next: Vec<u32> = colors
                    .iter()
                    .enumerate()
                    .map(|(v, &c)| 2 * c + u32::from(c == target && v != x))
                    .collect();
                rank_in_place(&mut next);
                search(m, next, best);
            }
        }
    }
}

fn are_twins(m: &[Vec<u32>], a: usize, b: usize) -> bool {
    m[a][a] == m[b][b] && (0..m.len()).all(|u| u == a || u == b || m[a][u] == m[b][u])
}

fn encode(m: &[Vec<u32>], order: &[usize]) -> Vec<u32> {
    let n = m.len();
    let mut inverse = vec![0; n];
    for (v, &p) in order.iter().enumerate() {
        inverse[p] = v;
    }
    let mut code = Vec::with_capacity(n * (n + 1) / 2);
    for i in 0..n {
        for j in i..n {
            code.push(m[inverse[i]][inverse[j]]);
        }
    }
    code
}

/// Replaces values by their dense rank, preserving order.
fn rank_in_place(colors: &mut [u32]) {
    let mut distinct: Vec<u32> = colors.to_vec();
    distinct.sort_unstable();
    distinct.dedup();
    for c in colors.iter_mut() {
        *c = distinct.binary_search(c).expect("value present") as u32;
    }
}

/// Own color, loop count, and sorted (neighbor color, multiplicity) pairs.
type Signature = (u32, u32, Vec<(u32, u32)>);

/// Equitable refinement. Colors must be dense ranks on entry; the relative
/// order of existing cells is preserved.
fn refine(m: &[Vec<u32>], colors: &mut [u32]) {
    let n = m.len();
    rank_in_place(colors);
    let mut classes = colors.iter().max().map_or(0, |&c| c as usize + 1);
    loop {
        let sigs: Vec<Signature> = (0..n)
            .map(|v| {
                let mut nb: Vec<(u32, u32)> = (0..n)
                    .filter(|&u| u != v && m[v][u] != 0)
                    .map(|u| (colors[u], m[v][u]))
                    .collect();
                nb.sort_unstable();
                (colors[v], m[v][v], nb)
            })
            .collect();
        let mut distinct: Vec<&Signature> = sigs.iter().collect();
        distinct.sort_unstable();
        distinct.dedup();
        for (v, sig) in sigs.iter().enumerate() {
            colors[v] = distinct.binary_search(&sig).expect("signature present") as u32;
        }
        if distinct.len() == classes {
            break;
        }
        classes = distinct.len();
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn refinement_splits_by_loops() {
        // one vertex with a loop, two without, all joined in a path
        let m = vec![vec![0, 1, 0], vec![1, 1, 1], vec![0, 1, 0]];
        let mut colors = vec![0, 0, 0];
        refine(&m, &mut colors);
        assert_eq!(colors[0], colors[2]);
        assert_ne!(colors[0], colors[1]);
    }

    #[test]
    fn order_is_a_permutation() {
        let m = vec![
            vec![0, 1, 0, 2],
            vec![1, 0, 2, 0],
            vec![0, 2, 0, 1],
            vec![2, 0, 1, 0],
        ];
        let (mut order, code) = canonical_form(&m);
        assert_eq!(code.len(), 10);
        order.sort_unstable();
        assert_eq!(order, vec![0, 1, 2, 3]);
    }

    #[test]
    fn empty_matrix() {
        assert_eq!(canonical_form(&[]), (vec![], vec![]));
    }
}
