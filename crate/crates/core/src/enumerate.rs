//! Enumeration of connected multigraphs with minimum degree 3 and a given
//! first Betti number, one representative per isomorphism class.
//!
//! A graph of rank `n` with all degrees at least 3 satisfies `2e >= 3v` and
//! `e = n + v - 1`, hence `v <= 2(n - 1)` and `e <= 3(n - 1)`. The search runs
//! over every vertex count in that range, every non-increasing degree
//! sequence with the right sum, and every multiplicity matrix realizing it.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

use crate::multigraph::{CanonicalKey, Multigraph};
use crate::schottky;
use crate::{Error, Result};

/// Ranks above this are refused unless the caller raises the ceiling.
pub const DEFAULT_RANK_CEILING: usize = 7;

pub fn vertex_bound(rank: usize) -> usize {
    2 * (rank - 1)
}

pub fn edge_bound(rank: usize) -> usize {
    3 * (rank - 1)
}

fn check_rank(rank: usize, ceiling: usize) -> Result<()> {
    if rank < 2 {
        return Err(Error::RankTooSmall(rank));
    }
    if rank > ceiling {
        return Err(Error::RankAboveCeiling { rank, ceiling });
    }
    Ok(())
}

/// Non-increasing degree sequences of length `v`, entries at least 3, summing
/// to `2(rank + v - 1)`.
pub fn degree_sequences(rank: usize, v: usize) -> Vec<Vec<usize>> {
    fn rec(left: usize, slots: usize, cap: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if slots == 0 {
            if left == 0 {
                out.push(cur.clone());
            }
            return;
        }
        // every remaining slot needs at least 3
        let max_here = cap.min(left.saturating_sub(3 * (slots - 1)));
        for d in (3..=max_here).rev() {
            cur.push(d);
            rec(left - d, slots - 1, d, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if v == 0 {
        return out;
    }
    let total = 2 * (rank + v - 1);
    rec(total, v, total, &mut Vec::new(), &mut out);
    out
}

/// Largest entry of any admissible degree sequence, per vertex count
/// `1..=2(rank - 1)`. Every graph of the class has its degree sequence among
/// these, so this bounds vertex degrees without enumerating graphs.
pub fn degree_census(rank: usize) -> Result<Vec<(usize, usize)>> {
    check_rank(rank, usize::MAX)?;
    Ok((1..=vertex_bound(rank))
        .map(|v| {
            let max = degree_sequences(rank, v)
                .iter()
                .map(|s| s[0])
                .max()
                .unwrap_or(0);
            (v, max)
        })
        .collect())
}

/// All isomorphism classes of rank `rank` with the default ceiling.
pub fn enumerate_rank(rank: usize) -> Result<Vec<Multigraph>> {
    enumerate_rank_with_ceiling(rank, DEFAULT_RANK_CEILING)
}

pub fn enumerate_rank_with_ceiling(rank: usize, ceiling: usize) -> Result<Vec<Multigraph>> {
    check_rank(rank, ceiling)?;
    let jobs: Vec<(usize, Vec<usize>)> = (1..=vertex_bound(rank))
        .flat_map(|v| degree_sequences(rank, v).into_iter().map(move |s| (v, s)))
        .collect();
    let found: Vec<BTreeMap<(usize, usize, CanonicalKey), Multigraph>> = jobs
        .par_iter()
        .map(|(_, seq)| realize(seq))
        .collect::<Result<_>>()?;
    let mut merged = BTreeMap::new();
    for part in found {
        merged.extend(part);
    }
    Ok(merged.into_values().collect())
}

/// The classes of rank `rank` with exactly `v` vertices.
pub fn enumerate_vertex_count(rank: usize, v: usize) -> Result<Vec<Multigraph>> {
    check_rank(rank, usize::MAX)?;
    let mut merged = BTreeMap::new();
    for seq in degree_sequences(rank, v) {
        merged.extend(realize(&seq)?);
    }
    Ok(merged.into_values().collect())
}

/// Connected graphs realizing `seq`, deduplicated, keyed for output order.
fn realize(seq: &[usize]) -> Result<BTreeMap<(usize, usize, CanonicalKey), Multigraph>> {
    let v = seq.len();
    let mut out = BTreeMap::new();
    let mut m = vec![vec![0usize; v]; v];
    let mut left = seq.to_vec();
    let mut err = None;
    fill_row(seq, 0, &mut m, &mut left, &mut |m| {
        if err.is_some() {
            return;
        }
        match representative(m) {
            Ok(Some((key, g))) => {
                out.entry((g.vertex_count(), g.edge_count(), key))
                    .or_insert(g);
            }
            Ok(None) => {}
            Err(e) => err = Some(e),
        }
    });
    match err {
        Some(e) => Err(e),
        None => Ok(out),
    }
}

fn representative(m: &[Vec<usize>]) -> Result<Option<(CanonicalKey, Multigraph)>> {
    let g = Multigraph::from_multiplicities(m)?;
    if !g.is_connected() {
        return Ok(None);
    }
    let matrix: Vec<Vec<u32>> = m
        .iter()
        .map(|row| row.iter().map(|&x| x as u32).collect())
        .collect();
    let (order, _) = crate::multigraph::canonical_form(&matrix);
    let canon = g.permute_vertices(&order)?;
    // rebuild from the matrix so edge order is canonical too
    let canon = Multigraph::from_multiplicities(&canon.multiplicity_matrix())?;
    let key = canon.canonical_key_with_limit(usize::MAX)?;
    Ok(Some((key, canon)))
}

// Symmetry breaking: within a run of equal degrees, loop counts are
// non-increasing. Every graph admits such a labeling.
fn fill_row(
    seq: &[usize],
    i: usize,
    m: &mut Vec<Vec<usize>>,
    left: &mut Vec<usize>,
    emit: &mut dyn FnMut(&[Vec<usize>]),
) {
    let v = seq.len();
    if i == v {
        emit(m);
        return;
    }
    let max_loops = if i > 0 && seq[i] == seq[i - 1] {
        m[i - 1][i - 1].min(left[i] / 2)
    } else {
        left[i] / 2
    };
    for loops in (0..=max_loops).rev() {
        m[i][i] = loops;
        left[i] -= 2 * loops;
        fill_cell(seq, i, i + 1, m, left, emit);
        left[i] += 2 * loops;
        m[i][i] = 0;
    }
}

fn fill_cell(
    seq: &[usize],
    i: usize,
    j: usize,
    m: &mut Vec<Vec<usize>>,
    left: &mut Vec<usize>,
    emit: &mut dyn FnMut(&[Vec<usize>]),
) {
    let v = seq.len();
    if j == v {
        if left[i] == 0 {
            fill_row(seq, i + 1, m, left, emit);
        }
        return;
    }
    let capacity: usize = left[j + 1..].iter().sum();
    let need = left[i];
    let lo = need.saturating_sub(capacity);
    let hi = need.min(left[j]);
    for k in (lo..=hi).rev() {
        m[i][j] = k;
        m[j][i] = k;
        left[i] -= k;
        left[j] -= k;
        fill_cell(seq, i, j + 1, m, left, emit);
        left[i] += k;
        left[j] += k;
    }
    m[i][j] = 0;
    m[j][i] = 0;
}

/// Observed extremes of an enumeration against the theoretical bounds.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EnumerationCertificate {
    pub rank: usize,
    pub graph_count: usize,
    pub max_vertices: usize,
    pub vertex_bound: usize,
    pub max_edges: usize,
    pub edge_bound: usize,
    pub max_degree: usize,
    pub degree_bound: usize,
    /// Number of graphs attaining `degree_bound`.
    pub max_degree_attained_by: usize,
    /// Largest translation length over all bases of all graphs.
    pub max_translation_length: usize,
    pub translation_length_bound: usize,
}

impl EnumerationCertificate {
    pub fn within_bounds(&self) -> bool {
        self.max_vertices <= self.vertex_bound
            && self.max_edges <= self.edge_bound
            && self.max_degree <= self.degree_bound
            && self.max_translation_length <= self.translation_length_bound
    }
}

pub fn certificate(rank: usize) -> Result<EnumerationCertificate> {
    let graphs = enumerate_rank(rank)?;
    certificate_for(rank, &graphs)
}

/// Certificate over an already computed enumeration.
pub fn certificate_for(rank: usize, graphs: &[Multigraph]) -> Result<EnumerationCertificate> {
    let degree_bound = 2 * rank;
    let lengths: Vec<usize> = graphs
        .par_iter()
        .map(schottky::max_translation_length)
        .collect::<Result<_>>()?;
    Ok(EnumerationCertificate {
        rank,
        graph_count: graphs.len(),
        max_vertices: graphs
            .iter()
            .map(Multigraph::vertex_count)
            .max()
            .unwrap_or(0),
        vertex_bound: vertex_bound(rank),
        max_edges: graphs.iter().map(Multigraph::edge_count).max().unwrap_or(0),
        edge_bound: edge_bound(rank),
        max_degree: graphs.iter().map(Multigraph::max_degree).max().unwrap_or(0),
        degree_bound,
        max_degree_attained_by: graphs
            .iter()
            .filter(|g| g.max_degree() == degree_bound)
            .count(),
        max_translation_length: lengths.into_iter().max().unwrap_or(0),
        translation_length_bound: vertex_bound(rank),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn degree_sequences_rank_two() {
        assert_eq!(degree_sequences(2, 1), vec![vec![4]]);
        assert_eq!(degree_sequences(2, 2), vec![vec![3, 3]]);
        assert!(degree_sequences(2, 3).is_empty());
    }

    #[test]
    fn rank_two_classes() {
        let graphs = enumerate_rank(2).unwrap();
        assert_eq!(graphs.len(), 3);
        let mats: Vec<_> = graphs.iter().map(Multigraph::multiplicity_matrix).collect();
        assert!(mats.contains(&vec![vec![2]]));
        assert!(mats.contains(&vec![vec![0, 3], vec![3, 0]]));
        assert!(mats.contains(&vec![vec![1, 1], vec![1, 1]]));
    }

    #[test]
    fn rank_errors() {
        assert_eq!(enumerate_rank(1).unwrap_err(), Error::RankTooSmall(1));
        assert_eq!(
            enumerate_rank(8).unwrap_err(),
            Error::RankAboveCeiling {
                rank: 8,
                ceiling: 7
            }
        );
    }

    #[test]
    fn certificate_rank_two() {
        let c = certificate(2).unwrap();
        assert_eq!(c.graph_count, 3);
        assert_eq!((c.max_vertices, c.vertex_bound), (2, 2));
        assert_eq!((c.max_edges, c.edge_bound), (3, 3));
        assert_eq!((c.max_degree, c.max_degree_attained_by), (4, 1));
        assert_eq!(c.max_translation_length, 2);
        assert!(c.within_bounds());
    }

    #[test]
    fn census_bounds_degree_below_rose() {
        for rank in 2..=6 {
            let census = degree_census(rank).unwrap();
            assert_eq!(census[0], (1, 2 * rank));
            assert!(census[1..].iter().all(|&(_, d)| d < 2 * rank));
        }
    }
}
