//! Finite multigraphs with loops and parallel edges, stored as darts.
//!
//! Edge `i` owns the darts `2i` and `2i + 1`; dart `2i` is tailed at the first
//! endpoint the edge was built from. The reversal involution is `d ^ 1`, so a
//! loop is simply an edge whose two darts share a tail.

mod canon;
mod io;

use std::collections::VecDeque;

use crate::{Error, Result};

pub use canon::{canonical_form, CanonicalKey, DEFAULT_CANON_LIMIT};
pub use io::GraphRecord;

/// Half-edge identifier.
pub type Dart = usize;

/// Reversal of a dart.
#[inline]
pub fn rev(d: Dart) -> Dart {
    d ^ 1
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Multigraph {
    vertex_count: usize,
    tails: Vec<usize>,
    // darts leaving each vertex, in increasing dart order
    out: Vec<Vec<Dart>>,
}

impl Multigraph {
    /// Builds a multigraph from unordered endpoint pairs. `(a, a)` is a loop.
    pub fn new(vertex_count: usize, edges: &[(usize, usize)]) -> Result<Self> {
        if vertex_count == 0 && !edges.is_empty() {
            return Err(Error::EmptyVertexSet);
        }
        let mut tails = Vec::with_capacity(2 * edges.len());
        for (i, &(a, b)) in edges.iter().enumerate() {
            for endpoint in [a, b] {
                if endpoint >= vertex_count {
                    return Err(Error::EndpointOutOfRange {
                        edge: i,
                        endpoint,
                        vertex_count,
                    });
                }
            }
            tails.push(a);
            tails.push(b);
        }
        let mut out = vec![Vec::new(); vertex_count];
        for (d, &t) in tails.iter().enumerate() {
            out[t].push(d);
        }
        Ok(Multigraph {
            vertex_count,
            tails,
            out,
        })
    }

    /// Builds a multigraph from a symmetric multiplicity matrix. The diagonal
    /// holds loop counts. Edges are emitted row by row: loops first, then
    /// edges to higher-numbered vertices.
    pub fn from_multiplicities(matrix: &[Vec<usize>]) -> Result<Self> {
        let n = matrix.len();
        let mut edges = Vec::new();
        for (i, row) in matrix.iter().enumerate() {
            if row.len() != n {
                return Err(Error::InvalidArgument(format!(
                    "multiplicity matrix row {i} has length {}, expected {n}",
                    row.len()
                )));
            }
            for (j, &m) in row.iter().enumerate().skip(i) {
                if matrix[j][i] != m {
                    return Err(Error::InvalidArgument(format!(
                        "multiplicity matrix is not symmetric at ({i}, {j})"
                    )));
                }
                edges.extend(std::iter::repeat_n((i, j), m));
            }
        }
        Multigraph::new(n, &edges)
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edge_count(&self) -> usize {
        self.tails.len() / 2
    }

    pub fn dart_count(&self) -> usize {
        self.tails.len()
    }

    pub fn darts(&self) -> std::ops::Range<Dart> {
        0..self.tails.len()
    }

    #[inline]
    pub fn tail(&self, d: Dart) -> usize {
        self.tails[d]
    }

    #[inline]
    pub fn head(&self, d: Dart) -> usize {
        self.tails[rev(d)]
    }

    #[inline]
    pub fn edge_of(d: Dart) -> usize {
        d / 2
    }

    /// The two endpoints of edge `e`, in the order it was built.
    pub fn endpoints(&self, e: usize) -> (usize, usize) {
        (self.tails[2 * e], self.tails[2 * e + 1])
    }

    pub fn is_loop(&self, e: usize) -> bool {
        let (a, b) = self.endpoints(e);
        a == b
    }

    /// Darts whose tail is `v`.
    pub fn darts_at(&self, v: usize) -> &[Dart] {
        &self.out[v]
    }

    /// Non-backtracking continuations of `d`: darts leaving `head(d)` other than `rev(d)`.
    pub fn continuations(&self, d: Dart) -> impl Iterator<Item = Dart> + '_ {
        let back = rev(d);
        self.out[self.head(d)]
            .iter()
            .copied()
            .filter(move |&x| x != back)
    }

    /// Number of darts with tail `v`; a loop counts twice.
    pub fn degree(&self, v: usize) -> usize {
        self.out[v].len()
    }

    pub fn degrees(&self) -> Vec<usize> {
        self.out.iter().map(Vec::len).collect()
    }

    pub fn min_degree(&self) -> usize {
        self.out.iter().map(Vec::len).min().unwrap_or(0)
    }

    pub fn max_degree(&self) -> usize {
        self.out.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        (0..self.edge_count()).map(|e| self.endpoints(e)).collect()
    }

    /// Symmetric matrix of edge multiplicities; loops on the diagonal.
    pub fn multiplicity_matrix(&self) -> Vec<Vec<usize>> {
        let n = self.vertex_count;
        let mut m = vec![vec![0; n]; n];
        for e in 0..self.edge_count() {
            let (a, b) = self.endpoints(e);
            m[a][b] += 1;
            if a != b {
                m[b][a] += 1;
            }
        }
        m
    }

    pub fn is_connected(&self) -> bool {
        if self.vertex_count == 0 {
            return false;
        }
        let mut seen = vec![false; self.vertex_count];
        let mut queue = VecDeque::from([0]);
        seen[0] = true;
        let mut reached = 1;
        while let Some(v) = queue.pop_front() {
            for &d in &self.out[v] {
                let w = self.head(d);
                if !seen[w] {
                    seen[w] = true;
                    reached += 1;
                    queue.push_back(w);
                }
            }
        }
        reached == self.vertex_count
    }

    /// First Betti number `e - v + 1` of a connected graph.
    pub fn betti(&self) -> Result<usize> {
        if !self.is_connected() {
            return Err(Error::Disconnected);
        }
        Ok(self.edge_count() + 1 - self.vertex_count)
    }

    /// True when the graph is connected, every degree is at least 3 and the
    /// Betti number is `rank`.
    pub fn is_admissible(&self, rank: usize) -> bool {
        self.min_degree() >= 3 && self.betti().ok() == Some(rank)
    }

    /// Relabels vertices: vertex `v` becomes `perm[v]`. Edge order and dart
    /// numbering are kept.
    pub fn permute_vertices(&self, perm: &[usize]) -> Result<Self> {
        if perm.len() != self.vertex_count {
            return Err(Error::InvalidArgument(format!(
                "permutation has length {}, expected {}",
                perm.len(),
                self.vertex_count
            )));
        }
        let mut seen = vec![false; perm.len()];
        for &p in perm {
            if p >= perm.len() || std::mem::replace(&mut seen[p], true) {
                return Err(Error::InvalidArgument("not a permutation".into()));
            }
        }
        let edges: Vec<_> = self
            .edges()
            .into_iter()
            .map(|(a, b)| (perm[a], perm[b]))
            .collect();
        Multigraph::new(self.vertex_count, &edges)
    }

    /// Canonical key with the default vertex limit.
    pub fn canonical_key(&self) -> Result<CanonicalKey> {
        self.canonical_key_with_limit(DEFAULT_CANON_LIMIT)
    }

    pub fn canonical_key_with_limit(&self, limit: usize) -> Result<CanonicalKey> {
        if self.vertex_count > limit {
            return Err(Error::TooLarge {
                vertex_count: self.vertex_count,
                limit,
            });
        }
        let m: Vec<Vec<u32>> = self
            .multiplicity_matrix()
            .into_iter()
            .map(|row| row.into_iter().map(|x| x as u32).collect())
            .collect();
        Ok(CanonicalKey::from_matrix(&m))
    }

    /// Breadth-first path inside the edge subset `edges` (given as a mask over
    /// edge ids) from `from` to `to`, as a list of darts. `None` if unreachable.
    pub fn path_in(&self, edge_mask: &[bool], from: usize, to: usize) -> Option<Vec<Dart>> {
        let mut via: Vec<Option<Dart>> = vec![None; self.vertex_count];
        let mut seen = vec![false; self.vertex_count];
        seen[from] = true;
        let mut queue = VecDeque::from([from]);
        while let Some(v) = queue.pop_front() {
            if v == to {
                break;
            }
            for &d in &self.out[v] {
                if !edge_mask[Self::edge_of(d)] {
                    continue;
                }
                let w = self.head(d);
                if !seen[w] {
                    seen[w] = true;
                    via[w] = Some(d);
                    queue.push_back(w);
                }
            }
        }
        if !seen[to] {
            return None;
        }
        let mut path = Vec::new();
        let mut v = to;
        while v != from {
            let d = via[v].expect("reached vertex has a predecessor dart");
            path.push(d);
            v = self.tail(d);
        }
        path.reverse();
        Some(path)
    }
}
