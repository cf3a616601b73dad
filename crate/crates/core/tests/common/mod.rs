#![allow(dead_code)]

use std::collections::BTreeSet;

use schottky_scale::multigraph::Multigraph;

/// All permutations of `0..n` in lexicographic order.
pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn rec(cur: &mut Vec<usize>, used: &mut Vec<bool>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == used.len() {
            out.push(cur.clone());
            return;
        }
        for i in 0..used.len() {
            if !used[i] {
                used[i] = true;
                cur.push(i);
                rec(cur, used, out);
                cur.pop();
                used[i] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::with_capacity(n), &mut vec![false; n], &mut out);
    out
}

/// Minimum upper-triangle encoding over every vertex relabeling.
pub fn brute_matrix_key(m: &[Vec<u32>]) -> Vec<u32> {
    let n = m.len();
    let mut best: Option<Vec<u32>> = None;
    for perm in permutations(n) {
        let mut code = Vec::with_capacity(1 + n * (n + 1) / 2);
        code.push(n as u32);
        for i in 0..n {
            for j in i..n {
                code.push(m[perm[i]][perm[j]]);
            }
        }
        if best.as_ref().is_none_or(|b| code < *b) {
            best = Some(code);
        }
    }
    best.unwrap_or_else(|| vec![0])
}

pub fn brute_key(g: &Multigraph) -> Vec<u32> {
    let m: Vec<Vec<u32>> = g
        .multiplicity_matrix()
        .iter()
        .map(|r| r.iter().map(|&x| x as u32).collect())
        .collect();
    brute_matrix_key(&m)
}

fn connected(v: usize, m: &[Vec<u32>]) -> bool {
    let mut seen = vec![false; v];
    let mut stack = vec![0];
    seen[0] = true;
    while let Some(x) = stack.pop() {
        for y in 0..v {
            if !seen[y] && m[x][y] > 0 {
                seen[y] = true;
                stack.push(y);
            }
        }
    }
    seen.into_iter().all(|s| s)
}

/// Isomorphism classes of connected multigraphs with minimum degree 3 and
/// first Betti number `rank`, found by listing every multiset of edges.
pub fn brute_force_classes(rank: usize) -> BTreeSet<Vec<u32>> {
    let mut classes = BTreeSet::new();
    for v in 1..=2 * (rank - 1) {
        let e = rank + v - 1;
        let pairs: Vec<(usize, usize)> = (0..v).flat_map(|i| (i..v).map(move |j| (i, j))).collect();
        let mut m = vec![vec![0u32; v]; v];
        multisets(&pairs, 0, e, &mut m, &mut |m| {
            let ok_degree = (0..v).all(|i| {
                let d: u32 = (0..v)
                    .map(|j| if i == j { 2 * m[i][i] } else { m[i][j] })
                    .sum();
                d >= 3
            });
            if ok_degree && connected(v, m) {
                classes.insert(brute_matrix_key(m));
            }
        });
    }
    classes
}

fn multisets(
    pairs: &[(usize, usize)],
    from: usize,
    left: usize,
    m: &mut Vec<Vec<u32>>,
    emit: &mut dyn FnMut(&[Vec<u32>]),
) {
    if left == 0 {
        emit(m);
        return;
    }
    for p in from..pairs.len() {
        let (i, j) = pairs[p];
        m[i][j] += 1;
        if i != j {
            m[j][i] += 1;
        }
        multisets(pairs, p, left - 1, m, emit);
        m[i][j] -= 1;
        if i != j {
            m[j][i] -= 1;
        }
    }
}

/// Edge subsets of size `k`.
pub fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(n: usize, k: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(n, k, i + 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, k, 0, &mut Vec::new(), &mut out);
    out
}
