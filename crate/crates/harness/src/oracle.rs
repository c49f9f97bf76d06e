//! Brute-force references every maintained answer is checked against.

use num_bigint::BigUint;
use num_traits::{One, Zero};

pub type Dist = Option<u32>;

/// Breadth-first search truncated at `h` hops.
pub fn bfs_h(adj: &[Vec<bool>], s: usize, h: usize) -> Vec<Dist> {
    let n = adj.len();
    let mut dist = vec![None; n];
    dist[s] = Some(0);
    let mut frontier = vec![s];
    for d in 1..=h as u32 {
        if frontier.is_empty() {
            break;
        }
        let mut next = Vec::new();
        for &u in &frontier {
            for v in 0..n {
                if adj[u][v] && dist[v].is_none() {
                    dist[v] = Some(d);
                    next.push(v);
                }
            }
        }
        frontier = next;
    }
    dist
}

pub fn bfs(adj: &[Vec<bool>], s: usize) -> Vec<Dist> {
    bfs_h(adj, s, adj.len())
}

/// All-pairs distances on unit weights.
pub fn floyd_warshall(adj: &[Vec<bool>]) -> Vec<Vec<Dist>> {
    let n = adj.len();
    let mut d: Vec<Vec<Dist>> = vec![vec![None; n]; n];
    for u in 0..n {
        d[u][u] = Some(0);
        for v in 0..n {
            if u != v && adj[u][v] {
                d[u][v] = Some(1);
            }
        }
    }
    for k in 0..n {
        for i in 0..n {
            if let Some(a) = d[i][k] {
                for j in 0..n {
                    if let Some(b) = d[k][j] {
                        if d[i][j].is_none_or(|c| c > a + b) {
                            d[i][j] = Some(a + b);
                        }
                    }
                }
            }
        }
    }
    d
}

pub fn reachability(adj: &[Vec<bool>]) -> Vec<Vec<bool>> {
    floyd_warshall(adj).into_iter().map(|row| row.into_iter().map(|d| d.is_some()).collect()).collect()
}

/// Exact counts of `s -> t` walks of each length `0..=h`, by repeated
/// adjacency powering over big integers.
pub fn walk_counts(adj: &[Vec<bool>], s: usize, t: usize, h: usize) -> Vec<BigUint> {
    let n = adj.len();
    let mut current: Vec<BigUint> = (0..n)
        .map(|v| if v == s { BigUint::one() } else { BigUint::zero() })
        .collect();
    let mut out = vec![current[t].clone()];
    for _ in 1..=h {
        let mut next = vec![BigUint::zero(); n];
        for (u, cu) in current.iter().enumerate() {
            if cu.is_zero() {
                continue;
            }
            for (v, row) in adj[u].iter().enumerate() {
                if *row {
                    next[v] += cu;
                }
            }
        }
        out.push(next[t].clone());
        current = next;
    }
    out
}
