//! Hitting-set constructions: greedy set cover over explicit families,
//! hitting of depth-limited tree paths, and the SCC-block relay set used by
//! the transitive-closure structure.

use std::fmt;

use crate::graph::{reach_tree, tarjan_sccs, ReachTree};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum HittingError {
    SetTooSmall { index: usize, size: usize, min: usize },
    ParameterViolation { d: usize, h: usize, n: usize },
}

impl fmt::Display for HittingError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            HittingError::SetTooSmall { index, size, min } => {
                write!(f, "family member {index} has {size} elements, below the minimum {min}")
            }
            HittingError::ParameterViolation { d, h, n } => {
                write!(f, "need d*h >= 6n, got d={d} h={h} n={n}")
            }
        }
    }
}

impl std::error::Error for HittingError {}

/// Size guarantee of the greedy construction, with the additive slack kept
/// explicit so tests can pin it.
pub fn greedy_size_bound(ground: usize, k: usize, family_len: usize) -> usize {
    if family_len == 0 {
        return 0;
    }
    let nk = ground as f64 / k as f64;
    (nk * (family_len as f64).ln()).ceil() as usize + nk.ceil() as usize + 1
}

/// Greedy hitting set: repeatedly take the element covering the most not-yet
/// hit members, smallest id on ties. Every member must have at least `k`
/// elements; the result hits every member and respects `greedy_size_bound`.
pub fn greedy_hitting_set(
    family: &[Vec<usize>],
    ground: usize,
    k: usize,
) -> Result<Vec<usize>, HittingError> {
    for (index, set) in family.iter().enumerate() {
        let mut uniq = set.clone();
        uniq.sort_unstable();
        uniq.dedup();
        if uniq.len() < k.max(1) {
            return Err(HittingError::SetTooSmall { index, size: uniq.len(), min: k.max(1) });
        }
    }
    let mut alive: Vec<bool> = vec![true; family.len()];
    let mut alive_count = family.len();
    let mut chosen = Vec::new();
    let mut cover = vec![0usize; ground];
    while alive_count > 0 {
        cover.iter_mut().for_each(|c| *c = 0);
        for (i, set) in family.iter().enumerate() {
            if alive[i] {
                let mut seen = vec![false; ground];
                for &v in set {
                    if !seen[v] {
                        seen[v] = true;
                        cover[v] += 1;
                    }
                }
            }
        }
        let best = (0..ground).max_by_key(|&v| (cover[v], usize::MAX - v)).unwrap();
        debug_assert!(cover[best] > 0);
        chosen.push(best);
        for (i, set) in family.iter().enumerate() {
            if alive[i] && set.contains(&best) {
                alive[i] = false;
                alive_count -= 1;
            }
        }
    }
    Ok(chosen)
}

/// Hitting set for all depth-`h` root-to-node paths across the given trees.
pub fn tree_path_hitting(
    trees: &[ReachTree],
    h: usize,
    ground: usize,
) -> Result<Vec<usize>, HittingError> {
    let mut family = Vec::new();
    for tree in trees {
        for leaf in tree.vertices_at_depth(h as u32) {
            let path = tree.path_to(leaf).expect("depth implies a tree path");
            debug_assert_eq!(path.len(), h + 1);
            family.push(path);
        }
    }
    greedy_hitting_set(&family, ground, h + 1)
}

#[derive(Debug, Clone)]
pub struct Block {
    /// Range of SCC indices (half-open) in topological order.
    pub scc_range: (usize, usize),
    pub verts: Vec<usize>,
    /// Small blocks group several SCCs of total size <= d; a large block is a
    /// single SCC above d.
    pub small: bool,
}

#[derive(Debug, Clone)]
pub struct BlockPartition {
    pub sccs: Vec<Vec<usize>>,
    pub scc_of: Vec<usize>,
    pub blocks: Vec<Block>,
}

impl BlockPartition {
    pub fn block_of(&self, v: usize) -> usize {
        let scc = self.scc_of[v];
        self.blocks
            .iter()
            .position(|b| b.scc_range.0 <= scc && scc < b.scc_range.1)
            .expect("blocks partition the SCC sequence")
    }
}

fn partition_blocks(sccs: &[Vec<usize>], d: usize) -> Vec<Block> {
    let mut blocks = Vec::new();
    let mut i = 0;
    while i < sccs.len() {
        if sccs[i].len() > d {
            let verts = sccs[i].clone();
            blocks.push(Block { scc_range: (i, i + 1), verts, small: false });
            i += 1;
            continue;
        }
        // Longest prefix of total size <= d.
        let mut j = i;
        let mut total = 0;
        while j < sccs.len() && total + sccs[j].len() <= d {
            total += sccs[j].len();
            j += 1;
        }
        let mut verts = Vec::new();
        for comp in &sccs[i..j] {
            verts.extend_from_slice(comp);
        }
        blocks.push(Block { scc_range: (i, j), verts, small: true });
        i = j;
    }
    blocks
}

/// Relay-vertex construction: partition the SCC sequence into blocks, hit the
/// depth-`l` tree paths inside each block for `l = floor(d*h/(6n))`, and take
/// the union. For any reachable pair farther than `h` apart, some returned
/// vertex is within `h` hops of the source and still reaches the target.
pub fn weak_hitting_set(
    adj: &[Vec<bool>],
    h: usize,
    d: usize,
) -> Result<(Vec<usize>, BlockPartition), HittingError> {
    let n = adj.len();
    if d * h < 6 * n {
        return Err(HittingError::ParameterViolation { d, h, n });
    }
    let ell = (d * h) / (6 * n);
    debug_assert!(ell >= 1);
    let sccs = tarjan_sccs(adj);
    let mut scc_of = vec![0; n];
    for (i, comp) in sccs.iter().enumerate() {
        for &v in comp {
            scc_of[v] = i;
        }
    }
    let blocks = partition_blocks(&sccs, d);
    let mut hstar = Vec::new();
    for block in &blocks {
        let mut inside = vec![false; n];
        for &v in &block.verts {
            inside[v] = true;
        }
        let trees: Vec<ReachTree> =
            block.verts.iter().map(|&r| reach_tree(adj, r, Some(&inside), ell)).collect();
        let hb = tree_path_hitting(&trees, ell, n)?;
        hstar.extend(hb);
    }
    hstar.sort_unstable();
    hstar.dedup();
    Ok((hstar, BlockPartition { sccs, scc_of, blocks }))
}
