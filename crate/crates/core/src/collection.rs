//! Per-phase path collections with congestion control.
//!
//! The threshold build processes all sources in ascending id; before each
//! source, every vertex lying on more than `n*h*tau` stored paths is moved to
//! the congested set and switched off, so later trees avoid it. The
//! randomized build alternates between a seed-set element and the currently
//! most congested vertex, switching each source off after its tree is taken.

use std::collections::HashMap;

use crate::reporting::SwitchedReporter;

pub type PathId = usize;

#[derive(Debug, Clone)]
pub struct StoredPath {
    pub s: usize,
    pub t: usize,
    pub verts: Vec<usize>,
    /// Hitting-set representative and its position on the path, when assigned.
    pub beta: Option<usize>,
    pub beta_pos: usize,
    pub affected: bool,
}

impl StoredPath {
    pub fn edges(&self) -> usize {
        self.verts.len() - 1
    }
}

#[derive(Debug, Default)]
pub struct PathCollection {
    n: usize,
    paths: Vec<StoredPath>,
    by_pair: HashMap<(usize, usize), PathId>,
    alpha: Vec<u64>,
    incidence: Vec<Vec<PathId>>,
    affected_count: usize,
}

impl PathCollection {
    pub fn new(n: usize) -> Self {
        PathCollection {
            n,
            paths: Vec::new(),
            by_pair: HashMap::new(),
            alpha: vec![0; n],
            incidence: vec![Vec::new(); n],
            affected_count: 0,
        }
    }

    pub fn len(&self) -> usize {
        self.paths.len()
    }

    pub fn is_empty(&self) -> bool {
        self.paths.is_empty()
    }

    pub fn affected_count(&self) -> usize {
        self.affected_count
    }

    pub fn alpha(&self, v: usize) -> u64 {
        self.alpha[v]
    }

    pub fn max_alpha(&self) -> u64 {
        self.alpha.iter().copied().max().unwrap_or(0)
    }

    /// Most congested vertex not excluded, smallest id on ties.
    pub fn most_congested_excluding(&self, excluded: &[bool]) -> Option<usize> {
        let mut best: Option<usize> = None;
        for v in 0..self.n {
            if excluded[v] {
                continue;
            }
            match best {
                None => best = Some(v),
                Some(b) if self.alpha[v] > self.alpha[b] => best = Some(v),
                _ => {}
            }
        }
        best
    }

    pub fn get(&self, id: PathId) -> &StoredPath {
        &self.paths[id]
    }

    pub fn pair(&self, s: usize, t: usize) -> Option<&StoredPath> {
        self.by_pair.get(&(s, t)).map(|&id| &self.paths[id])
    }

    pub fn pair_id(&self, s: usize, t: usize) -> Option<PathId> {
        self.by_pair.get(&(s, t)).copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = &StoredPath> {
        self.paths.iter()
    }

    pub fn ids(&self) -> impl Iterator<Item = PathId> {
        0..self.paths.len()
    }

    fn store(&mut self, s: usize, t: usize, verts: Vec<usize>) {
        debug_assert!(!verts.is_empty() && verts[0] == s && *verts.last().unwrap() == t);
        debug_assert!(!self.by_pair.contains_key(&(s, t)));
        let id = self.paths.len();
        for &v in &verts {
            self.alpha[v] += 1;
            self.incidence[v].push(id);
        }
        self.paths.push(StoredPath { s, t, verts, beta: None, beta_pos: 0, affected: false });
        self.by_pair.insert((s, t), id);
    }

    /// Moves every stored path through `v` into the affected subset, once,
    /// returning the newly affected ids.
    pub fn mark_affected(&mut self, v: usize) -> Vec<PathId> {
        let mut newly = Vec::new();
        let ids = self.incidence[v].clone();
        for id in ids {
            if !self.paths[id].affected {
                self.paths[id].affected = true;
                self.affected_count += 1;
                newly.push(id);
            }
        }
        newly
    }

    /// Assigns each path with at least `min_edges` edges its first on-path
    /// vertex belonging to `hitting`.
    pub fn assign_representatives(&mut self, hitting: &[bool], min_edges: usize) {
        for p in self.paths.iter_mut() {
            p.beta = None;
            if p.edges() >= min_edges {
                for (pos, &v) in p.verts.iter().enumerate() {
                    if hitting[v] {
                        p.beta = Some(v);
                        p.beta_pos = pos;
                        break;
                    }
                }
            }
        }
    }
}

fn harvest_tree(
    pc: &mut PathCollection,
    rep: &mut SwitchedReporter,
    s: usize,
    skip_target: &[bool],
) {
    let tree = rep.sssp_tree_from(s);
    pc.store(s, s, vec![s]);
    let n = rep.n();
    for t in 0..n {
        if t == s || skip_target[t] || tree.dist[t].is_none() {
            continue;
        }
        let path = tree.path_to(t).expect("finite tree distance has a path");
        pc.store(s, t, path);
    }
}

/// Congestion-threshold build. Expects the reporter switched fully on and
/// restores that state before returning.
pub fn build_collection_threshold(
    rep: &mut SwitchedReporter,
    tau: usize,
) -> (Vec<usize>, PathCollection) {
    assert!(rep.all_on(), "collection builds start from the full graph");
    let n = rep.n();
    let h = rep.h();
    let threshold = (n * h * tau) as u64;
    let mut congested = vec![false; n];
    let mut pc = PathCollection::new(n);
    for s in 0..n {
        for v in 0..n {
            if !congested[v] && pc.alpha(v) > threshold {
                congested[v] = true;
                rep.switch_set(v, false);
            }
        }
        harvest_tree(&mut pc, rep, s, &congested);
    }
    let c: Vec<usize> = (0..n).filter(|&v| congested[v]).collect();
    for &v in &c {
        rep.switch_set(v, true);
    }
    (c, pc)
}

/// Alternating build seeded by `c0`: each round processes one unprocessed
/// seed element (or the most congested vertex if the seed is already gone)
/// followed by the most congested vertex; sources are switched off right
/// after their tree is harvested. Exactly `2*|c0|` sources are processed
/// unless the graph runs out of vertices.
///
/// Unlike the threshold build, targets already removed are kept: the stored
/// path for `(c_i, t)` is a shortest path whose source and interior avoid
/// `{c_1..c_{i-1}}` while `t` itself may be any vertex. Queries stitched from
/// these paths rely on segments that may end at an earlier source.
pub fn build_collection_randomized(
    rep: &mut SwitchedReporter,
    c0: &[usize],
) -> (Vec<usize>, PathCollection) {
    assert!(rep.all_on(), "collection builds start from the full graph");
    let n = rep.n();
    let mut removed = vec![false; n];
    let mut order = Vec::new();
    let mut pc = PathCollection::new(n);
    let no_skip = vec![false; n];
    let process = |source: usize,
                       pc: &mut PathCollection,
                       rep: &mut SwitchedReporter,
                       removed: &mut Vec<bool>,
                       order: &mut Vec<usize>| {
        harvest_tree(pc, rep, source, &no_skip);
        rep.switch_set(source, false);
        removed[source] = true;
        order.push(source);
    };
    for &seed in c0 {
        let first = if !removed[seed] {
            Some(seed)
        } else {
            pc.most_congested_excluding(&removed)
        };
        match first {
            Some(v) => process(v, &mut pc, rep, &mut removed, &mut order),
            None => break,
        }
        match pc.most_congested_excluding(&removed) {
            Some(v) => process(v, &mut pc, rep, &mut removed, &mut order),
            None => break,
        }
    }
    for &v in &order {
        rep.switch_set(v, true);
    }
    (order, pc)
}
