//! Fully dynamic exact single-source shortest paths.
//!
//! The structure works in phases of `delta` edge updates. Each phase starts
//! by building a congested set `C` and a path collection over the phase-start
//! graph, a hitting set `H` of the long stored paths, and per-(representative,
//! endpoint) multisets of prefix/suffix lengths. Within the phase, a
//! hop-bounded oracle maintains distances for the pair set `Y` covering the
//! congested and affected rows/columns plus the pairs whose stored path died.
//! A query from `s` temporarily adds the row `{s} x V` to `Y`, builds a
//! weighted auxiliary graph out of the maintained bounded distances and the
//! multiset minima, and runs Dijkstra; the result is exact.
//!
//! The randomized variant replaces the threshold collection with an
//! alternating build seeded by a uniformly sampled vertex set (never exposed
//! by any answer) and wires the surviving stored paths into the auxiliary
//! graph directly.

use std::cmp::Reverse;
use std::collections::{BinaryHeap, BTreeSet, HashMap, HashSet};
use std::fmt;

use crate::collection::{
    build_collection_randomized, build_collection_threshold, PathCollection, PathId,
};
use crate::hitting::greedy_hitting_set;
use crate::hopdist::{CountingMode, HopDist, HopDistOracle};
use crate::reporting::{PredecessorVariant, ReporterConfig, SsspTree, SwitchedReporter};
use crate::rng::SplitMix64;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SsspError {
    InvalidParameters(String),
    TreeReportingDisabled,
}

impl fmt::Display for SsspError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SsspError::InvalidParameters(msg) => write!(f, "invalid parameters: {msg}"),
            SsspError::TreeReportingDisabled => {
                write!(f, "structure was built without tree reporting")
            }
        }
    }
}

impl std::error::Error for SsspError {}

#[derive(Debug, Clone)]
pub struct SsspParams {
    /// Hop bound of the maintained bounded distances.
    pub h: usize,
    /// Congestion threshold multiplier.
    pub tau: usize,
    /// Phase length in effective edge updates.
    pub delta: usize,
    /// Block size of the path-reporting structure.
    pub block_size: usize,
    /// Factor-column budget of the dynamic inverses.
    pub cap: usize,
    pub mode: CountingMode,
    pub variant: PredecessorVariant,
    /// Randomized mode: sample size constant in `c * (n/h) * ln n`.
    pub sample_c: f64,
    pub tree_reporting: bool,
    pub tree_block_size: usize,
}

impl SsspParams {
    pub fn defaults(n: usize, mode: CountingMode) -> Self {
        let nf = n as f64;
        SsspParams {
            h: nf.cbrt().ceil() as usize,
            tau: 2.min(n.max(1)),
            delta: n.div_ceil(4).max(1),
            block_size: n.div_ceil(2).max(1),
            cap: nf.sqrt().ceil() as usize,
            mode,
            variant: PredecessorVariant::BinarySearch,
            sample_c: 4.0,
            tree_reporting: false,
            tree_block_size: n.div_ceil(2).max(1),
        }
    }

    fn validate(&self, n: usize) -> Result<(), SsspError> {
        let ok = |x: usize| x >= 1 && x <= n.max(1);
        if !ok(self.h) || !ok(self.tau) || !ok(self.delta) || !ok(self.block_size) {
            return Err(SsspError::InvalidParameters(format!(
                "h={}, tau={}, delta={}, block_size={} must lie in [1, {n}]",
                self.h, self.tau, self.delta, self.block_size
            )));
        }
        if self.cap == 0 {
            return Err(SsspError::InvalidParameters("cap must be positive".into()));
        }
        Ok(())
    }
}

/// Provenance of one auxiliary-graph edge (kept for query-path expansion).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum XEdgeKind {
    /// Maintained hop-bounded distance for a pair in the augmented `Y`.
    Bounded,
    /// Suffix of a stored path from its representative, by path id.
    PathSuffix(PathId),
    /// Prefix of a stored path up to its representative.
    PathPrefix(PathId),
    /// A surviving stored path used whole (randomized variant).
    WholePath(PathId),
}

/// Query result with the Dijkstra relaxation structure retained.
#[derive(Debug, Clone)]
pub struct QueryTrace {
    pub source: usize,
    pub dist: Vec<HopDist>,
    /// Incoming relaxed edge per target: (from, weight, kind).
    pub via: Vec<Option<(usize, u32, XEdgeKind)>>,
}

struct Phase {
    congested: Vec<usize>,
    collection: PathCollection,
    d_flag: Vec<bool>,
    d_list: Vec<usize>,
    hitting: Vec<usize>,
    psi_to: HashMap<(usize, usize), BTreeSet<(u32, PathId)>>,
    psi_from: HashMap<(usize, usize), BTreeSet<(u32, PathId)>>,
    y: HashSet<(usize, usize)>,
}

#[derive(Debug, Clone)]
pub struct SsspDiagnostics {
    pub n: usize,
    pub h: usize,
    pub tau: usize,
    pub delta: usize,
    pub block_size: usize,
    pub cap: usize,
    pub deterministic: bool,
    pub rollovers: u64,
    pub updates_in_phase: usize,
    pub y_size: usize,
    pub congested_size: usize,
    pub hitting_size: usize,
    pub collection_paths: usize,
    pub affected_paths: usize,
}

pub struct SsspStructure {
    n: usize,
    params: SsspParams,
    adj: Vec<Vec<bool>>,
    bounded: HopDistOracle,
    reporter: SwitchedReporter,
    phase: Phase,
    updates_in_phase: usize,
    rollovers: u64,
    trees: Option<TreeReporter>,
}

impl SsspStructure {
    pub fn new(n: usize, params: SsspParams) -> Result<Self, SsspError> {
        params.validate(n)?;
        let bounded = HopDistOracle::new(n, params.h, params.mode, params.cap);
        let rep_cfg = ReporterConfig {
            block_size: params.block_size,
            cap: params.cap,
            mode: params.mode,
            variant: params.variant,
        };
        let reporter = SwitchedReporter::new(n, params.h, rep_cfg);
        let trees = if params.tree_reporting {
            Some(TreeReporter::new(n, &params))
        } else {
            None
        };
        let mut st = SsspStructure {
            n,
            params,
            adj: vec![vec![false; n]; n],
            bounded,
            reporter,
            phase: Phase {
                congested: Vec::new(),
                collection: PathCollection::new(n),
                d_flag: vec![false; n],
                d_list: Vec::new(),
                hitting: Vec::new(),
                psi_to: HashMap::new(),
                psi_from: HashMap::new(),
                y: HashSet::new(),
            },
            updates_in_phase: 0,
            rollovers: 0,
            trees: None,
        };
        st.phase_init();
        st.trees = trees;
        Ok(st)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn params(&self) -> &SsspParams {
        &self.params
    }

    pub fn adj(&self, u: usize, v: usize) -> bool {
        self.adj[u][v]
    }

    pub fn rollovers(&self) -> u64 {
        self.rollovers
    }

    pub fn diagnostics(&self) -> SsspDiagnostics {
        SsspDiagnostics {
            n: self.n,
            h: self.params.h,
            tau: self.params.tau,
            delta: self.params.delta,
            block_size: self.params.block_size,
            cap: self.params.cap,
            deterministic: matches!(self.params.mode, CountingMode::Deterministic),
            rollovers: self.rollovers,
            updates_in_phase: self.updates_in_phase,
            y_size: self.phase.y.len(),
            congested_size: self.phase.congested.len(),
            hitting_size: self.phase.hitting.len(),
            collection_paths: self.phase.collection.len(),
            affected_paths: self.phase.collection.affected_count(),
        }
    }

    fn phase_init(&mut self) {
        debug_assert!(self.reporter.all_on());
        let n = self.n;
        let (congested, mut collection) = match self.params.mode {
            CountingMode::Deterministic => {
                build_collection_threshold(&mut self.reporter, self.params.tau)
            }
            CountingMode::Randomized { seed } => {
                let sample = self.sample_hitting_seed(seed);
                build_collection_randomized(&mut self.reporter, &sample)
            }
        };

        self.bounded.y_clear();
        let mut y = HashSet::new();
        let mut hitting = Vec::new();
        let mut psi_to: HashMap<(usize, usize), BTreeSet<(u32, PathId)>> = HashMap::new();
        let mut psi_from: HashMap<(usize, usize), BTreeSet<(u32, PathId)>> = HashMap::new();

        if matches!(self.params.mode, CountingMode::Deterministic) {
            for &c in &congested {
                for t in 0..n {
                    if y.insert((c, t)) {
                        self.bounded.y_insert(c, t);
                    }
                    if y.insert((t, c)) {
                        self.bounded.y_insert(t, c);
                    }
                }
            }
            let min_edges = self.params.h / 2;
            let family: Vec<Vec<usize>> = collection
                .iter()
                .filter(|p| p.edges() >= min_edges)
                .map(|p| p.verts.clone())
                .collect();
            hitting = greedy_hitting_set(&family, n, min_edges + 1)
                .expect("paths with >= k edges have >= k+1 vertices");
            let mut hit_flag = vec![false; n];
            for &v in &hitting {
                hit_flag[v] = true;
            }
            collection.assign_representatives(&hit_flag, min_edges);
            for id in collection.ids() {
                let p = collection.get(id);
                if let Some(z) = p.beta {
                    let prefix = p.beta_pos as u32;
                    let suffix = (p.edges() - p.beta_pos) as u32;
                    psi_to.entry((z, p.t)).or_default().insert((suffix, id));
                    psi_from.entry((z, p.s)).or_default().insert((prefix, id));
                }
            }
        }

        self.phase = Phase {
            congested,
            collection,
            d_flag: vec![false; n],
            d_list: Vec::new(),
            hitting,
            psi_to,
            psi_from,
            y,
        };
    }

    fn sample_hitting_seed(&self, seed: u64) -> Vec<usize> {
        let n = self.n as f64;
        let target =
            (self.params.sample_c * (n / self.params.h as f64) * n.ln()).ceil() as usize;
        let mut rng =
            SplitMix64::new(seed ^ self.rollovers.wrapping_mul(0x9e37_79b9_7f4a_7c15));
        rng.sample_distinct(target.min(self.n), self.n)
    }

    fn y_add(&mut self, a: usize, b: usize) {
        if self.phase.y.insert((a, b)) {
            self.bounded.y_insert(a, b);
        }
    }

    /// Applies one edge update. Updates that do not change the graph are
    /// ignored entirely and do not advance the phase.
    pub fn update(&mut self, u: usize, v: usize, present: bool) {
        assert!(u != v);
        if self.adj[u][v] == present {
            return;
        }
        self.adj[u][v] = present;
        self.bounded.edge_update(u, v, present);
        self.reporter.edge_update(u, v, present);
        if let Some(trees) = self.trees.as_mut() {
            trees.edge_update(u, v, present);
        }
        for w in [u, v] {
            if self.phase.d_flag[w] {
                continue;
            }
            self.phase.d_flag[w] = true;
            self.phase.d_list.push(w);
            for t in 0..self.n {
                self.y_add(w, t);
                self.y_add(t, w);
            }
            let newly = self.phase.collection.mark_affected(w);
            for id in newly {
                let (s, t, beta, prefix, suffix) = {
                    let p = self.phase.collection.get(id);
                    (p.s, p.t, p.beta, p.beta_pos as u32, (p.edges() - p.beta_pos) as u32)
                };
                self.y_add(s, t);
                if let Some(z) = beta {
                    if let Some(set) = self.phase.psi_to.get_mut(&(z, t)) {
                        set.remove(&(suffix, id));
                    }
                    if let Some(set) = self.phase.psi_from.get_mut(&(z, s)) {
                        set.remove(&(prefix, id));
                    }
                }
            }
        }
        self.updates_in_phase += 1;
        if self.updates_in_phase >= self.params.delta {
            self.updates_in_phase = 0;
            self.rollovers += 1;
            self.phase_init();
        }
    }

    /// Exact distances from `s`; side-effect free.
    pub fn query(&mut self, s: usize) -> Vec<HopDist> {
        self.query_traced(s).dist
    }

    /// Exact distances plus the relaxed auxiliary edges, for path expansion.
    pub fn query_traced(&mut self, s: usize) -> QueryTrace {
        let n = self.n;
        let temp: Vec<(usize, usize)> =
            (0..n).filter(|&t| !self.phase.y.contains(&(s, t))).map(|t| (s, t)).collect();
        for &(a, b) in &temp {
            self.bounded.y_insert(a, b);
        }

        let mut xadj: Vec<Vec<(usize, u32, XEdgeKind)>> = vec![Vec::new(); n];
        for &(a, b) in self.phase.y.iter().chain(temp.iter()) {
            if a == b {
                continue;
            }
            if let Ok(Some(d)) = self.bounded.query(a, b) {
                xadj[a].push((b, d, XEdgeKind::Bounded));
            }
        }
        match self.params.mode {
            CountingMode::Deterministic => {
                for ((z, v), set) in &self.phase.psi_to {
                    if *z == *v {
                        continue;
                    }
                    if let Some(&(len, id)) = set.first() {
                        xadj[*z].push((*v, len, XEdgeKind::PathSuffix(id)));
                    }
                }
                for ((z, v), set) in &self.phase.psi_from {
                    if *z == *v {
                        continue;
                    }
                    if let Some(&(len, id)) = set.first() {
                        xadj[*v].push((*z, len, XEdgeKind::PathPrefix(id)));
                    }
                }
            }
            CountingMode::Randomized { .. } => {
                for id in self.phase.collection.ids() {
                    let p = self.phase.collection.get(id);
                    if !p.affected && p.s != p.t {
                        xadj[p.s].push((p.t, p.edges() as u32, XEdgeKind::WholePath(id)));
                    }
                }
            }
        }

        let mut dist: Vec<HopDist> = vec![None; n];
        let mut via: Vec<Option<(usize, u32, XEdgeKind)>> = vec![None; n];
        let mut heap = BinaryHeap::new();
        dist[s] = Some(0);
        heap.push(Reverse((0u32, s)));
        while let Some(Reverse((d, u))) = heap.pop() {
            if dist[u] != Some(d) {
                continue;
            }
            for &(v, w, kind) in &xadj[u] {
                let nd = d + w;
                if dist[v].is_none_or(|cur| nd < cur) {
                    dist[v] = Some(nd);
                    via[v] = Some((u, w, kind));
                    heap.push(Reverse((nd, v)));
                }
            }
        }

        for &(a, b) in &temp {
            self.bounded.y_remove(a, b);
        }
        QueryTrace { source: s, dist, via }
    }

    /// Path realizing one auxiliary edge (test support): stored-path edges
    /// expand to their recorded vertex runs, bounded edges to `None` (their
    /// length is certified by the oracle, not by a stored sequence).
    pub fn expand_edge(&self, from: usize, to: usize, kind: XEdgeKind) -> Option<Vec<usize>> {
        match kind {
            XEdgeKind::Bounded => None,
            XEdgeKind::WholePath(id) => {
                let p = self.phase.collection.get(id);
                debug_assert!(p.s == from && p.t == to);
                Some(p.verts.clone())
            }
            XEdgeKind::PathSuffix(id) => {
                let p = self.phase.collection.get(id);
                debug_assert!(p.t == to);
                Some(p.verts[p.beta_pos..].to_vec())
            }
            XEdgeKind::PathPrefix(id) => {
                let p = self.phase.collection.get(id);
                debug_assert!(p.s == from);
                Some(p.verts[..=p.beta_pos].to_vec())
            }
        }
    }

    /// Shortest-path tree from `s`, built through the block reduction over
    /// auxiliary exact-distance structures.
    pub fn tree_query(&mut self, s: usize) -> Result<SsspTree, SsspError> {
        let trees = self.trees.as_mut().ok_or(SsspError::TreeReportingDisabled)?;
        Ok(trees.tree_from(s, &self.adj))
    }

    pub fn y_size(&self) -> usize {
        self.phase.y.len()
    }

    pub fn alpha(&self, v: usize) -> u64 {
        self.phase.collection.alpha(v)
    }

    /// Minimum over unaffected stored paths with representative `z` ending at
    /// `t` (test oracle access).
    pub fn psi_to_min(&self, z: usize, t: usize) -> Option<u32> {
        self.phase.psi_to.get(&(z, t)).and_then(|s| s.first().map(|&(len, _)| len))
    }

    pub fn psi_from_min(&self, z: usize, u: usize) -> Option<u32> {
        self.phase.psi_from.get(&(z, u)).and_then(|s| s.first().map(|&(len, _)| len))
    }

    pub fn hitting_set(&self) -> &[usize] {
        &self.phase.hitting
    }

    pub fn collection(&self) -> &PathCollection {
        &self.phase.collection
    }
}

/// Block reduction for tree reporting: level i keeps a full exact-distance
/// structure on the doubled graph whose copy edges `u -> v'` exist iff
/// `u -> v` does and `u` falls in the first i blocks. The least level whose
/// copy distance matches the true distance locates a block holding a valid
/// parent.
struct TreeReporter {
    n: usize,
    bb: usize,
    q: usize,
    auxes: Vec<SsspStructure>,
}

impl TreeReporter {
    fn new(n: usize, params: &SsspParams) -> Self {
        let bb = params.tree_block_size.clamp(1, n);
        let q = n.div_ceil(bb);
        let auxes = (0..q)
            .map(|i| {
                let mode = match params.mode {
                    CountingMode::Deterministic => CountingMode::Deterministic,
                    CountingMode::Randomized { seed } => {
                        CountingMode::Randomized { seed: seed.wrapping_add(1 + i as u64) }
                    }
                };
                let mut p = SsspParams::defaults(2 * n, mode);
                // Keep the inner reporters' walk counts within machine words;
                // exactness is independent of the hop bound.
                let word_h = word_safe_hop_bound(2 * n);
                p.h = p.h.min(word_h).max(1);
                SsspStructure::new(2 * n, p).expect("default parameters are valid")
            })
            .collect();
        TreeReporter { n, bb, q, auxes }
    }

    fn edge_update(&mut self, u: usize, v: usize, present: bool) {
        let n = self.n;
        for (i, aux) in self.auxes.iter_mut().enumerate() {
            aux.update(u, v, present);
            if u < (i + 1) * self.bb {
                aux.update(u, n + v, present);
            }
        }
    }

    fn tree_from(&mut self, s: usize, adj: &[Vec<bool>]) -> SsspTree {
        let n = self.n;
        let per_level: Vec<Vec<HopDist>> =
            self.auxes.iter_mut().map(|a| a.query(s)).collect();
        let top = &per_level[self.q - 1];
        let mut pred = vec![None; n];
        let mut dist = vec![None; n];
        dist[s] = Some(0);
        for t in 0..n {
            if t == s {
                continue;
            }
            let Some(goal) = top[n + t] else { continue };
            let level = (0..self.q)
                .find(|&i| per_level[i][n + t] == Some(goal))
                .expect("top level matches itself");
            for i in 1..self.q {
                let a = per_level[i - 1][n + t].unwrap_or(u32::MAX);
                let b = per_level[i][n + t].unwrap_or(u32::MAX);
                assert!(a >= b, "copy distances must be non-increasing across levels");
            }
            let lo = level * self.bb;
            let hi = ((level + 1) * self.bb).min(n);
            for p in lo..hi {
                if adj[p][t] && top[p] == Some(goal - 1) {
                    pred[t] = Some(p);
                    dist[t] = Some(goal);
                    break;
                }
            }
            debug_assert!(pred[t].is_some(), "a matching level contains a parent");
        }
        SsspTree { root: s, pred, dist }
    }
}

/// Largest hop bound whose doubled-split walk counts fit a 62-bit prime.
fn word_safe_hop_bound(n: usize) -> usize {
    let bits_per_step = (4.0 * n as f64).log2();
    ((61.0 / (2.0 * bits_per_step)).floor() as usize).max(1)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bfs(adj: &[Vec<bool>], s: usize) -> Vec<HopDist> {
        let n = adj.len();
        let mut dist = vec![None; n];
        dist[s] = Some(0);
        let mut frontier = vec![s];
        let mut d = 0;
        while !frontier.is_empty() {
            d += 1;
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

    fn det(n: usize) -> SsspStructure {
        SsspStructure::new(n, SsspParams::defaults(n, CountingMode::Deterministic)).unwrap()
    }

    #[test]
    fn fresh_structure_distances() {
        let mut st = det(5);
        let d = st.query(2);
        for t in 0..5 {
            assert_eq!(d[t], if t == 2 { Some(0) } else { None });
        }
        let diag = st.diagnostics();
        assert_eq!(diag.n, 5);
        assert_eq!(diag.rollovers, 0);
    }

    #[test]
    fn invalid_parameters_rejected() {
        let mut p = SsspParams::defaults(8, CountingMode::Deterministic);
        p.h = 0;
        assert!(SsspStructure::new(8, p).is_err());
        let mut p = SsspParams::defaults(8, CountingMode::Deterministic);
        p.delta = 9;
        assert!(SsspStructure::new(8, p).is_err());
    }

    #[test]
    fn chain_distances() {
        let n = 7;
        let mut st = det(n);
        for v in 0..n - 1 {
            st.update(v, v + 1, true);
        }
        let d = st.query(0);
        for t in 0..n {
            assert_eq!(d[t], Some(t as u32));
        }
    }

    #[test]
    fn query_is_side_effect_free() {
        let mut st = det(6);
        st.update(0, 1, true);
        st.update(1, 2, true);
        let y = st.y_size();
        let a = st.query(0);
        let b = st.query(0);
        assert_eq!(a, b);
        assert_eq!(st.y_size(), y);
    }

    #[test]
    fn rollover_counter_ticks_once_per_delta() {
        let n = 8;
        let mut p = SsspParams::defaults(n, CountingMode::Deterministic);
        p.delta = 3;
        let mut st = SsspStructure::new(n, p).unwrap();
        let edges = [(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 6)];
        for (i, &(u, v)) in edges.iter().enumerate() {
            st.update(u, v, true);
            assert_eq!(st.rollovers(), ((i + 1) / 3) as u64);
        }
        // A no-op update neither counts nor rolls over.
        st.update(0, 1, true);
        assert_eq!(st.rollovers(), 2);
    }

    fn random_trace(mode: CountingMode, seed: u64, n: usize, steps: usize) {
        let mut params = SsspParams::defaults(n, mode);
        params.delta = (n / 3).max(2);
        let mut st = SsspStructure::new(n, params).unwrap();
        let mut adj = vec![vec![false; n]; n];
        let mut rng = SplitMix64::new(seed);
        for step in 0..steps {
            let u = rng.next_below(n as u64) as usize;
            let mut v = rng.next_below(n as u64) as usize;
            if u == v {
                v = (v + 1) % n;
            }
            // Bias towards deletions once dense.
            let density: usize = adj.iter().map(|r| r.iter().filter(|&&e| e).count()).sum();
            let insert = density < n * n / 4 || rng.next_below(2) == 0;
            let present = if insert { true } else { false };
            let y_before = st.y_size();
            let au = st.alpha(u);
            let av = st.alpha(v);
            let effective = adj[u][v] != present;
            adj[u][v] = present;
            st.update(u, v, present);
            if effective && st.updates_in_phase != 0 {
                let grown = st.y_size().saturating_sub(y_before);
                assert!(
                    grown as u64 <= au + av + 4 * n as u64,
                    "step {step}: Y grew by {grown}"
                );
            }
            if step % 5 == 0 {
                for s in 0..n {
                    let want = bfs(&adj, s);
                    let got = st.query(s);
                    assert_eq!(got, want, "step {step} source {s} seed {seed}");
                }
            }
        }
    }

    #[test]
    fn random_trace_matches_bfs_deterministic() {
        random_trace(CountingMode::Deterministic, 3, 14, 60);
    }

    #[test]
    fn random_trace_matches_bfs_randomized() {
        random_trace(CountingMode::Randomized { seed: 1234 }, 4, 14, 60);
    }

    #[test]
    fn deleting_stored_paths_stays_exact() {
        // Build a dense-ish graph, roll a phase, then delete edges on stored
        // shortest paths and re-check everything.
        let n = 10;
        let mut p = SsspParams::defaults(n, CountingMode::Deterministic);
        p.delta = n; // keep one phase alive through the deletions
        let mut st = SsspStructure::new(n, p).unwrap();
        let mut adj = vec![vec![false; n]; n];
        let mut rng = SplitMix64::new(8);
        for _ in 0..40 {
            let u = rng.next_below(n as u64) as usize;
            let v = (u + 1 + rng.next_below((n - 1) as u64) as usize) % n;
            adj[u][v] = true;
            st.update(u, v, true);
        }
        // Delete edges off a stored path through the most congested vertex.
        let hub = (0..n).max_by_key(|&v| st.alpha(v)).unwrap();
        for w in 0..n {
            if w != hub && adj[hub][w] {
                adj[hub][w] = false;
                st.update(hub, w, false);
            }
        }
        for s in 0..n {
            assert_eq!(st.query(s), bfs(&adj, s), "source {s}");
        }
    }

    #[test]
    fn phase_length_does_not_change_answers() {
        let n = 12;
        let mut small = SsspParams::defaults(n, CountingMode::Deterministic);
        small.delta = 2;
        let mut large = SsspParams::defaults(n, CountingMode::Deterministic);
        large.delta = n;
        let mut a = SsspStructure::new(n, small).unwrap();
        let mut b = SsspStructure::new(n, large).unwrap();
        let mut rng = SplitMix64::new(21);
        for _ in 0..30 {
            let u = rng.next_below(n as u64) as usize;
            let mut v = rng.next_below(n as u64) as usize;
            if u == v {
                v = (v + 1) % n;
            }
            let present = rng.next_below(3) > 0;
            a.update(u, v, present);
            b.update(u, v, present);
            let s = rng.next_below(n as u64) as usize;
            assert_eq!(a.query(s), b.query(s));
        }
        assert!(a.rollovers() > b.rollovers());
    }

    #[test]
    fn psi_minima_match_recomputation() {
        let n = 12;
        let mut p = SsspParams::defaults(n, CountingMode::Deterministic);
        p.delta = 4;
        let mut st = SsspStructure::new(n, p).unwrap();
        let mut rng = SplitMix64::new(13);
        for _ in 0..30 {
            let u = rng.next_below(n as u64) as usize;
            let mut v = rng.next_below(n as u64) as usize;
            if u == v {
                v = (v + 1) % n;
            }
            st.update(u, v, rng.next_below(3) > 0);
            // Recompute every multiset minimum from the collection.
            let mut best_to: HashMap<(usize, usize), u32> = HashMap::new();
            let mut best_from: HashMap<(usize, usize), u32> = HashMap::new();
            for p in st.collection().iter().filter(|p| !p.affected) {
                if let Some(z) = p.beta {
                    let suf = (p.edges() - p.beta_pos) as u32;
                    let pre = p.beta_pos as u32;
                    best_to
                        .entry((z, p.t))
                        .and_modify(|m| *m = (*m).min(suf))
                        .or_insert(suf);
                    best_from
                        .entry((z, p.s))
                        .and_modify(|m| *m = (*m).min(pre))
                        .or_insert(pre);
                }
            }
            for z in 0..n {
                for t in 0..n {
                    assert_eq!(st.psi_to_min(z, t), best_to.get(&(z, t)).copied());
                    assert_eq!(st.psi_from_min(z, t), best_from.get(&(z, t)).copied());
                }
            }
        }
    }

    #[test]
    fn query_edges_expand_to_real_walks() {
        let n = 12;
        let mut st = det(n);
        let mut adj = vec![vec![false; n]; n];
        let mut rng = SplitMix64::new(33);
        for _ in 0..50 {
            let u = rng.next_below(n as u64) as usize;
            let mut v = rng.next_below(n as u64) as usize;
            if u == v {
                v = (v + 1) % n;
            }
            let present = rng.next_below(3) > 0;
            adj[u][v] = present;
            st.update(u, v, present);
        }
        let want = bfs(&adj, 0);
        let trace = st.query_traced(0);
        assert_eq!(trace.dist, want);
        for t in 0..n {
            let Some(total) = trace.dist[t] else { continue };
            if t == 0 {
                continue;
            }
            // Walk the relaxation chain back to the source, expanding each
            // auxiliary edge and checking it against the real graph.
            let mut cur = t;
            let mut sum = 0u32;
            while cur != 0 {
                let (from, w, kind) = trace.via[cur].expect("reached targets have parents");
                match st.expand_edge(from, cur, kind) {
                    Some(verts) => {
                        assert_eq!((verts.len() - 1) as u32, w);
                        for win in verts.windows(2) {
                            assert!(adj[win[0]][win[1]], "stored edge missing from graph");
                        }
                    }
                    None => {
                        // Bounded edge: its weight must be realizable in G.
                        let d = bfs(&adj, from)[cur].expect("bounded edge implies a path");
                        assert_eq!(d, w, "bounded edge weight realizable exactly");
                    }
                }
                sum += w;
                cur = from;
            }
            assert_eq!(sum, total);
        }
    }

    #[test]
    fn randomized_phase_is_seed_deterministic() {
        let n = 10;
        let mk = || {
            SsspStructure::new(
                n,
                SsspParams::defaults(n, CountingMode::Randomized { seed: 77 }),
            )
            .unwrap()
        };
        let mut a = mk();
        let mut b = mk();
        let mut rng = SplitMix64::new(3);
        for _ in 0..25 {
            let u = rng.next_below(n as u64) as usize;
            let mut v = rng.next_below(n as u64) as usize;
            if u == v {
                v = (v + 1) % n;
            }
            a.update(u, v, true);
            b.update(u, v, true);
            assert_eq!(a.diagnostics().collection_paths, b.diagnostics().collection_paths);
            assert_eq!(a.query(0), b.query(0));
        }
    }

    #[test]
    fn randomized_full_hop_bound_still_exact() {
        // h = n makes the sample tiny; answers stay exact.
        let n = 10;
        let mut p = SsspParams::defaults(n, CountingMode::Randomized { seed: 3 });
        p.h = n;
        p.delta = 3;
        let mut st = SsspStructure::new(n, p).unwrap();
        let mut adj = vec![vec![false; n]; n];
        let mut rng = SplitMix64::new(12);
        for _ in 0..25 {
            let u = rng.next_below(n as u64) as usize;
            let mut v = rng.next_below(n as u64) as usize;
            if u == v {
                v = (v + 1) % n;
            }
            let present = rng.next_below(3) > 0;
            adj[u][v] = present;
            st.update(u, v, present);
            for s in 0..n {
                assert_eq!(st.query(s), bfs(&adj, s));
            }
        }
    }

    #[test]
    fn tiny_graphs_construct_and_answer() {
        for n in [1usize, 2] {
            let mut st = det(n);
            let d = st.query(0);
            assert_eq!(d[0], Some(0));
            if n == 2 {
                st.update(0, 1, true);
                assert_eq!(st.query(0)[1], Some(1));
            }
        }
    }

    #[test]
    fn randomized_sample_size_bound() {
        let n = 32;
        let p = SsspParams::defaults(n, CountingMode::Randomized { seed: 5 });
        let st = SsspStructure::new(n, p.clone()).unwrap();
        let bound =
            (p.sample_c * (n as f64 / p.h as f64) * (n as f64).ln()).ceil() as usize;
        let sample = st.sample_hitting_seed(5);
        assert!(sample.len() <= bound.min(n));
    }

    #[test]
    fn tree_query_on_chain() {
        let n = 8;
        let mut p = SsspParams::defaults(n, CountingMode::Deterministic);
        p.tree_reporting = true;
        let mut st = SsspStructure::new(n, p).unwrap();
        for v in 0..n - 1 {
            st.update(v, v + 1, true);
        }
        let tree = st.tree_query(0).unwrap();
        for t in 1..n {
            assert_eq!(tree.pred[t], Some(t - 1));
            assert_eq!(tree.dist[t], Some(t as u32));
        }
    }

    #[test]
    fn tree_query_matches_bfs_on_random_graphs() {
        let n = 9;
        let mut p = SsspParams::defaults(n, CountingMode::Deterministic);
        p.tree_reporting = true;
        p.delta = 4;
        let mut st = SsspStructure::new(n, p).unwrap();
        let mut adj = vec![vec![false; n]; n];
        let mut rng = SplitMix64::new(14);
        for step in 0..30 {
            let u = rng.next_below(n as u64) as usize;
            let mut v = rng.next_below(n as u64) as usize;
            if u == v {
                v = (v + 1) % n;
            }
            let present = rng.next_below(3) > 0;
            adj[u][v] = present;
            st.update(u, v, present);
            if step % 6 == 0 {
                for s in 0..n {
                    let want = bfs(&adj, s);
                    let tree = st.tree_query(s).unwrap();
                    assert_eq!(tree.dist, want, "step {step} source {s}");
                    for t in 0..n {
                        if let Some(p) = tree.pred[t] {
                            assert!(adj[p][t]);
                            assert_eq!(want[p].map(|d| d + 1), want[t]);
                        } else {
                            assert!(t == s || want[t].is_none(), "unreachable is unmarked");
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn tree_reporting_disabled_errors() {
        let mut st = det(4);
        assert_eq!(st.tree_query(0).unwrap_err(), SsspError::TreeReportingDisabled);
    }
}
