//! Predecessor reporting on top of the distance oracle.
//!
//! Two stacked reductions. Vertex switching first: every vertex `v` splits
//! into an in-copy `v+` and an out-copy `v-` joined by an auxiliary edge that
//! is present iff `v` is switched on, so distances in the induced subgraph
//! `G[W]` are half the distances between plus-copies. Grouping into blocks
//! second: the split vertex ids are partitioned into consecutive blocks, and
//! q auxiliary oracles are kept where oracle i additionally has an edge
//! `x -> copy(y)` for every inner edge `x -> y` with `x` in the first i
//! blocks. The least i whose copy-distance matches the true distance pins the
//! block containing a penultimate vertex, which a scan of that block recovers.

use std::collections::HashMap;

use crate::hopdist::{CountingMode, HopDist, HopDistOracle, VertexPatch};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PredecessorVariant {
    /// Probe every level for every pair.
    LinearScan,
    /// Binary search over levels using single-pair probes.
    BinarySearch,
}

#[derive(Debug, Clone)]
pub struct ReporterConfig {
    pub block_size: usize,
    pub cap: usize,
    pub mode: CountingMode,
    pub variant: PredecessorVariant,
}

impl ReporterConfig {
    pub fn new(n: usize, mode: CountingMode) -> Self {
        ReporterConfig {
            block_size: n.div_ceil(2).max(1),
            cap: (n as f64).sqrt().ceil() as usize,
            mode,
            variant: PredecessorVariant::BinarySearch,
        }
    }
}

/// Distance and predecessor answer for one queried pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PairAnswer {
    pub dist: HopDist,
    pub pred: Option<usize>,
}

/// Shortest-path tree: `pred[t]` is the parent, `dist[t]` the depth.
#[derive(Debug, Clone)]
pub struct SsspTree {
    pub root: usize,
    pub pred: Vec<Option<usize>>,
    pub dist: Vec<HopDist>,
}

impl SsspTree {
    /// Root-to-target vertex sequence; `None` when unreachable.
    pub fn path_to(&self, t: usize) -> Option<Vec<usize>> {
        self.dist[t]?;
        let mut path = vec![t];
        let mut cur = t;
        while cur != self.root {
            cur = self.pred[cur].expect("reachable non-root vertices have parents");
            path.push(cur);
        }
        path.reverse();
        Some(path)
    }
}

pub struct SwitchedReporter {
    n: usize,
    h: usize,
    cfg: ReporterConfig,
    adj: Vec<Vec<bool>>,
    w: Vec<bool>,
    /// Block width in split ids; blocks partition `[0, 2n)`.
    bb: usize,
    q: usize,
    oracles: Vec<HopDistOracle>,
}

impl SwitchedReporter {
    pub fn new(n: usize, h: usize, cfg: ReporterConfig) -> Self {
        assert!(n >= 1 && h >= 1 && h <= n);
        let b = cfg.block_size.clamp(1, n);
        let bb = 2 * b;
        let q = (2 * n).div_ceil(bb);
        let mode = cfg.mode;
        let oracles = (0..q).map(|_| HopDistOracle::new(4 * n, 2 * h, mode, cfg.cap)).collect();
        let mut rep = SwitchedReporter {
            n,
            h,
            cfg,
            adj: vec![vec![false; n]; n],
            w: vec![false; n],
            bb,
            q,
            oracles,
        };
        for v in 0..n {
            rep.switch_set(v, true);
        }
        rep
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn h(&self) -> usize {
        self.h
    }

    pub fn level_count(&self) -> usize {
        self.q
    }

    pub fn is_on(&self, v: usize) -> bool {
        self.w[v]
    }

    pub fn all_on(&self) -> bool {
        self.w.iter().all(|&x| x)
    }

    pub fn adj(&self, u: usize, v: usize) -> bool {
        self.adj[u][v]
    }

    #[inline]
    fn plus(&self, v: usize) -> usize {
        v
    }

    #[inline]
    fn minus(&self, v: usize) -> usize {
        self.n + v
    }

    #[inline]
    fn copy_id(&self, x: usize) -> usize {
        2 * self.n + x
    }

    fn inner_edge_update(&mut self, x: usize, y: usize, present: bool) {
        let copy_y = self.copy_id(y);
        for (idx, oracle) in self.oracles.iter_mut().enumerate() {
            oracle.edge_update(x, y, present);
            if x < (idx + 1) * self.bb {
                oracle.edge_update(x, copy_y, present);
            }
        }
    }

    pub fn edge_update(&mut self, u: usize, v: usize, present: bool) {
        assert!(u != v);
        if self.adj[u][v] == present {
            return;
        }
        self.adj[u][v] = present;
        self.inner_edge_update(self.minus(u), self.plus(v), present);
    }

    /// Toggles the auxiliary edge of `v`; off means `v` leaves the induced
    /// subgraph (its outgoing edges become unusable).
    pub fn switch_set(&mut self, v: usize, on: bool) {
        if self.w[v] == on {
            return;
        }
        self.w[v] = on;
        self.inner_edge_update(self.plus(v), self.minus(v), on);
    }

    /// Replaces rows/columns of the patched vertices in one batch per level.
    pub fn vertex_batch_update(&mut self, patches: &[VertexPatch]) {
        if patches.is_empty() {
            return;
        }
        let mut target = self.adj.clone();
        for p in patches {
            for w in 0..self.n {
                if w != p.vertex {
                    target[p.vertex][w] = p.out[w];
                    target[w][p.vertex] = p.into[w];
                }
            }
        }
        let mut inner_changes = Vec::new();
        for u in 0..self.n {
            for v in 0..self.n {
                if target[u][v] != self.adj[u][v] {
                    inner_changes.push((self.minus(u), self.plus(v), target[u][v]));
                }
            }
        }
        let rows: Vec<usize> = patches.iter().map(|p| self.minus(p.vertex)).collect();
        let mut cols: Vec<usize> = patches.iter().map(|p| self.plus(p.vertex)).collect();
        cols.extend(patches.iter().map(|p| self.copy_id(self.plus(p.vertex))));
        for idx in 0..self.q {
            let mut changes = inner_changes.clone();
            for &(x, y, present) in &inner_changes {
                if x < (idx + 1) * self.bb {
                    changes.push((x, self.copy_id(y), present));
                }
            }
            self.oracles[idx].apply_edge_changes_grouped(&changes, &rows, &cols);
        }
        self.adj = target;
    }

    fn halve(&self, d: HopDist) -> HopDist {
        d.map(|v| {
            debug_assert!(v % 2 == 0, "plus-to-plus walks have even length");
            v / 2
        })
    }

    /// `h`-bounded distances from `s` in the switched graph, for all targets.
    pub fn dists_from(&mut self, s: usize) -> Vec<HopDist> {
        let n = self.n;
        let pairs: Vec<(usize, usize)> = (0..n).map(|t| (self.plus(s), self.plus(t))).collect();
        let last = self.q - 1;
        let raw = self.oracles[last].with_temp_pairs(&pairs, |o| {
            (0..n).map(|t| o.query(s, t).unwrap()).collect::<Vec<_>>()
        });
        raw.into_iter().map(|d| self.halve(d)).collect()
    }

    pub fn pair_dist(&mut self, s: usize, t: usize) -> HopDist {
        let last = self.q - 1;
        let pair = (self.plus(s), self.plus(t));
        let raw = self.oracles[last].with_temp_pairs(&[pair], |o| o.query(pair.0, pair.1).unwrap());
        self.halve(raw)
    }

    /// Distances and shortest-path predecessors for all queried pairs in the
    /// switched graph. Sources are grouped so each source pays one full
    /// source query on the top level.
    pub fn submatrix_predecessors(
        &mut self,
        queries: &[(usize, usize)],
    ) -> HashMap<(usize, usize), PairAnswer> {
        let mut by_source: HashMap<usize, Vec<usize>> = HashMap::new();
        for &(s, t) in queries {
            by_source.entry(s).or_default().push(t);
        }
        let mut out = HashMap::new();
        let mut sources: Vec<usize> = by_source.keys().copied().collect();
        sources.sort_unstable();
        for s in sources {
            let targets = &by_source[&s];
            let answers = self.predecessors_from(s, targets);
            for (t, ans) in targets.iter().zip(answers) {
                out.insert((s, *t), ans);
            }
        }
        out
    }

    fn predecessors_from(&mut self, s: usize, targets: &[usize]) -> Vec<PairAnswer> {
        let n = self.n;
        let last = self.q - 1;
        let sp = self.plus(s);
        // One source query covering all inner ids plus the copy ids of targets.
        let mut pairs: Vec<(usize, usize)> = (0..2 * n).map(|x| (sp, x)).collect();
        for &t in targets {
            pairs.push((sp, self.copy_id(self.plus(t))));
        }
        let copy_base = 2 * n;
        let (inner_dist, refs): (Vec<HopDist>, Vec<HopDist>) =
            self.oracles[last].with_temp_pairs(&pairs, |o| {
                let inner: Vec<HopDist> = (0..2 * n).map(|x| o.query(sp, x).unwrap()).collect();
                let refs: Vec<HopDist> = targets
                    .iter()
                    .map(|&t| o.query(sp, copy_base + t).unwrap())
                    .collect();
                (inner, refs)
            });

        // Linear scan pre-probes every level for every target.
        let mut level_vals: Vec<Vec<HopDist>> = Vec::new();
        if self.cfg.variant == PredecessorVariant::LinearScan {
            for idx in 0..self.q {
                let pairs: Vec<(usize, usize)> =
                    targets.iter().map(|&t| (sp, copy_base + t)).collect();
                let vals = self.oracles[idx].with_temp_pairs(&pairs, |o| {
                    targets
                        .iter()
                        .map(|&t| o.query(sp, copy_base + t).unwrap())
                        .collect::<Vec<_>>()
                });
                level_vals.push(vals);
            }
            // The level values may only drop as copy edges accumulate.
            for ti in 0..targets.len() {
                for idx in 1..self.q {
                    let prev = level_vals[idx - 1][ti].unwrap_or(u32::MAX);
                    let cur = level_vals[idx][ti].unwrap_or(u32::MAX);
                    assert!(prev >= cur, "copy distances must be non-increasing across levels");
                }
            }
        }

        let mut answers = Vec::with_capacity(targets.len());
        for (ti, &t) in targets.iter().enumerate() {
            if t == s {
                answers.push(PairAnswer { dist: Some(0), pred: None });
                continue;
            }
            let reference = refs[ti];
            let Some(rv) = reference else {
                answers.push(PairAnswer { dist: None, pred: None });
                continue;
            };
            let level = match self.cfg.variant {
                PredecessorVariant::LinearScan => (0..self.q)
                    .find(|&idx| level_vals[idx][ti] == reference)
                    .expect("top level matches itself"),
                PredecessorVariant::BinarySearch => {
                    let mut lo = 0usize;
                    let mut hi = last;
                    while lo < hi {
                        let mid = (lo + hi) / 2;
                        let pair = (sp, copy_base + t);
                        let val = self.oracles[mid]
                            .with_temp_pairs(&[pair], |o| o.query(pair.0, pair.1).unwrap());
                        if let Some(v) = val {
                            assert!(v >= rv, "copy distances must be non-increasing across levels");
                        }
                        if val == reference {
                            hi = mid;
                        } else {
                            lo = mid + 1;
                        }
                    }
                    lo
                }
            };
            // Smallest-id qualifying predecessor within the located block.
            let block_lo = level * self.bb;
            let block_hi = ((level + 1) * self.bb).min(2 * n);
            let mut pred = None;
            for x in block_lo..block_hi {
                if x < n {
                    continue; // in-copies never precede a plus vertex
                }
                let p = x - n;
                if self.adj[p][t] && inner_dist[x] == Some(rv - 1) {
                    pred = Some(p);
                    break;
                }
            }
            debug_assert!(
                pred.is_some() || !matches!(self.cfg.mode, CountingMode::Deterministic),
                "a matching level must contain a predecessor"
            );
            answers.push(PairAnswer { dist: self.halve(reference), pred });
        }
        answers
    }

    /// Shortest-path tree from `s` in the switched graph.
    pub fn sssp_tree_from(&mut self, s: usize) -> SsspTree {
        let n = self.n;
        let queries: Vec<(usize, usize)> = (0..n).filter(|&t| t != s).map(|t| (s, t)).collect();
        let answers = self.submatrix_predecessors(&queries);
        let mut pred = vec![None; n];
        let mut dist = vec![None; n];
        dist[s] = Some(0);
        for ((_, t), ans) in answers {
            if ans.dist.is_some() && ans.pred.is_some() {
                dist[t] = ans.dist;
                pred[t] = ans.pred;
            }
        }
        SsspTree { root: s, pred, dist }
    }

    /// No odd-length plus-to-plus walk may be counted (test support).
    pub fn odd_counts_absent(&mut self, s: usize, t: usize) -> bool {
        let last = self.q - 1;
        let pair = (self.plus(s), self.plus(t));
        let support = self.oracles[last]
            .with_temp_pairs(&[pair], |o| o.support(pair.0, pair.1).unwrap());
        support.iter().skip(1).step_by(2).all(|&nz| !nz)
    }
}
