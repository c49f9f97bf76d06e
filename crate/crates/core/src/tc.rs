//! Deterministic fully dynamic transitive closure under vertex updates.
//!
//! Hop-bounded distances for all pairs are maintained explicitly; each update
//! recomputes the relay set over SCC blocks and closes the boolean reach
//! matrix through it:
//!
//!   `A* = A | (A[V,H] . (A[H,H])^n . A[H,V])`
//!
//! with the inner power taken by repeated squaring. Paths are reported in
//! O(n) closure probes by walking the condensation in topological order and
//! expanding inside the SCC-preserving subgraph.

use std::cell::Cell;
use std::fmt;

use crate::graph::scc_preserving_subgraph;
use crate::hitting::{weak_hitting_set, BlockPartition, HittingError};
use crate::hopdist::{CountingMode, HopDistOracle, VertexPatch};
use crate::minplus::BoolMat;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TcError {
    InvalidParameters(String),
    Unreachable { s: usize, t: usize },
}

impl fmt::Display for TcError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TcError::InvalidParameters(msg) => write!(f, "invalid parameters: {msg}"),
            TcError::Unreachable { s, t } => write!(f, "no path from {s} to {t}"),
        }
    }
}

impl std::error::Error for TcError {}

#[derive(Debug, Clone)]
pub struct TcParams {
    /// Hop bound of the maintained distances.
    pub h: usize,
    /// Block-size parameter; must satisfy `d * h >= 6n`.
    pub d: usize,
    pub cap: usize,
    pub mode: CountingMode,
}

impl TcParams {
    pub fn defaults(n: usize, mode: CountingMode) -> Self {
        // d*h lands near 12n so the per-block prune depth stays >= 2.
        let d = n.div_ceil(2).max(1);
        let h = (12 * n).div_ceil(d);
        TcParams { h, d, cap: (n as f64).sqrt().ceil() as usize, mode }
    }
}

struct TcRound {
    closure: BoolMat,
    hstar: Vec<usize>,
    partition: BlockPartition,
    scc_of: Vec<usize>,
    /// Representative vertex and topological position per SCC.
    reps: Vec<usize>,
    gscc: Vec<(usize, usize)>,
    power_steps: usize,
}

pub struct TransitiveClosure {
    n: usize,
    params: TcParams,
    adj: Vec<Vec<bool>>,
    oracle: HopDistOracle,
    round: TcRound,
    probes: Cell<u64>,
}

impl TransitiveClosure {
    pub fn new(n: usize, params: TcParams) -> Result<Self, TcError> {
        if params.h == 0 || params.d == 0 || params.cap == 0 {
            return Err(TcError::InvalidParameters("h, d, cap must be positive".into()));
        }
        if params.d * params.h < 6 * n {
            return Err(TcError::InvalidParameters(format!(
                "need d*h >= 6n, got d={} h={} n={n}",
                params.d, params.h
            )));
        }
        let mut oracle = HopDistOracle::new(n, params.h, params.mode, params.cap);
        for s in 0..n {
            for t in 0..n {
                oracle.y_insert(s, t);
            }
        }
        let mut st = TransitiveClosure {
            n,
            params,
            adj: vec![vec![false; n]; n],
            oracle,
            round: TcRound {
                closure: BoolMat::identity(n),
                hstar: Vec::new(),
                partition: BlockPartition { sccs: Vec::new(), scc_of: Vec::new(), blocks: Vec::new() },
                scc_of: Vec::new(),
                reps: Vec::new(),
                gscc: Vec::new(),
                power_steps: 0,
            },
            probes: Cell::new(0),
        };
        st.recompute().map_err(|e| TcError::InvalidParameters(e.to_string()))?;
        Ok(st)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn adj(&self, u: usize, v: usize) -> bool {
        self.adj[u][v]
    }

    pub fn closure(&self) -> &BoolMat {
        &self.round.closure
    }

    pub fn relay_set(&self) -> &[usize] {
        &self.round.hstar
    }

    pub fn partition(&self) -> &BlockPartition {
        &self.round.partition
    }

    /// Boolean-squaring steps taken by the last update (the power chain
    /// reaches its fixed point within `ceil(log2 n)` squarings).
    pub fn power_steps(&self) -> usize {
        self.round.power_steps
    }

    pub fn vertex_update(&mut self, patches: &[VertexPatch]) -> Result<&BoolMat, TcError> {
        self.oracle.vertex_batch_update(patches);
        for p in patches {
            for w in 0..self.n {
                if w != p.vertex {
                    self.adj[p.vertex][w] = p.out[w];
                    self.adj[w][p.vertex] = p.into[w];
                }
            }
        }
        self.recompute().map_err(|e| TcError::InvalidParameters(e.to_string()))?;
        Ok(&self.round.closure)
    }

    fn recompute(&mut self) -> Result<(), HittingError> {
        let n = self.n;
        let (hstar, partition) = weak_hitting_set(&self.adj, self.params.h, self.params.d)?;
        // A[u][v] = 1 iff the h-bounded distance is finite.
        let a = BoolMat::from_fn(n, n, |u, v| {
            self.oracle.query(u, v).expect("all pairs are maintained").is_some()
        });
        let (closure, power_steps) = relay_closure(&a, &hstar);

        let sccs = partition.sccs.clone();
        let mut scc_of = vec![0; n];
        for (i, comp) in sccs.iter().enumerate() {
            for &v in comp {
                scc_of[v] = i;
            }
        }
        let reps: Vec<usize> = sccs.iter().map(|c| c[0]).collect();
        let gscc = scc_preserving_subgraph(&self.adj, &sccs);
        self.round = TcRound { closure, hstar, partition, scc_of, reps, gscc, power_steps };
        Ok(())
    }

    #[inline]
    fn probe(&self, s: usize, t: usize) -> bool {
        self.probes.set(self.probes.get() + 1);
        self.round.closure.at(s, t)
    }

    pub fn last_probe_count(&self) -> u64 {
        self.probes.get()
    }

    /// Some `s -> t` path, found with at most `2 * #SCCs + 2` closure probes
    /// and an O(n)-sized expansion search.
    pub fn report_path(&self, s: usize, t: usize) -> Result<Vec<usize>, TcError> {
        self.probes.set(0);
        if !self.probe(s, t) {
            return Err(TcError::Unreachable { s, t });
        }
        if s == t {
            return Ok(vec![s]);
        }
        let scc_of = &self.round.scc_of;
        let reps = &self.round.reps;
        let (a, b) = (scc_of[s], scc_of[t]);
        // Walk the condensation in topological order: always advance to the
        // first later component reachable from the current one that still
        // reaches the target; that component is necessarily an out-neighbor.
        let mut scc_path = vec![a];
        let mut cur = a;
        while cur != b {
            let mut advanced = false;
            for next in (cur + 1)..=b {
                if self.probe(reps[cur], reps[next])
                    && (next == b || self.probe(reps[next], reps[b]))
                {
                    scc_path.push(next);
                    cur = next;
                    advanced = true;
                    break;
                }
            }
            assert!(advanced, "closure says reachable, so the walk cannot stall");
        }
        // Expand inside the union of the SCC-preserving subgraph restricted
        // to the walked components and the edges linking consecutive ones.
        let n = self.n;
        let mut on_path = vec![false; n];
        for &ci in &scc_path {
            for &v in &self.round.partition.sccs[ci] {
                on_path[v] = true;
            }
        }
        let mut out: Vec<Vec<usize>> = vec![Vec::new(); n];
        for &(u, v) in &self.round.gscc {
            if on_path[u] && on_path[v] {
                out[u].push(v);
            }
        }
        for win in scc_path.windows(2) {
            let (ci, cj) = (win[0], win[1]);
            'link: for &u in &self.round.partition.sccs[ci] {
                for &v in &self.round.partition.sccs[cj] {
                    if self.adj[u][v] {
                        out[u].push(v);
                        break 'link;
                    }
                }
            }
        }
        let mut pred = vec![None; n];
        let mut seen = vec![false; n];
        seen[s] = true;
        let mut queue = std::collections::VecDeque::from([s]);
        while let Some(u) = queue.pop_front() {
            if u == t {
                break;
            }
            for &v in &out[u] {
                if !seen[v] {
                    seen[v] = true;
                    pred[v] = Some(u);
                    queue.push_back(v);
                }
            }
        }
        assert!(seen[t], "expansion subgraph must connect the walked components");
        let mut path = vec![t];
        let mut cur = t;
        while cur != s {
            cur = pred[cur].unwrap();
            path.push(cur);
        }
        path.reverse();
        Ok(path)
    }
}

/// `A | (A[V,H] . (A[H,H])^n . A[H,V])` with the power by repeated squaring;
/// returns the closure and the number of squarings performed.
fn relay_closure(a: &BoolMat, hstar: &[usize]) -> (BoolMat, usize) {
    let n = a.rows;
    if hstar.is_empty() {
        return (a.clone(), 0);
    }
    let all: Vec<usize> = (0..n).collect();
    let a_vh = a.submatrix(&all, hstar);
    let a_hh = a.submatrix(hstar, hstar);
    let a_hv = a.submatrix(hstar, &all);
    let steps = (n.max(2) as f64).log2().ceil() as usize;
    let mut power = a_hh.clone();
    let mut performed = 0;
    for _ in 0..steps {
        let next = power.mul(&power);
        performed += 1;
        // The relay submatrix has a full diagonal, so squaring only adds.
        debug_assert_eq!(next.or(&power), next);
        if next == power {
            break;
        }
        power = next;
    }
    let mid = a_vh.mul(&power);
    let closed = mid.mul(&a_hv);
    (a.or(&closed), performed)
}
