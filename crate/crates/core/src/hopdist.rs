//! Fully dynamic hop-bounded distances via walk counting.
//!
//! The inverse of `I - X*A` modulo `X^{h+1}` holds, in the `X^k` coefficient
//! of cell `(s,t)`, the number of length-`k` walks from `s` to `t`. The least
//! index with a non-zero coefficient is the `h`-bounded distance. Counting is
//! exact modulo a prime above `n^h` (deterministic) or modulo a random
//! word-size prime (zero tests correct with high probability). Only the
//! zero/non-zero pattern of coefficients is ever exposed.

use std::fmt;

use crate::algebra::{
    counting_matrix, ring_deterministic, ring_randomized, BigRing, PolyRing, Ring,
    ScalarRing, TruncPoly, WordRing,
};
use crate::dyninv::DynInverse;

/// Hop-bounded distance; `None` is unreachable within the bound.
pub type HopDist = Option<u32>;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CountingMode {
    Deterministic,
    Randomized { seed: u64 },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum HopDistError {
    PairNotMaintained { s: usize, t: usize },
}

impl fmt::Display for HopDistError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            HopDistError::PairNotMaintained { s, t } => {
                write!(f, "pair ({s},{t}) is not in the maintained set")
            }
        }
    }
}

impl std::error::Error for HopDistError {}

/// Full replacement of one vertex's outgoing row and incoming column.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VertexPatch {
    pub vertex: usize,
    pub out: Vec<bool>,
    pub into: Vec<bool>,
}

struct Core<R: Ring> {
    n: usize,
    h: usize,
    pr: PolyRing<R>,
    adj: Vec<Vec<bool>>,
    inv: DynInverse<R>,
}

impl<R: Ring> Core<R> {
    fn new(ring: R, n: usize, h: usize, cap: usize) -> Self {
        let pr = PolyRing::new(ring, h);
        let adj = vec![vec![false; n]; n];
        let m = counting_matrix(&pr, &adj);
        let inv = DynInverse::new(pr.clone(), &m, cap).expect("I - X*0 is invertible");
        Core { n, h, pr, adj, inv }
    }

    fn edge_update(&mut self, u: usize, v: usize, present: bool) {
        assert!(u != v, "loops are not part of the model");
        if self.adj[u][v] == present {
            return;
        }
        self.adj[u][v] = present;
        // Inserting an edge puts -X at M[u][v]; deleting restores 0.
        let delta =
            if present { self.pr.neg(&self.pr.x()) } else { self.pr.x() };
        self.inv
            .entry_update(u, v, &delta)
            .expect("X-multiple deltas keep the denominator a unit");
    }

    /// One Woodbury batch applying a set of final edge states. Every changed
    /// cell must sit in a listed row or column; the correction rank is the
    /// number of listed rows plus listed columns actually used.
    fn apply_edge_changes_grouped(
        &mut self,
        changes: &[(usize, usize, bool)],
        rows: &[usize],
        cols: &[usize],
    ) {
        let mut delta: Vec<(usize, usize, i8)> = Vec::new();
        let mut newadj = self.adj.clone();
        for &(i, j, present) in changes {
            newadj[i][j] = present;
        }
        for &(i, j, _) in changes {
            let d = (newadj[i][j] as i8) - (self.adj[i][j] as i8);
            if d != 0 && !delta.iter().any(|&(a, b, _)| (a, b) == (i, j)) {
                delta.push((i, j, d));
            }
        }
        if delta.is_empty() {
            return;
        }
        let minus_x = self.pr.neg(&self.pr.x());
        let one = self.pr.one();
        let minus_one = self.pr.neg(&one);
        let mut ucols = Vec::new();
        let mut vcols = Vec::new();
        let in_rows = |i: usize| rows.contains(&i);
        for &r in rows {
            let mut u = vec![self.pr.zero(); self.n];
            let mut v = vec![self.pr.zero(); self.n];
            let mut used = false;
            for &(i, j, d) in &delta {
                if i == r {
                    used = true;
                    v[j] = if d > 0 { one.clone() } else { minus_one.clone() };
                }
            }
            if used {
                u[r] = minus_x.clone();
                ucols.push(u);
                vcols.push(v);
            }
        }
        for &c in cols {
            let mut u = vec![self.pr.zero(); self.n];
            let mut v = vec![self.pr.zero(); self.n];
            let mut used = false;
            for &(i, j, d) in &delta {
                if j == c && !in_rows(i) {
                    used = true;
                    u[i] = if d > 0 { minus_x.clone() } else { self.pr.x() };
                }
            }
            if used {
                v[c] = one.clone();
                ucols.push(u);
                vcols.push(v);
            }
        }
        debug_assert!(
            delta.iter().all(|&(i, j, _)| in_rows(i) || cols.contains(&j)),
            "every change must be covered by a listed row or column"
        );
        self.adj = newadj;
        self.inv
            .batch_update(&ucols, &vcols)
            .expect("X-multiple batches keep the capacitance invertible");
    }

    fn vertex_batch_update(&mut self, patches: &[VertexPatch]) {
        if patches.is_empty() {
            return;
        }
        let mut target = self.adj.clone();
        for p in patches {
            assert!(p.out.len() == self.n && p.into.len() == self.n);
            for w in 0..self.n {
                if w != p.vertex {
                    target[p.vertex][w] = p.out[w];
                    target[w][p.vertex] = p.into[w];
                }
            }
        }
        let mut changes = Vec::new();
        for i in 0..self.n {
            for j in 0..self.n {
                if target[i][j] != self.adj[i][j] {
                    changes.push((i, j, target[i][j]));
                }
            }
        }
        let verts: Vec<usize> = patches.iter().map(|p| p.vertex).collect();
        self.apply_edge_changes_grouped(&changes, &verts, &verts);
    }

    fn dist_of(&self, poly: &TruncPoly<R>) -> HopDist {
        self.pr.first_nonzero(poly).map(|k| k as u32)
    }
}

/// The public oracle; the scalar representation is picked at construction.
pub struct HopDistOracle {
    inner: OracleInner,
    mode: CountingMode,
}

enum OracleInner {
    Word(Core<WordRing>),
    Big(Core<BigRing>),
}

macro_rules! with_core {
    ($self:expr, $core:ident => $body:expr) => {
        match &$self.inner {
            OracleInner::Word($core) => $body,
            OracleInner::Big($core) => $body,
        }
    };
}

macro_rules! with_core_mut {
    ($self:expr, $core:ident => $body:expr) => {
        match &mut $self.inner {
            OracleInner::Word($core) => $body,
            OracleInner::Big($core) => $body,
        }
    };
}

impl HopDistOracle {
    pub fn new(n: usize, h: usize, mode: CountingMode, cap: usize) -> Self {
        assert!(n >= 1 && h >= 1, "hop bound out of range");
        let inner = match mode {
            CountingMode::Deterministic => match ring_deterministic(n as u64, h as u32) {
                ScalarRing::Word(r) => OracleInner::Word(Core::new(r, n, h, cap)),
                ScalarRing::Big(r) => OracleInner::Big(Core::new(r, n, h, cap)),
            },
            CountingMode::Randomized { seed } => {
                OracleInner::Word(Core::new(ring_randomized(seed), n, h, cap))
            }
        };
        HopDistOracle { inner, mode }
    }

    pub fn n(&self) -> usize {
        with_core!(self, c => c.n)
    }

    pub fn h(&self) -> usize {
        with_core!(self, c => c.h)
    }

    pub fn mode(&self) -> CountingMode {
        self.mode
    }

    pub fn prime_decimal(&self) -> String {
        with_core!(self, c => c.pr.ring.modulus_decimal())
    }

    pub fn adj(&self, u: usize, v: usize) -> bool {
        with_core!(self, c => c.adj[u][v])
    }

    pub fn edge_update(&mut self, u: usize, v: usize, present: bool) {
        with_core_mut!(self, c => c.edge_update(u, v, present))
    }

    pub fn vertex_batch_update(&mut self, patches: &[VertexPatch]) {
        with_core_mut!(self, c => c.vertex_batch_update(patches))
    }

    pub fn apply_edge_changes_grouped(
        &mut self,
        changes: &[(usize, usize, bool)],
        rows: &[usize],
        cols: &[usize],
    ) {
        with_core_mut!(self, c => c.apply_edge_changes_grouped(changes, rows, cols))
    }

    /// Adds the pair to the maintained set (idempotent) and returns its distance.
    pub fn y_insert(&mut self, s: usize, t: usize) -> HopDist {
        with_core_mut!(self, c => { let p = c.inv.y_insert(s, t); c.dist_of(&p) })
    }

    pub fn y_remove(&mut self, s: usize, t: usize) {
        with_core_mut!(self, c => c.inv.y_remove(s, t))
    }

    pub fn y_contains(&self, s: usize, t: usize) -> bool {
        with_core!(self, c => c.inv.y_contains(s, t))
    }

    pub fn y_len(&self) -> usize {
        with_core!(self, c => c.inv.y_len())
    }

    pub fn y_clear(&mut self) {
        with_core_mut!(self, c => c.inv.y_clear())
    }

    pub fn query(&self, s: usize, t: usize) -> Result<HopDist, HopDistError> {
        with_core!(self, c => {
            match c.inv.y_get(s, t) {
                Some(p) => Ok(c.dist_of(p)),
                None => Err(HopDistError::PairNotMaintained { s, t }),
            }
        })
    }

    /// Zero/non-zero pattern of the counting coefficients for a maintained pair.
    pub fn support(&self, s: usize, t: usize) -> Result<Vec<bool>, HopDistError> {
        with_core!(self, c => {
            match c.inv.y_get(s, t) {
                Some(p) => Ok(c.pr.support(p)),
                None => Err(HopDistError::PairNotMaintained { s, t }),
            }
        })
    }

    /// Runs `f` with the given pairs temporarily maintained; pairs that were
    /// already present stay afterwards, the rest are removed again.
    pub fn with_temp_pairs<T>(
        &mut self,
        pairs: &[(usize, usize)],
        f: impl FnOnce(&Self) -> T,
    ) -> T {
        let mut added = Vec::new();
        for &(s, t) in pairs {
            if !self.y_contains(s, t) {
                self.y_insert(s, t);
                added.push((s, t));
            }
        }
        let out = f(self);
        for (s, t) in added {
            self.y_remove(s, t);
        }
        out
    }
}
