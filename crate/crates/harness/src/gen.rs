//! Seeded trace generation with adversarial profiles.

use dygraph::rng::SplitMix64;

use crate::trace::{Event, Trace};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Profile {
    /// Random flips with the configured query mix.
    Uniform,
    /// Deletion-biased once the graph is dense.
    DeleteHeavy,
    /// Update bursts sized exactly to the phase length, queries at the seams.
    PhaseAligned,
    /// Periodically deletes all edges of the currently most congested vertex.
    Hub,
}

impl Profile {
    pub fn parse(s: &str) -> Option<Profile> {
        match s {
            "uniform" => Some(Profile::Uniform),
            "delete-heavy" => Some(Profile::DeleteHeavy),
            "phase-aligned" => Some(Profile::PhaseAligned),
            "hub" => Some(Profile::Hub),
            _ => None,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Profile::Uniform => "uniform",
            Profile::DeleteHeavy => "delete-heavy",
            Profile::PhaseAligned => "phase-aligned",
            Profile::Hub => "hub",
        }
    }
}

/// Which query events the generator may emit.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QueryKind {
    Sssp,
    Dist,
    Path,
    Closure,
    Trees,
}

#[derive(Debug, Clone)]
pub struct GenConfig {
    pub n: usize,
    pub steps: usize,
    pub density: f64,
    /// Fraction of events that are queries.
    pub query_mix: f64,
    pub seed: u64,
    pub profile: Profile,
    /// Phase length assumed by the aligned profiles.
    pub delta: usize,
    /// Collection parameters used by the hub profile's congestion replay.
    pub h: usize,
    pub tau: usize,
    pub queries: Vec<QueryKind>,
    /// Emit vertex patches instead of single edges (vertex-update structures).
    pub vertex_events: bool,
}

impl GenConfig {
    pub fn new(n: usize, steps: usize, seed: u64, profile: Profile) -> Self {
        GenConfig {
            n,
            steps,
            density: 0.2,
            query_mix: 0.3,
            seed,
            profile,
            delta: n.div_ceil(4).max(1),
            h: (n as f64).cbrt().ceil() as usize,
            tau: 2,
            queries: vec![QueryKind::Sssp],
            vertex_events: false,
        }
    }
}

/// Plain replay of the threshold collection build over explicit BFS trees;
/// returns the per-vertex stored-path congestion. Independent of the oracle
/// stack, used by the hub profile and by congestion cross-checks.
pub fn congestion_profile(adj: &[Vec<bool>], h: usize, tau: usize) -> (Vec<u64>, Vec<usize>) {
    let n = adj.len();
    let threshold = (n * h * tau) as u64;
    let mut alpha = vec![0u64; n];
    let mut congested = vec![false; n];
    let mut c_list = Vec::new();
    for s in 0..n {
        for v in 0..n {
            if !congested[v] && alpha[v] > threshold {
                congested[v] = true;
                c_list.push(v);
            }
        }
        // BFS tree from s avoiding congested vertices.
        let mut dist = vec![None; n];
        let mut parent = vec![None; n];
        dist[s] = Some(0u32);
        let mut frontier = vec![s];
        for d in 1..=h as u32 {
            let mut next = Vec::new();
            for &u in &frontier {
                if congested[u] {
                    continue;
                }
                for v in 0..n {
                    if adj[u][v] && !congested[v] && dist[v].is_none() {
                        dist[v] = Some(d);
                        parent[v] = Some(u);
                        next.push(v);
                    }
                }
            }
            frontier = next;
        }
        alpha[s] += 1; // the trivial self path
        for t in 0..n {
            if t == s || dist[t].is_none() || congested[t] {
                continue;
            }
            let mut cur = t;
            alpha[t] += 1;
            while let Some(p) = parent[cur] {
                alpha[p] += 1;
                cur = p;
            }
        }
    }
    (alpha, c_list)
}

pub fn gen_trace(cfg: &GenConfig) -> Trace {
    let n = cfg.n;
    let mut rng = SplitMix64::new(cfg.seed);
    let mut adj = vec![vec![false; n]; n];
    let mut events = Vec::with_capacity(cfg.steps);
    let mut query_round = 0usize;
    let mut updates_emitted = 0usize;

    let target_edges = ((n * (n - 1)) as f64 * cfg.density) as usize;

    while events.len() < cfg.steps {
        let remaining = cfg.steps - events.len();
        let want_query = match cfg.profile {
            Profile::PhaseAligned => {
                // Queries exactly at phase boundaries.
                updates_emitted > 0 && updates_emitted % cfg.delta == 0
            }
            _ => rng.next_f64() < cfg.query_mix,
        };
        if want_query {
            let kind = cfg.queries[query_round % cfg.queries.len()];
            query_round += 1;
            let s = rng.next_below(n as u64) as usize;
            let t = rng.next_below(n as u64) as usize;
            events.push(match kind {
                QueryKind::Sssp => Event::QuerySssp(s),
                QueryKind::Dist => Event::QueryDist(s, t),
                QueryKind::Path => Event::QueryPath(s, t),
                QueryKind::Closure => Event::QueryTc,
                QueryKind::Trees => Event::QueryTrees,
            });
            if matches!(cfg.profile, Profile::PhaseAligned) {
                updates_emitted = 0;
            }
            continue;
        }

        // Hub profile: once per phase window, tear down the most congested
        // vertex as replayed from the collection build.
        if matches!(cfg.profile, Profile::Hub)
            && updates_emitted > 0
            && updates_emitted % cfg.delta == 0
            && remaining > 1
        {
            let (alpha, _) = congestion_profile(&adj, cfg.h, cfg.tau);
            let hub = (0..n).max_by_key(|&v| (alpha[v], usize::MAX - v)).unwrap();
            if cfg.vertex_events {
                for w in 0..n {
                    adj[hub][w] = false;
                    adj[w][hub] = false;
                }
                events.push(Event::VPatch { vertex: hub, out: vec![], into: vec![] });
                updates_emitted += 1;
                continue;
            } else if let Some(w) = (0..n).find(|&w| adj[hub][w]) {
                adj[hub][w] = false;
                events.push(Event::Edge(hub, w, false));
                updates_emitted += 1;
                continue;
            }
        }

        let edges_now: usize = adj.iter().map(|r| r.iter().filter(|&&e| e).count()).sum();
        let deleting = match cfg.profile {
            Profile::DeleteHeavy => edges_now > target_edges / 2 && rng.next_f64() < 0.7,
            _ => edges_now > target_edges && rng.next_f64() < 0.5,
        };
        if cfg.vertex_events {
            let v = rng.next_below(n as u64) as usize;
            let keep = if deleting { 0.3 } else { 0.7 };
            let mut out = Vec::new();
            let mut into = Vec::new();
            for w in 0..n {
                if w == v {
                    continue;
                }
                let o = if rng.next_f64() < cfg.density * 2.0 && rng.next_f64() < keep {
                    true
                } else {
                    adj[v][w] && rng.next_f64() < keep
                };
                let i = if rng.next_f64() < cfg.density * 2.0 && rng.next_f64() < keep {
                    true
                } else {
                    adj[w][v] && rng.next_f64() < keep
                };
                adj[v][w] = o;
                adj[w][v] = i;
                if o {
                    out.push(w);
                }
                if i {
                    into.push(w);
                }
            }
            events.push(Event::VPatch { vertex: v, out, into });
        } else {
            let u = rng.next_below(n as u64) as usize;
            let mut v = rng.next_below(n as u64) as usize;
            if u == v {
                v = (v + 1) % n;
            }
            let present = if deleting { false } else { !adj[u][v] };
            adj[u][v] = present;
            events.push(Event::Edge(u, v, present));
        }
        updates_emitted += 1;
    }
    Trace { n, events }
}
