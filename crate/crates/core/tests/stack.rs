//! Cross-module integration: one shared update stream drives every structure
//! through the public API, checked against local brute force.

use dygraph::apsp::{ApspParams, ApspStructure};
use dygraph::hopdist::{CountingMode, HopDistOracle, VertexPatch};
use dygraph::minplus::INF;
use dygraph::rng::SplitMix64;
use dygraph::sssp::{SsspParams, SsspStructure};
use dygraph::tc::{TcParams, TransitiveClosure};

fn bfs(adj: &[Vec<bool>], s: usize) -> Vec<Option<u32>> {
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

#[test]
fn every_structure_tracks_one_update_stream() {
    let n = 12;
    let h = 3;
    let mut hop = HopDistOracle::new(n, h, CountingMode::Deterministic, 4);
    for s in 0..n {
        for t in 0..n {
            hop.y_insert(s, t);
        }
    }
    let mut sssp_params = SsspParams::defaults(n, CountingMode::Deterministic);
    sssp_params.tree_reporting = true;
    let mut sssp = SsspStructure::new(n, sssp_params).unwrap();
    let mut apsp =
        ApspStructure::new(n, ApspParams::defaults(n, 0.5, CountingMode::Deterministic)).unwrap();
    let mut tc =
        TransitiveClosure::new(n, TcParams::defaults(n, CountingMode::Deterministic)).unwrap();

    let mut adj = vec![vec![false; n]; n];
    let mut rng = SplitMix64::new(2718);
    for step in 0..30 {
        let u = rng.next_below(n as u64) as usize;
        let mut v = rng.next_below(n as u64) as usize;
        if u == v {
            v = (v + 1) % n;
        }
        let present = rng.next_below(3) > 0;
        adj[u][v] = present;
        hop.edge_update(u, v, present);
        sssp.update(u, v, present);
        let patch = VertexPatch {
            vertex: u,
            out: adj[u].clone(),
            into: (0..n).map(|w| adj[w][u]).collect(),
        };
        apsp.vertex_update(&[patch.clone()]);
        tc.vertex_update(&[patch]).unwrap();

        if step % 5 != 0 {
            continue;
        }
        for s in 0..n {
            let truth = bfs(&adj, s);
            assert_eq!(sssp.query(s), truth, "sssp from {s}");
            let tree = sssp.tree_query(s).unwrap();
            assert_eq!(tree.dist, truth, "tree from {s}");
            for t in 0..n {
                let bounded = truth[t].filter(|&d| d <= h as u32);
                assert_eq!(hop.query(s, t).unwrap(), bounded, "hop ({s},{t})");
                match truth[t] {
                    Some(d) => {
                        let est = apsp.estimate().at(s, t);
                        assert!(est >= d as u64 && est as f64 <= 1.5 * d as f64);
                        assert!(tc.closure().at(s, t));
                        let path = apsp.report_path(s, t).unwrap();
                        for win in path.windows(2) {
                            assert!(adj[win[0]][win[1]]);
                        }
                    }
                    None => {
                        assert_eq!(apsp.estimate().at(s, t), INF);
                        assert!(!tc.closure().at(s, t));
                        assert!(apsp.report_path(s, t).is_none());
                    }
                }
            }
        }
    }
}
