//! Small shared graph routines: SCCs in topological order, depth-limited
//! reachability trees, and a sparse subgraph preserving the SCCs.

/// Iterative Tarjan; components are returned in topological order of the
/// condensation (every edge goes from an earlier component to a later one).
pub fn tarjan_sccs(adj: &[Vec<bool>]) -> Vec<Vec<usize>> {
    let n = adj.len();
    let mut index = vec![usize::MAX; n];
    let mut low = vec![0usize; n];
    let mut on_stack = vec![false; n];
    let mut stack = Vec::new();
    let mut next_index = 0usize;
    let mut comps: Vec<Vec<usize>> = Vec::new();

    // Explicit DFS stack: (vertex, next neighbor to try).
    let mut call: Vec<(usize, usize)> = Vec::new();
    for root in 0..n {
        if index[root] != usize::MAX {
            continue;
        }
        call.push((root, 0));
        index[root] = next_index;
        low[root] = next_index;
        next_index += 1;
        stack.push(root);
        on_stack[root] = true;
        while let Some(&mut (v, ref mut ni)) = call.last_mut() {
            if *ni < n {
                let w = *ni;
                *ni += 1;
                if !adj[v][w] {
                    continue;
                }
                if index[w] == usize::MAX {
                    index[w] = next_index;
                    low[w] = next_index;
                    next_index += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    call.push((w, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
            } else {
                call.pop();
                if let Some(&(parent, _)) = call.last() {
                    low[parent] = low[parent].min(low[v]);
                }
                if low[v] == index[v] {
                    let mut comp = Vec::new();
                    loop {
                        let w = stack.pop().unwrap();
                        on_stack[w] = false;
                        comp.push(w);
                        if w == v {
                            break;
                        }
                    }
                    comp.sort_unstable();
                    comps.push(comp);
                }
            }
        }
    }
    // Tarjan emits components in reverse topological order.
    comps.reverse();
    comps
}

/// BFS tree from `root`, restricted to `within` (when given) and pruned at
/// `depth_limit`. Depths are exact shortest-path depths in the restriction.
#[derive(Debug, Clone)]
pub struct ReachTree {
    pub root: usize,
    pub parent: Vec<Option<usize>>,
    pub depth: Vec<Option<u32>>,
}

pub fn reach_tree(
    adj: &[Vec<bool>],
    root: usize,
    within: Option<&[bool]>,
    depth_limit: usize,
) -> ReachTree {
    let n = adj.len();
    let inside = |v: usize| within.map_or(true, |w| w[v]);
    let mut parent = vec![None; n];
    let mut depth = vec![None; n];
    debug_assert!(inside(root));
    depth[root] = Some(0);
    let mut frontier = vec![root];
    for d in 1..=depth_limit as u32 {
        let mut next = Vec::new();
        for &u in &frontier {
            for v in 0..n {
                if adj[u][v] && inside(v) && depth[v].is_none() {
                    depth[v] = Some(d);
                    parent[v] = Some(u);
                    next.push(v);
                }
            }
        }
        frontier = next;
    }
    ReachTree { root, parent, depth }
}

impl ReachTree {
    /// Root-to-vertex path; `None` if the vertex is outside the tree.
    pub fn path_to(&self, t: usize) -> Option<Vec<usize>> {
        self.depth[t]?;
        let mut path = vec![t];
        let mut cur = t;
        while let Some(p) = self.parent[cur] {
            path.push(p);
            cur = p;
        }
        debug_assert_eq!(cur, self.root);
        path.reverse();
        Some(path)
    }

    pub fn vertices_at_depth(&self, d: u32) -> Vec<usize> {
        (0..self.depth.len()).filter(|&v| self.depth[v] == Some(d)).collect()
    }
}

/// Sparse subgraph keeping every SCC strongly connected: per component, an
/// out-tree from and an in-tree to one representative.
pub fn scc_preserving_subgraph(adj: &[Vec<bool>], sccs: &[Vec<usize>]) -> Vec<(usize, usize)> {
    let n = adj.len();
    let mut edges = Vec::new();
    for comp in sccs {
        if comp.len() == 1 {
            continue;
        }
        let mut inside = vec![false; n];
        for &v in comp {
            inside[v] = true;
        }
        let root = comp[0];
        let out_tree = reach_tree(adj, root, Some(&inside), comp.len());
        for &v in comp {
            if let Some(p) = out_tree.parent[v] {
                edges.push((p, v));
            }
        }
        // In-tree: search the reversed graph, emit edges forward.
        let radj: Vec<Vec<bool>> = (0..n)
            .map(|u| (0..n).map(|v| adj[v][u]).collect())
            .collect();
        let in_tree = reach_tree(&radj, root, Some(&inside), comp.len());
        for &v in comp {
            if let Some(p) = in_tree.parent[v] {
                edges.push((v, p));
            }
        }
    }
    edges.sort_unstable();
    edges.dedup();
    edges
}
