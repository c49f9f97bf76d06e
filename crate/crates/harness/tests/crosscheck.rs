//! Oracle agreement checks: the independent references must agree with each
//! other and with the algebraic counting layer.

use dygraph::algebra::{counting_matrix, mat_inverse, PolyRing, WordRing};
use dygraph::rng::SplitMix64;
use dygraph_harness::oracle;

fn random_graph(n: usize, density: f64, seed: u64) -> Vec<Vec<bool>> {
    let mut adj = vec![vec![false; n]; n];
    let mut rng = SplitMix64::new(seed);
    for u in 0..n {
        for v in 0..n {
            if u != v && rng.next_f64() < density {
                adj[u][v] = true;
            }
        }
    }
    adj
}

#[test]
fn floyd_warshall_equals_repeated_bfs() {
    for seed in 0..10 {
        let adj = random_graph(11, 0.25, seed);
        let fw = oracle::floyd_warshall(&adj);
        for s in 0..11 {
            assert_eq!(fw[s], oracle::bfs(&adj, s));
        }
    }
}

#[test]
fn walk_enumeration_matches_counting_inverse() {
    // Coefficients of (I - X*A)^-1 count walks by length; compare against the
    // big-integer powering oracle on instances where counts fit the modulus.
    let h = 4;
    let p = 1_000_000_007u64;
    let pr = PolyRing::new(WordRing::new(p), h);
    for seed in 20..28 {
        let n = 7;
        let adj = random_graph(n, 0.3, seed);
        let inv = mat_inverse(&pr, &counting_matrix(&pr, &adj)).unwrap();
        for s in 0..n {
            for t in 0..n {
                let counts = oracle::walk_counts(&adj, s, t, h);
                for (k, count) in counts.iter().enumerate() {
                    let reduced: u64 = (count % p).try_into().unwrap();
                    assert_eq!(
                        inv.at(s, t).coeffs[k],
                        reduced,
                        "seed {seed} pair ({s},{t}) length {k}"
                    );
                }
            }
        }
    }
}
