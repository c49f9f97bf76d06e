//! Operation-count measurements across sizes, with a log-log slope fit.

use std::time::Instant;

use dygraph::algebra::{reset_ring_op_counts, ring_op_counts};
use dygraph::hopdist::{CountingMode, HopDistOracle};
use dygraph::rng::SplitMix64;

#[derive(Debug, Clone)]
pub struct BenchRow {
    pub n: usize,
    pub avg_ring_muls: f64,
    pub avg_wall_us: f64,
}

#[derive(Debug, Clone)]
pub struct ScalingReport {
    pub rows: Vec<BenchRow>,
    /// Least-squares slope of ln(muls) against ln(n).
    pub fitted_exponent: f64,
}

impl ScalingReport {
    pub fn tsv(&self) -> String {
        let mut out = String::from("n\tring_muls_per_update\twall_us_per_update\n");
        for r in &self.rows {
            out.push_str(&format!("{}\t{:.1}\t{:.1}\n", r.n, r.avg_ring_muls, r.avg_wall_us));
        }
        out.push_str(&format!("# fitted exponent {:.3}\n", self.fitted_exponent));
        out
    }
}

/// Edge-update cost of the bounded-distance oracle with a full maintained
/// row, across sizes; the ring-multiplication count should grow clearly
/// sub-quadratically in `n`.
pub fn hdist_update_scaling(sizes: &[usize], h: usize, updates: usize, seed: u64) -> ScalingReport {
    let mut rows = Vec::new();
    for &n in sizes {
        let cap = (n as f64).sqrt().ceil() as usize;
        let mut oracle = HopDistOracle::new(n, h, CountingMode::Deterministic, cap);
        for t in 0..n {
            oracle.y_insert(0, t);
        }
        let mut rng = SplitMix64::new(seed);
        // Warm the structure into the dense regime so the counting
        // polynomials carry non-zero coefficients almost everywhere.
        let mut adj = vec![vec![false; n]; n];
        let warm = (n * (n - 1))>> 2;
        let mut inserted = 0;
        while inserted < warm {
            let u = rng.next_below(n as u64) as usize;
            let v = (u + 1 + rng.next_below((n - 1) as u64) as usize) % n;
            if !adj[u][v] {
                adj[u][v] = true;
                oracle.edge_update(u, v, true);
                inserted += 1;
            }
        }
        reset_ring_op_counts();
        let start = Instant::now();
        for _ in 0..updates {
            let u = rng.next_below(n as u64) as usize;
            let v = (u + 1 + rng.next_below((n - 1) as u64) as usize) % n;
            adj[u][v] = !adj[u][v];
            oracle.edge_update(u, v, adj[u][v]);
        }
        let wall = start.elapsed();
        let muls = ring_op_counts().muls;
        rows.push(BenchRow {
            n,
            avg_ring_muls: muls as f64 / updates as f64,
            avg_wall_us: wall.as_micros() as f64 / updates as f64,
        });
    }
    let fitted_exponent = fit_slope(
        &rows.iter().map(|r| (r.n as f64).ln()).collect::<Vec<_>>(),
        &rows.iter().map(|r| r.avg_ring_muls.ln()).collect::<Vec<_>>(),
    );
    ScalingReport { rows, fitted_exponent }
}

fn fit_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let num: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let den: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    num / den
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn slope_fit_recovers_exponent() {
        let xs: Vec<f64> = [8.0f64, 16.0, 32.0].iter().map(|x| x.ln()).collect();
        let ys: Vec<f64> = [8.0f64, 16.0, 32.0].iter().map(|x| (x * x).ln()).collect();
        assert!((fit_slope(&xs, &ys) - 2.0).abs() < 1e-9);
    }

    #[test]
    fn scaling_rows_are_populated() {
        let report = hdist_update_scaling(&[8, 16], 3, 5, 7);
        assert_eq!(report.rows.len(), 2);
        assert!(report.rows.iter().all(|r| r.avg_ring_muls > 0.0));
        assert!(report.tsv().contains("fitted exponent"));
    }
}
