//! Min-plus and boolean matrix products with per-cell witnesses, including a
//! scaling-based approximate min-plus product.
//!
//! The approximate product rounds entries at a geometric ladder of scales: at
//! scale `R`, entries at most `R` become `ceil(a*M/R)` with `M = ceil(4/eps)`,
//! a bounded-entry exact product is taken, and the candidate `floor(C*R/M)`
//! is kept; the cell-wise minimum over scales is returned. Because true
//! values are integers, flooring preserves the lower bound, and the scale
//! bracketing the true value keeps the result within `(1+eps)` of it.

use std::fmt;

pub const INF: u64 = u64::MAX;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MinPlusMat {
    pub rows: usize,
    pub cols: usize,
    vals: Vec<u64>,
}

impl MinPlusMat {
    pub fn filled(rows: usize, cols: usize, v: u64) -> Self {
        MinPlusMat { rows, cols, vals: vec![v; rows * cols] }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> u64) -> Self {
        let mut vals = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                vals.push(f(i, j));
            }
        }
        MinPlusMat { rows, cols, vals }
    }

    /// Min-plus identity: zero diagonal, infinite elsewhere.
    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |i, j| if i == j { 0 } else { INF })
    }

    #[inline]
    pub fn at(&self, i: usize, j: usize) -> u64 {
        self.vals[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: u64) {
        self.vals[i * self.cols + j] = v;
    }

    pub fn max_finite(&self) -> Option<u64> {
        self.vals.iter().copied().filter(|&v| v != INF).max()
    }

    pub fn cellwise_min(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        MinPlusMat {
            rows: self.rows,
            cols: self.cols,
            vals: self.vals.iter().zip(&other.vals).map(|(&a, &b)| a.min(b)).collect(),
        }
    }

    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Self {
        Self::from_fn(rows.len(), cols.len(), |i, j| self.at(rows[i], cols[j]))
    }
}

pub const NO_WITNESS: usize = usize::MAX;

/// Product values together with, per cell, an inner index certifying them.
#[derive(Debug, Clone)]
pub struct WitnessedProduct {
    pub vals: MinPlusMat,
    pub wit: Vec<usize>,
}

impl WitnessedProduct {
    pub fn witness(&self, i: usize, j: usize) -> usize {
        self.wit[i * self.vals.cols + j]
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MinPlusError {
    DimensionMismatch,
    BadEpsilon,
}

impl fmt::Display for MinPlusError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MinPlusError::DimensionMismatch => write!(f, "inner dimensions differ"),
            MinPlusError::BadEpsilon => write!(f, "epsilon must be positive"),
        }
    }
}

impl std::error::Error for MinPlusError {}

/// Exact min-plus product, smallest witness index per cell.
pub fn minplus_exact(a: &MinPlusMat, b: &MinPlusMat) -> Result<WitnessedProduct, MinPlusError> {
    if a.cols != b.rows {
        return Err(MinPlusError::DimensionMismatch);
    }
    let mut vals = MinPlusMat::filled(a.rows, b.cols, INF);
    let mut wit = vec![NO_WITNESS; a.rows * b.cols];
    for i in 0..a.rows {
        for k in 0..a.cols {
            let aik = a.at(i, k);
            if aik == INF {
                continue;
            }
            for j in 0..b.cols {
                let bkj = b.at(k, j);
                if bkj == INF {
                    continue;
                }
                let cand = aik + bkj;
                if cand < vals.at(i, j) {
                    vals.set(i, j, cand);
                    wit[i * b.cols + j] = k;
                }
            }
        }
    }
    Ok(WitnessedProduct { vals, wit })
}

/// Approximate min-plus product: entries must be drawn from `{0, INF}` or
/// `[1, N]`; every output cell `c` satisfies `true <= c <= (1+eps) * true`,
/// and the recorded witness `k` satisfies `a[i][k] + b[k][j] <= c`.
pub fn minplus_approx(
    a: &MinPlusMat,
    b: &MinPlusMat,
    eps: f64,
) -> Result<WitnessedProduct, MinPlusError> {
    if a.cols != b.rows {
        return Err(MinPlusError::DimensionMismatch);
    }
    if !(eps > 0.0) {
        return Err(MinPlusError::BadEpsilon);
    }
    let m = (4.0 / eps).ceil() as u64;
    let bound = a.max_finite().unwrap_or(0) + b.max_finite().unwrap_or(0);
    let mut vals = MinPlusMat::filled(a.rows, b.cols, INF);
    let mut wit = vec![NO_WITNESS; a.rows * b.cols];
    let mut scale: u64 = 1;
    loop {
        let sa = scale_matrix(a, m, scale);
        let sb = scale_matrix(b, m, scale);
        let prod = minplus_exact(&sa, &sb)?;
        for i in 0..a.rows {
            for j in 0..b.cols {
                let c = prod.vals.at(i, j);
                if c == INF {
                    continue;
                }
                // floor(c * scale / m), exact in integers.
                let cand = (c as u128 * scale as u128 / m as u128) as u64;
                if cand < vals.at(i, j) {
                    vals.set(i, j, cand);
                    wit[i * b.cols + j] = prod.witness(i, j);
                }
            }
        }
        if scale >= bound.max(1) {
            break;
        }
        scale *= 2;
    }
    Ok(WitnessedProduct { vals, wit })
}

fn scale_matrix(a: &MinPlusMat, m: u64, r: u64) -> MinPlusMat {
    MinPlusMat::from_fn(a.rows, a.cols, |i, j| {
        let v = a.at(i, j);
        if v == INF || v > r {
            INF
        } else {
            // ceil(v * m / r)
            ((v as u128 * m as u128).div_ceil(r as u128)) as u64
        }
    })
}

/// Dense boolean matrix with row bitsets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoolMat {
    pub rows: usize,
    pub cols: usize,
    words: Vec<u64>,
    stride: usize,
}

impl BoolMat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        let stride = cols.div_ceil(64);
        BoolMat { rows, cols, words: vec![0; rows * stride], stride }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, true);
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> bool) -> Self {
        let mut m = Self::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                if f(i, j) {
                    m.set(i, j, true);
                }
            }
        }
        m
    }

    #[inline]
    pub fn at(&self, i: usize, j: usize) -> bool {
        self.words[i * self.stride + j / 64] >> (j % 64) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: bool) {
        let w = &mut self.words[i * self.stride + j / 64];
        if v {
            *w |= 1 << (j % 64);
        } else {
            *w &= !(1 << (j % 64));
        }
    }

    pub fn or(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        BoolMat {
            rows: self.rows,
            cols: self.cols,
            words: self.words.iter().zip(&other.words).map(|(&a, &b)| a | b).collect(),
            stride: self.stride,
        }
    }

    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Self {
        Self::from_fn(rows.len(), cols.len(), |i, j| self.at(rows[i], cols[j]))
    }

    /// Boolean product via bitset rows.
    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows);
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                if self.at(i, k) {
                    let (dst, src) = (i * out.stride, k * other.stride);
                    for w in 0..other.stride {
                        out.words[dst + w] |= other.words[src + w];
                    }
                }
            }
        }
        out
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }
}

/// Boolean product with the smallest inner witness per set cell.
pub fn bool_mul_witnessed(a: &BoolMat, b: &BoolMat) -> (BoolMat, Vec<usize>) {
    assert_eq!(a.cols, b.rows);
    let mut out = BoolMat::zeros(a.rows, b.cols);
    let mut wit = vec![NO_WITNESS; a.rows * b.cols];
    for i in 0..a.rows {
        for j in 0..b.cols {
            for k in 0..a.cols {
                if a.at(i, k) && b.at(k, j) {
                    out.set(i, j, true);
                    wit[i * b.cols + j] = k;
                    break;
                }
            }
        }
    }
    (out, wit)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::SplitMix64;

    fn random_mat(rng: &mut SplitMix64, rows: usize, cols: usize, max: u64) -> MinPlusMat {
        MinPlusMat::from_fn(rows, cols, |_, _| {
            if rng.next_below(4) == 0 {
                INF
            } else {
                1 + rng.next_below(max)
            }
        })
    }

    #[test]
    fn identity_product() {
        let mut rng = SplitMix64::new(1);
        let b = random_mat(&mut rng, 5, 5, 50);
        let id = MinPlusMat::identity(5);
        let p = minplus_exact(&id, &b).unwrap();
        assert_eq!(p.vals, b);
    }

    #[test]
    fn approx_sandwich_and_witnesses() {
        let mut rng = SplitMix64::new(2);
        for trial in 0..30 {
            let a = random_mat(&mut rng, 10, 10, 100);
            let b = random_mat(&mut rng, 10, 10, 100);
            let eps = 0.25;
            let exact = minplus_exact(&a, &b).unwrap();
            let approx = minplus_approx(&a, &b, eps).unwrap();
            for i in 0..10 {
                for j in 0..10 {
                    let t = exact.vals.at(i, j);
                    let g = approx.vals.at(i, j);
                    if t == INF {
                        assert_eq!(g, INF);
                        continue;
                    }
                    assert!(g >= t, "trial {trial} ({i},{j}): {g} < {t}");
                    assert!(
                        g as f64 <= (1.0 + eps) * t as f64,
                        "trial {trial} ({i},{j}): {g} > (1+eps)*{t}"
                    );
                    let k = approx.witness(i, j);
                    assert_ne!(k, NO_WITNESS);
                    assert!(a.at(i, k) != INF && b.at(k, j) != INF);
                    assert!(a.at(i, k) + b.at(k, j) <= g, "witness path within the estimate");
                }
            }
        }
    }

    #[test]
    fn approx_is_exact_at_high_resolution() {
        // Flooring costs strictly less than one once ceil(4/eps) >= 8*N,
        // so integer outputs coincide with the exact product.
        let mut rng = SplitMix64::new(3);
        let n_max = 40u64;
        let a = random_mat(&mut rng, 8, 8, n_max);
        let b = random_mat(&mut rng, 8, 8, n_max);
        let eps = 4.0 / (8.0 * n_max as f64);
        let exact = minplus_exact(&a, &b).unwrap();
        let approx = minplus_approx(&a, &b, eps).unwrap();
        assert_eq!(exact.vals, approx.vals);
    }

    #[test]
    fn zero_entries_stay_diagonal() {
        // With zero diagonals and positive off-diagonals, products never
        // produce a zero off the diagonal (path expansion relies on this).
        let mut rng = SplitMix64::new(4);
        let mut a = random_mat(&mut rng, 6, 6, 30);
        for i in 0..6 {
            a.set(i, i, 0);
        }
        let p = minplus_approx(&a, &a, 0.3).unwrap();
        for i in 0..6 {
            for j in 0..6 {
                if i != j {
                    assert_ne!(p.vals.at(i, j), 0);
                }
            }
        }
    }

    #[test]
    fn bad_inputs_rejected() {
        let a = MinPlusMat::filled(2, 3, 1);
        let b = MinPlusMat::filled(2, 3, 1);
        assert_eq!(minplus_exact(&a, &b).unwrap_err(), MinPlusError::DimensionMismatch);
        let c = MinPlusMat::filled(3, 2, 1);
        assert_eq!(minplus_approx(&a, &c, 0.0).unwrap_err(), MinPlusError::BadEpsilon);
    }

    #[test]
    fn bool_product_matches_naive_and_witnesses_hold() {
        let mut rng = SplitMix64::new(5);
        for _ in 0..20 {
            let a = BoolMat::from_fn(7, 5, |_, _| rng.next_below(3) == 0);
            let b = BoolMat::from_fn(5, 6, |_, _| rng.next_below(3) == 0);
            let fast = a.mul(&b);
            let (slow, wit) = bool_mul_witnessed(&a, &b);
            assert_eq!(fast, slow);
            for i in 0..7 {
                for j in 0..6 {
                    if slow.at(i, j) {
                        let k = wit[i * 6 + j];
                        assert!(a.at(i, k) && b.at(k, j));
                        // Smallest witness.
                        for earlier in 0..k {
                            assert!(!(a.at(i, earlier) && b.at(earlier, j)));
                        }
                    } else {
                        assert_eq!(wit[i * 6 + j], NO_WITNESS);
                    }
                }
            }
        }
    }
}
