//! Dense matrices of truncated polynomials: classical and Strassen products,
//! Gauss-Jordan inversion with unit-pivot search.

use super::poly::{PolyRing, TruncPoly};
use super::{AlgebraError, Ring};

/// Dimension at or above which square products switch to the Strassen kernel.
pub const DEFAULT_STRASSEN_THRESHOLD: usize = 64;

#[derive(Clone)]
pub struct PolyMatrix<R: Ring> {
    pub rows: usize,
    pub cols: usize,
    data: Vec<TruncPoly<R>>,
}

impl<R: Ring> PartialEq for PolyMatrix<R> {
    fn eq(&self, other: &Self) -> bool {
        self.rows == other.rows && self.cols == other.cols && self.data == other.data
    }
}

impl<R: Ring> Eq for PolyMatrix<R> {}

impl<R: Ring> std::fmt::Debug for PolyMatrix<R> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "PolyMatrix {}x{}", self.rows, self.cols)?;
        for i in 0..self.rows {
            for j in 0..self.cols {
                write!(f, " {:?}", self.at(i, j))?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

impl<R: Ring> PolyMatrix<R> {
    pub fn zero(pr: &PolyRing<R>, rows: usize, cols: usize) -> Self {
        PolyMatrix { rows, cols, data: vec![pr.zero(); rows * cols] }
    }

    pub fn identity(pr: &PolyRing<R>, n: usize) -> Self {
        let mut m = Self::zero(pr, n, n);
        for i in 0..n {
            *m.at_mut(i, i) = pr.one();
        }
        m
    }

    #[inline]
    pub fn at(&self, i: usize, j: usize) -> &TruncPoly<R> {
        &self.data[i * self.cols + j]
    }

    #[inline]
    pub fn at_mut(&mut self, i: usize, j: usize) -> &mut TruncPoly<R> {
        let c = self.cols;
        &mut self.data[i * c + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: TruncPoly<R>) {
        let c = self.cols;
        self.data[i * c + j] = v;
    }

    pub fn transpose(&self, pr: &PolyRing<R>) -> Self {
        let mut out = Self::zero(pr, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(j, i, self.at(i, j).clone());
            }
        }
        out
    }

    pub fn add(&self, pr: &PolyRing<R>, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data =
            self.data.iter().zip(&other.data).map(|(a, b)| pr.add(a, b)).collect();
        PolyMatrix { rows: self.rows, cols: self.cols, data }
    }

    pub fn sub(&self, pr: &PolyRing<R>, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data =
            self.data.iter().zip(&other.data).map(|(a, b)| pr.sub(a, b)).collect();
        PolyMatrix { rows: self.rows, cols: self.cols, data }
    }

    pub fn is_identity(&self, pr: &PolyRing<R>) -> bool {
        if self.rows != self.cols {
            return false;
        }
        for i in 0..self.rows {
            for j in 0..self.cols {
                let want = if i == j { pr.one() } else { pr.zero() };
                if *self.at(i, j) != want {
                    return false;
                }
            }
        }
        true
    }

    fn block(&self, pr: &PolyRing<R>, r0: usize, c0: usize, rows: usize, cols: usize) -> Self {
        let mut out = Self::zero(pr, rows, cols);
        for i in 0..rows.min(self.rows.saturating_sub(r0)) {
            for j in 0..cols.min(self.cols.saturating_sub(c0)) {
                out.set(i, j, self.at(r0 + i, c0 + j).clone());
            }
        }
        out
    }

    fn paste(&mut self, src: &Self, r0: usize, c0: usize) {
        for i in 0..src.rows {
            if r0 + i >= self.rows {
                break;
            }
            for j in 0..src.cols {
                if c0 + j >= self.cols {
                    break;
                }
                self.set(r0 + i, c0 + j, src.at(i, j).clone());
            }
        }
    }
}

/// Product with the default Strassen threshold.
pub fn mat_mul<R: Ring>(
    pr: &PolyRing<R>,
    a: &PolyMatrix<R>,
    b: &PolyMatrix<R>,
) -> Result<PolyMatrix<R>, AlgebraError> {
    mat_mul_with_threshold(pr, a, b, DEFAULT_STRASSEN_THRESHOLD)
}

/// Product with an explicit Strassen threshold; `usize::MAX` forces the
/// classical kernel. Both kernels agree exactly (arithmetic is modular).
pub fn mat_mul_with_threshold<R: Ring>(
    pr: &PolyRing<R>,
    a: &PolyMatrix<R>,
    b: &PolyMatrix<R>,
    threshold: usize,
) -> Result<PolyMatrix<R>, AlgebraError> {
    if a.cols != b.rows {
        return Err(AlgebraError::DimensionMismatch {
            left: (a.rows, a.cols),
            right: (b.rows, b.cols),
        });
    }
    Ok(mul_dispatch(pr, a, b, threshold.max(2)))
}

fn mul_classical<R: Ring>(pr: &PolyRing<R>, a: &PolyMatrix<R>, b: &PolyMatrix<R>) -> PolyMatrix<R> {
    let mut out = PolyMatrix::zero(pr, a.rows, b.cols);
    for i in 0..a.rows {
        for k in 0..a.cols {
            let aik = a.at(i, k);
            if pr.is_zero(aik) {
                continue;
            }
            for j in 0..b.cols {
                let bkj = b.at(k, j);
                if pr.is_zero(bkj) {
                    continue;
                }
                pr.mul_add_into(out.at_mut(i, j), aik, bkj);
            }
        }
    }
    out
}

fn mul_dispatch<R: Ring>(
    pr: &PolyRing<R>,
    a: &PolyMatrix<R>,
    b: &PolyMatrix<R>,
    threshold: usize,
) -> PolyMatrix<R> {
    let (m, k, n) = (a.rows, a.cols, b.cols);
    if m.min(k).min(n) < threshold {
        return mul_classical(pr, a, b);
    }
    if m == k && k == n {
        return mul_strassen_square(pr, a, b, threshold);
    }
    // Rectangles are cut into square-sized pieces along the longest dimension.
    if m >= k.max(n) {
        let half = m / 2;
        let top = mul_dispatch(pr, &a.block(pr, 0, 0, half, k), b, threshold);
        let bot = mul_dispatch(pr, &a.block(pr, half, 0, m - half, k), b, threshold);
        let mut out = PolyMatrix::zero(pr, m, n);
        out.paste(&top, 0, 0);
        out.paste(&bot, half, 0);
        out
    } else if n >= k {
        let half = n / 2;
        let left = mul_dispatch(pr, a, &b.block(pr, 0, 0, k, half), threshold);
        let right = mul_dispatch(pr, a, &b.block(pr, 0, half, k, n - half), threshold);
        let mut out = PolyMatrix::zero(pr, m, n);
        out.paste(&left, 0, 0);
        out.paste(&right, 0, half);
        out
    } else {
        let half = k / 2;
        let p1 = mul_dispatch(pr, &a.block(pr, 0, 0, m, half), &b.block(pr, 0, 0, half, n), threshold);
        let p2 = mul_dispatch(
            pr,
            &a.block(pr, 0, half, m, k - half),
            &b.block(pr, half, 0, k - half, n),
            threshold,
        );
        p1.add(pr, &p2)
    }
}

fn mul_strassen_square<R: Ring>(
    pr: &PolyRing<R>,
    a: &PolyMatrix<R>,
    b: &PolyMatrix<R>,
    threshold: usize,
) -> PolyMatrix<R> {
    let n = a.rows;
    if n < threshold || n < 2 {
        return mul_classical(pr, a, b);
    }
    // Pad odd dimensions with a zero row/column for this level.
    let half = (n + 1) / 2;
    let a11 = a.block(pr, 0, 0, half, half);
    let a12 = a.block(pr, 0, half, half, half);
    let a21 = a.block(pr, half, 0, half, half);
    let a22 = a.block(pr, half, half, half, half);
    let b11 = b.block(pr, 0, 0, half, half);
    let b12 = b.block(pr, 0, half, half, half);
    let b21 = b.block(pr, half, 0, half, half);
    let b22 = b.block(pr, half, half, half, half);

    let m1 = mul_strassen_square(pr, &a11.add(pr, &a22), &b11.add(pr, &b22), threshold);
    let m2 = mul_strassen_square(pr, &a21.add(pr, &a22), &b11, threshold);
    let m3 = mul_strassen_square(pr, &a11, &b12.sub(pr, &b22), threshold);
    let m4 = mul_strassen_square(pr, &a22, &b21.sub(pr, &b11), threshold);
    let m5 = mul_strassen_square(pr, &a11.add(pr, &a12), &b22, threshold);
    let m6 = mul_strassen_square(pr, &a21.sub(pr, &a11), &b11.add(pr, &b12), threshold);
    let m7 = mul_strassen_square(pr, &a12.sub(pr, &a22), &b21.add(pr, &b22), threshold);

    let c11 = m1.add(pr, &m4).sub(pr, &m5).add(pr, &m7);
    let c12 = m3.add(pr, &m5);
    let c21 = m2.add(pr, &m4);
    let c22 = m1.sub(pr, &m2).add(pr, &m3).add(pr, &m6);

    let mut out = PolyMatrix::zero(pr, n, n);
    out.paste(&c11, 0, 0);
    out.paste(&c12, 0, half);
    out.paste(&c21, half, 0);
    out.paste(&c22, half, half);
    out
}

/// Gauss-Jordan inverse. Pivots must be units of the truncated-polynomial
/// ring, i.e. have a non-zero constant term; for matrices of the form
/// `I - X*A` the diagonal always qualifies.
pub fn mat_inverse<R: Ring>(
    pr: &PolyRing<R>,
    m: &PolyMatrix<R>,
) -> Result<PolyMatrix<R>, AlgebraError> {
    if m.rows != m.cols {
        return Err(AlgebraError::DimensionMismatch { left: (m.rows, m.cols), right: (m.rows, m.cols) });
    }
    let n = m.rows;
    let mut work = m.clone();
    let mut inv = PolyMatrix::identity(pr, n);
    for col in 0..n {
        let pivot = (col..n)
            .find(|&r| !pr.ring.is_zero(&work.at(r, col).coeffs[0]))
            .ok_or(AlgebraError::Singular)?;
        if pivot != col {
            for j in 0..n {
                let a = work.at(pivot, j).clone();
                let b = work.at(col, j).clone();
                work.set(pivot, j, b);
                work.set(col, j, a);
                let a = inv.at(pivot, j).clone();
                let b = inv.at(col, j).clone();
                inv.set(pivot, j, b);
                inv.set(col, j, a);
            }
        }
        let piv_inv = pr.inverse_unit(work.at(col, col))?;
        for j in 0..n {
            let w = pr.mul(work.at(col, j), &piv_inv);
            work.set(col, j, w);
            let v = pr.mul(inv.at(col, j), &piv_inv);
            inv.set(col, j, v);
        }
        for r in 0..n {
            if r == col || pr.is_zero(work.at(r, col)) {
                continue;
            }
            let factor = work.at(r, col).clone();
            for j in 0..n {
                let t = pr.mul(&factor, work.at(col, j));
                let w = pr.sub(work.at(r, j), &t);
                work.set(r, j, w);
                let t = pr.mul(&factor, inv.at(col, j));
                let v = pr.sub(inv.at(r, j), &t);
                inv.set(r, j, v);
            }
        }
    }
    Ok(inv)
}

/// `I - X*A` for a 0/1 adjacency matrix, the carrier of walk counts.
pub fn counting_matrix<R: Ring>(pr: &PolyRing<R>, adj: &[Vec<bool>]) -> PolyMatrix<R> {
    let n = adj.len();
    let mut m = PolyMatrix::identity(pr, n);
    let minus_x = pr.neg(&pr.x());
    for (u, row) in adj.iter().enumerate() {
        for (v, &e) in row.iter().enumerate() {
            if e {
                let cur = pr.add(m.at(u, v), &minus_x);
                m.set(u, v, cur);
            }
        }
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::WordRing;
    use crate::rng::SplitMix64;

    fn pr(p: u64, h: usize) -> PolyRing<WordRing> {
        PolyRing::new(WordRing::new(p), h)
    }

    fn random_matrix(pr: &PolyRing<WordRing>, rng: &mut SplitMix64, rows: usize, cols: usize) -> PolyMatrix<WordRing> {
        let p = pr.ring.modulus();
        let mut m = PolyMatrix::zero(pr, rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                let mut poly = pr.zero();
                for k in 0..pr.len() {
                    poly.coeffs[k] = rng.next_below(p);
                }
                m.set(i, j, poly);
            }
        }
        m
    }

    /// Independent product reference: plain triple loop with scalar convolution.
    fn triple_loop_oracle(
        pr: &PolyRing<WordRing>,
        a: &PolyMatrix<WordRing>,
        b: &PolyMatrix<WordRing>,
    ) -> PolyMatrix<WordRing> {
        let mut out = PolyMatrix::zero(pr, a.rows, b.cols);
        for i in 0..a.rows {
            for j in 0..b.cols {
                let mut acc = pr.zero();
                for k in 0..a.cols {
                    for (d1, c1) in a.at(i, k).coeffs.iter().enumerate() {
                        for (d2, c2) in b.at(k, j).coeffs.iter().enumerate() {
                            if d1 + d2 <= pr.h {
                                let t = pr.ring.mul(c1, c2);
                                acc.coeffs[d1 + d2] = pr.ring.add(&acc.coeffs[d1 + d2], &t);
                            }
                        }
                    }
                }
                out.set(i, j, acc);
            }
        }
        out
    }

    #[test]
    fn identity_times_anything() {
        let pr = pr(101, 2);
        let mut rng = SplitMix64::new(1);
        let b = random_matrix(&pr, &mut rng, 5, 3);
        let id = PolyMatrix::identity(&pr, 5);
        assert_eq!(mat_mul(&pr, &id, &b).unwrap(), b);
    }

    #[test]
    fn random_product_matches_triple_loop() {
        let pr = pr(101, 2);
        let mut rng = SplitMix64::new(2);
        let a = random_matrix(&pr, &mut rng, 8, 8);
        let b = random_matrix(&pr, &mut rng, 8, 8);
        let got = mat_mul(&pr, &a, &b).unwrap();
        assert_eq!(got, triple_loop_oracle(&pr, &a, &b));
    }

    #[test]
    fn strassen_matches_classical_all_sizes() {
        let pr = pr(97, 1);
        let mut rng = SplitMix64::new(3);
        for n in 1..=64 {
            let a = random_matrix(&pr, &mut rng, n, n);
            let b = random_matrix(&pr, &mut rng, n, n);
            let classical = mat_mul_with_threshold(&pr, &a, &b, usize::MAX).unwrap();
            let strassen = mat_mul_with_threshold(&pr, &a, &b, 2).unwrap();
            assert_eq!(classical, strassen, "kernel mismatch at n={n}");
        }
    }

    #[test]
    fn strassen_matches_classical_rectangular() {
        let pr = pr(97, 2);
        let mut rng = SplitMix64::new(4);
        for (m, k, n) in [(3, 9, 5), (16, 4, 16), (7, 7, 13), (12, 20, 6)] {
            let a = random_matrix(&pr, &mut rng, m, k);
            let b = random_matrix(&pr, &mut rng, k, n);
            let classical = mat_mul_with_threshold(&pr, &a, &b, usize::MAX).unwrap();
            let fast = mat_mul_with_threshold(&pr, &a, &b, 2).unwrap();
            assert_eq!(classical, fast);
        }
    }

    #[test]
    fn mul_is_associative_and_distributive() {
        let pr = pr(101, 2);
        let mut rng = SplitMix64::new(5);
        for _ in 0..5 {
            let a = random_matrix(&pr, &mut rng, 4, 4);
            let b = random_matrix(&pr, &mut rng, 4, 4);
            let c = random_matrix(&pr, &mut rng, 4, 4);
            let ab_c = mat_mul(&pr, &mat_mul(&pr, &a, &b).unwrap(), &c).unwrap();
            let a_bc = mat_mul(&pr, &a, &mat_mul(&pr, &b, &c).unwrap()).unwrap();
            assert_eq!(ab_c, a_bc);
            let a_bpc = mat_mul(&pr, &a, &b.add(&pr, &c)).unwrap();
            let ab_pac = mat_mul(&pr, &a, &b).unwrap().add(&pr, &mat_mul(&pr, &a, &c).unwrap());
            assert_eq!(a_bpc, ab_pac);
        }
    }

    #[test]
    fn dimension_mismatch_detected() {
        let pr = pr(7, 1);
        let a = PolyMatrix::zero(&pr, 2, 3);
        let b = PolyMatrix::zero(&pr, 2, 3);
        assert!(matches!(mat_mul(&pr, &a, &b), Err(AlgebraError::DimensionMismatch { .. })));
    }

    #[test]
    fn inverse_of_identity_and_diagonal() {
        let pr = pr(11, 1);
        let id = PolyMatrix::identity(&pr, 4);
        assert_eq!(mat_inverse(&pr, &id).unwrap(), id);

        // diag(1-X, 1-X) inverts to diag(1+X, 1+X) at h=1.
        let one_minus_x = pr.sub(&pr.one(), &pr.x());
        let mut d = PolyMatrix::zero(&pr, 2, 2);
        d.set(0, 0, one_minus_x.clone());
        d.set(1, 1, one_minus_x);
        let inv = mat_inverse(&pr, &d).unwrap();
        let one_plus_x = pr.add(&pr.one(), &pr.x());
        assert_eq!(*inv.at(0, 0), one_plus_x);
        assert_eq!(*inv.at(1, 1), one_plus_x);
        assert!(pr.is_zero(inv.at(0, 1)));
    }

    #[test]
    fn three_cycle_counting_inverse() {
        // Directed 3-cycle, h=3: closed walks at 0 have lengths 0 and 3.
        let pr = pr(1009, 3);
        let adj = vec![
            vec![false, true, false],
            vec![false, false, true],
            vec![true, false, false],
        ];
        let m = counting_matrix(&pr, &adj);
        let inv = mat_inverse(&pr, &m).unwrap();
        assert_eq!(inv.at(0, 0).coeffs, vec![1, 0, 0, 1]);
        assert!(mat_mul(&pr, &m, &inv).unwrap().is_identity(&pr));
    }

    #[test]
    fn inverse_times_original_is_identity_on_random_instances() {
        let pr = pr(101, 2);
        let mut rng = SplitMix64::new(6);
        for trial in 0..20 {
            // Random adjacency; I - X*A is always invertible.
            let n = 6;
            let mut adj = vec![vec![false; n]; n];
            for u in 0..n {
                for v in 0..n {
                    if u != v && rng.next_below(3) == 0 {
                        adj[u][v] = true;
                    }
                }
            }
            let m = counting_matrix(&pr, &adj);
            let inv = mat_inverse(&pr, &m).unwrap();
            assert!(mat_mul(&pr, &m, &inv).unwrap().is_identity(&pr), "trial {trial}");
            assert!(mat_mul(&pr, &inv, &m).unwrap().is_identity(&pr), "trial {trial}");
        }
    }

    #[test]
    fn singular_matrix_rejected() {
        let pr = pr(7, 1);
        let m = PolyMatrix::zero(&pr, 3, 3);
        assert_eq!(mat_inverse(&pr, &m), Err(AlgebraError::Singular));
    }
}
