//! Truncated polynomials: dense coefficient vectors modulo `X^{h+1}`.

use super::{AlgebraError, Ring};

/// Polynomial in `R[X]/<X^{h+1}>`; `coeffs.len() == h + 1` always.
#[derive(Clone)]
pub struct TruncPoly<R: Ring> {
    pub coeffs: Vec<R::Elem>,
}

impl<R: Ring> PartialEq for TruncPoly<R> {
    fn eq(&self, other: &Self) -> bool {
        self.coeffs == other.coeffs
    }
}

impl<R: Ring> Eq for TruncPoly<R> {}

impl<R: Ring> std::fmt::Debug for TruncPoly<R> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_list().entries(&self.coeffs).finish()
    }
}

/// Context bundling the scalar ring with the shared degree bound `h`.
#[derive(Debug, Clone)]
pub struct PolyRing<R: Ring> {
    pub ring: R,
    pub h: usize,
}

impl<R: Ring> PolyRing<R> {
    pub fn new(ring: R, h: usize) -> Self {
        PolyRing { ring, h }
    }

    pub fn len(&self) -> usize {
        self.h + 1
    }

    pub fn zero(&self) -> TruncPoly<R> {
        TruncPoly { coeffs: vec![self.ring.zero(); self.len()] }
    }

    pub fn one(&self) -> TruncPoly<R> {
        self.monomial(0, self.ring.one())
    }

    pub fn constant(&self, c: R::Elem) -> TruncPoly<R> {
        self.monomial(0, c)
    }

    /// `c * X^k`; coefficients past the bound are discarded.
    pub fn monomial(&self, k: usize, c: R::Elem) -> TruncPoly<R> {
        let mut p = self.zero();
        if k < self.len() {
            p.coeffs[k] = c;
        }
        p
    }

    pub fn x(&self) -> TruncPoly<R> {
        self.monomial(1, self.ring.one())
    }

    pub fn is_zero(&self, a: &TruncPoly<R>) -> bool {
        a.coeffs.iter().all(|c| self.ring.is_zero(c))
    }

    /// Index of the first non-zero coefficient, if any.
    pub fn first_nonzero(&self, a: &TruncPoly<R>) -> Option<usize> {
        a.coeffs.iter().position(|c| !self.ring.is_zero(c))
    }

    /// Zero/non-zero pattern of the coefficients.
    pub fn support(&self, a: &TruncPoly<R>) -> Vec<bool> {
        a.coeffs.iter().map(|c| !self.ring.is_zero(c)).collect()
    }

    pub fn add(&self, a: &TruncPoly<R>, b: &TruncPoly<R>) -> TruncPoly<R> {
        let coeffs = a.coeffs.iter().zip(&b.coeffs).map(|(x, y)| self.ring.add(x, y)).collect();
        TruncPoly { coeffs }
    }

    pub fn sub(&self, a: &TruncPoly<R>, b: &TruncPoly<R>) -> TruncPoly<R> {
        let coeffs = a.coeffs.iter().zip(&b.coeffs).map(|(x, y)| self.ring.sub(x, y)).collect();
        TruncPoly { coeffs }
    }

    pub fn neg(&self, a: &TruncPoly<R>) -> TruncPoly<R> {
        TruncPoly { coeffs: a.coeffs.iter().map(|x| self.ring.neg(x)).collect() }
    }

    /// Truncated product: coefficients of `X^k` for `k > h` are discarded.
    pub fn mul(&self, a: &TruncPoly<R>, b: &TruncPoly<R>) -> TruncPoly<R> {
        let mut out = self.zero();
        for (i, ai) in a.coeffs.iter().enumerate() {
            if self.ring.is_zero(ai) {
                continue;
            }
            for (j, bj) in b.coeffs.iter().take(self.len() - i).enumerate() {
                if self.ring.is_zero(bj) {
                    continue;
                }
                let t = self.ring.mul(ai, bj);
                out.coeffs[i + j] = self.ring.add(&out.coeffs[i + j], &t);
            }
        }
        out
    }

    pub fn mul_add_into(&self, acc: &mut TruncPoly<R>, a: &TruncPoly<R>, b: &TruncPoly<R>) {
        for (i, ai) in a.coeffs.iter().enumerate() {
            if self.ring.is_zero(ai) {
                continue;
            }
            for (j, bj) in b.coeffs.iter().take(self.len() - i).enumerate() {
                if self.ring.is_zero(bj) {
                    continue;
                }
                let t = self.ring.mul(ai, bj);
                acc.coeffs[i + j] = self.ring.add(&acc.coeffs[i + j], &t);
            }
        }
    }

    /// Inverse of a polynomial with a unit constant term, solved coefficient
    /// by coefficient from `q * r = 1 mod X^{h+1}`.
    pub fn inverse_unit(&self, q: &TruncPoly<R>) -> Result<TruncPoly<R>, AlgebraError> {
        let c0_inv = self.ring.inv(&q.coeffs[0]).ok_or(AlgebraError::NonUnitConstantTerm)?;
        let mut r = self.zero();
        r.coeffs[0] = c0_inv.clone();
        for k in 1..self.len() {
            let mut acc = self.ring.zero();
            for j in 1..=k {
                if self.ring.is_zero(&q.coeffs[j]) {
                    continue;
                }
                let t = self.ring.mul(&q.coeffs[j], &r.coeffs[k - j]);
                acc = self.ring.add(&acc, &t);
            }
            r.coeffs[k] = self.ring.neg(&self.ring.mul(&c0_inv, &acc));
        }
        Ok(r)
    }

    pub fn scale(&self, a: &TruncPoly<R>, c: &R::Elem) -> TruncPoly<R> {
        TruncPoly { coeffs: a.coeffs.iter().map(|x| self.ring.mul(x, c)).collect() }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::WordRing;

    fn pr(p: u64, h: usize) -> PolyRing<WordRing> {
        PolyRing::new(WordRing::new(p), h)
    }

    #[test]
    fn geometric_series_inverse() {
        // (1 - X)^-1 = 1 + X + X^2 mod X^3.
        let pr = pr(101, 2);
        let q = pr.sub(&pr.one(), &pr.x());
        let r = pr.inverse_unit(&q).unwrap();
        assert_eq!(r.coeffs, vec![1, 1, 1]);
        assert_eq!(pr.mul(&q, &r), pr.one());
    }

    #[test]
    fn identity_inverse() {
        for h in [0usize, 1, 5] {
            let pr = pr(7, h);
            assert_eq!(pr.inverse_unit(&pr.one()).unwrap(), pr.one());
        }
    }

    #[test]
    fn inverse_of_one_plus_two_x_mod_seven() {
        // Frozen by multiplying back: (1+2X)(1+5X+4X^2) = 1 mod (7, X^3).
        let pr = pr(7, 2);
        let q = pr.add(&pr.one(), &pr.monomial(1, 2));
        let r = pr.inverse_unit(&q).unwrap();
        assert_eq!(r.coeffs, vec![1, 5, 4]);
        assert_eq!(pr.mul(&q, &r), pr.one());
    }

    #[test]
    fn non_unit_constant_rejected() {
        let pr = pr(7, 3);
        assert_eq!(pr.inverse_unit(&pr.x()), Err(AlgebraError::NonUnitConstantTerm));
    }

    #[test]
    fn random_unit_inverses_multiply_back_to_one() {
        let pr = pr(1_000_003, 4);
        let mut rng = crate::rng::SplitMix64::new(7);
        for _ in 0..1000 {
            let mut q = pr.zero();
            q.coeffs[0] = 1 + rng.next_below(1_000_002);
            for k in 1..=4 {
                q.coeffs[k] = rng.next_below(1_000_003);
            }
            let r = pr.inverse_unit(&q).unwrap();
            assert_eq!(pr.mul(&q, &r), pr.one());
        }
    }
}
