//! Dynamic matrix inverse with a maintained cell-set.
//!
//! The inverse is represented as `M^-1 = N - L*R^T` where `L` and `R` gain one
//! column per entry update; once `cap` columns accumulate, the outer product
//! is folded into `N` and both factors are cleared. Rank-r corrections go
//! directly into `N` and leave the factors alone. A dynamic set `Y` of cells
//! is kept explicitly up to date under every update.

use std::collections::BTreeMap;

use crate::algebra::{mat_inverse, mat_mul, AlgebraError, PolyMatrix, PolyRing, Ring, TruncPoly};

pub struct DynInverse<R: Ring> {
    pr: PolyRing<R>,
    n: usize,
    cap: usize,
    nmat: PolyMatrix<R>,
    lcols: Vec<Vec<TruncPoly<R>>>,
    rcols: Vec<Vec<TruncPoly<R>>>,
    y: BTreeMap<(usize, usize), TruncPoly<R>>,
    updates_since_reset: u64,
    resets: u64,
}

impl<R: Ring> DynInverse<R> {
    /// Explicit inversion seeds `N`; the factors start empty.
    pub fn new(pr: PolyRing<R>, m: &PolyMatrix<R>, cap: usize) -> Result<Self, AlgebraError> {
        if cap == 0 {
            return Err(AlgebraError::InvalidParameter("cap must be positive".into()));
        }
        let nmat = mat_inverse(&pr, m)?;
        Ok(DynInverse {
            n: m.rows,
            pr,
            cap,
            nmat,
            lcols: Vec::new(),
            rcols: Vec::new(),
            y: BTreeMap::new(),
            updates_since_reset: 0,
            resets: 0,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn poly_ring(&self) -> &PolyRing<R> {
        &self.pr
    }

    pub fn factor_cols(&self) -> usize {
        self.lcols.len()
    }

    pub fn updates_since_reset(&self) -> u64 {
        self.updates_since_reset
    }

    pub fn resets(&self) -> u64 {
        self.resets
    }

    /// Current inverse entry computed from the representation.
    pub fn entry(&self, s: usize, t: usize) -> TruncPoly<R> {
        let mut v = self.nmat.at(s, t).clone();
        for (l, r) in self.lcols.iter().zip(&self.rcols) {
            let prod = self.pr.mul(&l[s], &r[t]);
            v = self.pr.sub(&v, &prod);
        }
        v
    }

    fn column(&self, j: usize) -> Vec<TruncPoly<R>> {
        (0..self.n).map(|i| self.entry(i, j)).collect()
    }

    fn row(&self, i: usize) -> Vec<TruncPoly<R>> {
        (0..self.n).map(|j| self.entry(i, j)).collect()
    }

    /// Applies `M <- M + delta * e_i e_j^T` by appending one column to each
    /// factor; maintained cells are refreshed from the rank-1 correction.
    pub fn entry_update(
        &mut self,
        i: usize,
        j: usize,
        delta: &TruncPoly<R>,
    ) -> Result<(), AlgebraError> {
        if self.pr.is_zero(delta) {
            return Ok(());
        }
        // M^-1 u = delta * (column i of M^-1); v^T M^-1 = row j of M^-1.
        let col_i = self.column(i);
        let row_j = self.row(j);
        let denom = self.pr.add(&self.pr.one(), &self.pr.mul(delta, &row_j[i]));
        let denom_inv = self.pr.inverse_unit(&denom)?;
        let scale = self.pr.mul(delta, &denom_inv);
        let u_new: Vec<TruncPoly<R>> = col_i.iter().map(|c| self.pr.mul(c, &scale)).collect();

        for ((s, t), val) in self.y.iter_mut() {
            let corr = self.pr.mul(&u_new[*s], &row_j[*t]);
            *val = self.pr.sub(val, &corr);
        }

        self.lcols.push(u_new);
        self.rcols.push(row_j);
        self.updates_since_reset += 1;
        if self.lcols.len() >= self.cap {
            self.fold_factors();
        }
        Ok(())
    }

    fn fold_factors(&mut self) {
        for (l, r) in self.lcols.iter().zip(&self.rcols) {
            for s in 0..self.n {
                if self.pr.is_zero(&l[s]) {
                    continue;
                }
                for t in 0..self.n {
                    let prod = self.pr.mul(&l[s], &r[t]);
                    let v = self.pr.sub(self.nmat.at(s, t), &prod);
                    self.nmat.set(s, t, v);
                }
            }
        }
        self.lcols.clear();
        self.rcols.clear();
        self.updates_since_reset = 0;
        self.resets += 1;
    }

    /// Applies `M <- M + U*V^T` (columns given explicitly) by absorbing the
    /// Woodbury correction into `N`; the factors are untouched. Every
    /// maintained cell is then recomputed from the representation.
    pub fn batch_update(
        &mut self,
        ucols: &[Vec<TruncPoly<R>>],
        vcols: &[Vec<TruncPoly<R>>],
    ) -> Result<(), AlgebraError> {
        assert_eq!(ucols.len(), vcols.len());
        let r = ucols.len();
        if r == 0 {
            return Ok(());
        }
        let mut u = PolyMatrix::zero(&self.pr, self.n, r);
        let mut v = PolyMatrix::zero(&self.pr, self.n, r);
        for (k, (uc, vc)) in ucols.iter().zip(vcols).enumerate() {
            assert_eq!(uc.len(), self.n);
            assert_eq!(vc.len(), self.n);
            for i in 0..self.n {
                u.set(i, k, uc[i].clone());
                v.set(i, k, vc[i].clone());
            }
        }
        // minv_u = M^-1 U, v_minv = V^T M^-1, both via the representation.
        let minv_u = self.apply_inverse(&u)?;
        let v_t = v.transpose(&self.pr);
        let v_minv = self.apply_inverse_left(&v_t)?;
        // Capacitance I_r + V^T (M^-1 U).
        let vt_minv_u = mat_mul(&self.pr, &v_t, &minv_u)?;
        let capm = PolyMatrix::identity(&self.pr, r).add(&self.pr, &vt_minv_u);
        let cap_inv = mat_inverse(&self.pr, &capm)?;
        let mid = mat_mul(&self.pr, &minv_u, &cap_inv)?;
        let corr = mat_mul(&self.pr, &mid, &v_minv)?;
        self.nmat = self.nmat.sub(&self.pr, &corr);
        let refreshed: Vec<((usize, usize), TruncPoly<R>)> =
            self.y.keys().map(|&(s, t)| ((s, t), self.entry(s, t))).collect();
        for (k, val) in refreshed {
            self.y.insert(k, val);
        }
        Ok(())
    }

    fn apply_inverse(&self, m: &PolyMatrix<R>) -> Result<PolyMatrix<R>, AlgebraError> {
        // (N - L R^T) m = N m - L (R^T m)
        let nm = mat_mul(&self.pr, &self.nmat, m)?;
        if self.lcols.is_empty() {
            return Ok(nm);
        }
        let (l, r) = self.factors_as_matrices();
        let rtm = mat_mul(&self.pr, &r.transpose(&self.pr), m)?;
        let lrtm = mat_mul(&self.pr, &l, &rtm)?;
        Ok(nm.sub(&self.pr, &lrtm))
    }

    fn apply_inverse_left(&self, m: &PolyMatrix<R>) -> Result<PolyMatrix<R>, AlgebraError> {
        // m (N - L R^T) = m N - (m L) R^T
        let mn = mat_mul(&self.pr, m, &self.nmat)?;
        if self.lcols.is_empty() {
            return Ok(mn);
        }
        let (l, r) = self.factors_as_matrices();
        let ml = mat_mul(&self.pr, m, &l)?;
        let mlrt = mat_mul(&self.pr, &ml, &r.transpose(&self.pr))?;
        Ok(mn.sub(&self.pr, &mlrt))
    }

    fn factors_as_matrices(&self) -> (PolyMatrix<R>, PolyMatrix<R>) {
        let k = self.lcols.len();
        let mut l = PolyMatrix::zero(&self.pr, self.n, k);
        let mut r = PolyMatrix::zero(&self.pr, self.n, k);
        for (c, (lc, rc)) in self.lcols.iter().zip(&self.rcols).enumerate() {
            for i in 0..self.n {
                l.set(i, c, lc[i].clone());
                r.set(i, c, rc[i].clone());
            }
        }
        (l, r)
    }

    /// Inserts a cell into the maintained set, returning its current value.
    /// Re-inserting an existing cell is a no-op apart from the lookup.
    pub fn y_insert(&mut self, s: usize, t: usize) -> TruncPoly<R> {
        if let Some(v) = self.y.get(&(s, t)) {
            return v.clone();
        }
        let v = self.entry(s, t);
        self.y.insert((s, t), v.clone());
        v
    }

    pub fn y_remove(&mut self, s: usize, t: usize) {
        self.y.remove(&(s, t));
    }

    pub fn y_contains(&self, s: usize, t: usize) -> bool {
        self.y.contains_key(&(s, t))
    }

    pub fn y_get(&self, s: usize, t: usize) -> Option<&TruncPoly<R>> {
        self.y.get(&(s, t))
    }

    pub fn y_len(&self) -> usize {
        self.y.len()
    }

    pub fn y_clear(&mut self) {
        self.y.clear();
    }

    pub fn y_pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.y.keys().copied()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{counting_matrix, WordRing};
    use crate::rng::SplitMix64;

    fn pr(p: u64, h: usize) -> PolyRing<WordRing> {
        PolyRing::new(WordRing::new(p), h)
    }

    #[test]
    fn init_is_plain_inverse() {
        let pr = pr(1009, 3);
        let id = PolyMatrix::identity(&pr, 4);
        let d = DynInverse::new(pr.clone(), &id, 4).unwrap();
        assert_eq!(d.entry(0, 0), pr.one());
        assert_eq!(d.factor_cols(), 0);
        assert_eq!(d.updates_since_reset(), 0);
    }

    #[test]
    fn init_three_cycle_entry() {
        let pr = pr(1009, 3);
        let adj = vec![
            vec![false, true, false],
            vec![false, false, true],
            vec![true, false, false],
        ];
        let m = counting_matrix(&pr, &adj);
        let d = DynInverse::new(pr.clone(), &m, 2).unwrap();
        assert_eq!(d.entry(0, 0).coeffs, vec![1, 0, 0, 1]);
    }

    #[test]
    fn two_by_two_closed_form() {
        // Setting entry (0,1) of the identity to c makes the inverse (0,1) equal -c.
        let pr = pr(101, 2);
        let id = PolyMatrix::identity(&pr, 2);
        let mut d = DynInverse::new(pr.clone(), &id, 8).unwrap();
        d.y_insert(0, 1);
        let c = pr.constant(pr.ring.from_u64(5));
        d.entry_update(0, 1, &c).unwrap();
        assert_eq!(*d.y_get(0, 1).unwrap(), pr.neg(&c));
    }

    #[test]
    fn first_edge_insert_shows_up_at_degree_one() {
        let pr = pr(1009, 3);
        let id = PolyMatrix::identity(&pr, 3);
        let mut d = DynInverse::new(pr.clone(), &id, 8).unwrap();
        d.y_insert(0, 1);
        let minus_x = pr.neg(&pr.x());
        d.entry_update(0, 1, &minus_x).unwrap();
        // (I - X*E01)^-1 = I + X*E01.
        assert_eq!(d.y_get(0, 1).unwrap().coeffs, vec![0, 1, 0, 0]);
    }

    fn random_delta(pr: &PolyRing<WordRing>, rng: &mut SplitMix64) -> TruncPoly<WordRing> {
        // Multiples of X keep every update invertible.
        let mut d = pr.zero();
        for k in 1..pr.len() {
            d.coeffs[k] = rng.next_below(pr.ring.modulus());
        }
        d
    }

    #[test]
    fn cap_updates_fold_factors_and_match_direct_inverse() {
        let pr = pr(100_003, 2);
        let n = 5;
        let cap = 3;
        let id = PolyMatrix::identity(&pr, n);
        let mut d = DynInverse::new(pr.clone(), &id, cap).unwrap();
        let mut m = id.clone();
        let mut rng = SplitMix64::new(11);
        for step in 0..cap {
            let (i, j) = (rng.next_below(n as u64) as usize, rng.next_below(n as u64) as usize);
            let delta = random_delta(&pr, &mut rng);
            let cur = pr.add(m.at(i, j), &delta);
            m.set(i, j, cur);
            d.entry_update(i, j, &delta).unwrap();
            if step + 1 < cap {
                assert!(d.factor_cols() > 0);
            }
        }
        assert_eq!(d.factor_cols(), 0, "factors fold after cap updates");
        let direct = mat_inverse(&pr, &m).unwrap();
        for i in 0..n {
            for j in 0..n {
                assert_eq!(d.entry(i, j), *direct.at(i, j));
            }
        }
    }

    #[test]
    fn batch_update_empty_is_noop() {
        let pr = pr(101, 2);
        let id = PolyMatrix::identity(&pr, 3);
        let mut d = DynInverse::new(pr.clone(), &id, 4).unwrap();
        d.y_insert(1, 1);
        d.batch_update(&[], &[]).unwrap();
        assert_eq!(*d.y_get(1, 1).unwrap(), pr.one());
    }

    #[test]
    fn rank_one_batch_equals_entry_update() {
        let pr = pr(100_003, 2);
        let n = 4;
        let id = PolyMatrix::identity(&pr, n);
        let mut rng = SplitMix64::new(13);
        let delta = random_delta(&pr, &mut rng);
        let (i, j) = (1usize, 3usize);

        let mut via_entry = DynInverse::new(pr.clone(), &id, 10).unwrap();
        via_entry.entry_update(i, j, &delta).unwrap();

        let mut via_batch = DynInverse::new(pr.clone(), &id, 10).unwrap();
        let mut ucol = vec![pr.zero(); n];
        ucol[i] = delta.clone();
        let mut vcol = vec![pr.zero(); n];
        vcol[j] = pr.one();
        via_batch.batch_update(&[ucol], &[vcol]).unwrap();

        for s in 0..n {
            for t in 0..n {
                assert_eq!(via_entry.entry(s, t), via_batch.entry(s, t));
            }
        }
    }

    #[test]
    fn y_set_semantics() {
        let pr = pr(101, 1);
        let id = PolyMatrix::identity(&pr, 3);
        let mut d = DynInverse::new(pr.clone(), &id, 4).unwrap();
        let v = d.y_insert(2, 2);
        assert_eq!(v, pr.one());
        assert_eq!(d.y_len(), 1);
        let v2 = d.y_insert(2, 2);
        assert_eq!(v2, v);
        assert_eq!(d.y_len(), 1, "re-insert is idempotent");
        d.y_remove(2, 2);
        assert!(!d.y_contains(2, 2));
        d.y_remove(0, 1); // absent: no-op
        d.y_insert(2, 2);
        assert_eq!(*d.y_get(2, 2).unwrap(), pr.one());
    }

    /// Random interleaving of entry updates, batches, and Y churn; every
    /// maintained value must equal direct inversion of the tracked matrix.
    fn interleaving_trial(seed: u64, cap: usize, steps: usize) {
        let pr = pr(1_000_003, 2);
        let n = 16;
        let id = PolyMatrix::identity(&pr, n);
        let mut d = DynInverse::new(pr.clone(), &id, cap).unwrap();
        let mut m = id.clone();
        let mut rng = SplitMix64::new(seed);
        for _ in 0..steps {
            match rng.next_below(5) {
                0 | 1 => {
                    let (i, j) =
                        (rng.next_below(n as u64) as usize, rng.next_below(n as u64) as usize);
                    let delta = random_delta(&pr, &mut rng);
                    let cur = pr.add(m.at(i, j), &delta);
                    m.set(i, j, cur);
                    d.entry_update(i, j, &delta).unwrap();
                }
                2 => {
                    let r = 1 + rng.next_below(3) as usize;
                    let mut ucols = Vec::new();
                    let mut vcols = Vec::new();
                    for _ in 0..r {
                        let mut u = vec![pr.zero(); n];
                        let mut v = vec![pr.zero(); n];
                        for x in u.iter_mut() {
                            if rng.next_below(3) == 0 {
                                *x = random_delta(&pr, &mut rng);
                            }
                        }
                        for x in v.iter_mut() {
                            if rng.next_below(3) == 0 {
                                *x = pr.constant(pr.ring.from_u64(rng.next_u64()));
                            }
                        }
                        ucols.push(u);
                        vcols.push(v);
                    }
                    for (uc, vc) in ucols.iter().zip(&vcols) {
                        for i in 0..n {
                            for j in 0..n {
                                let t = pr.mul(&uc[i], &vc[j]);
                                let cur = pr.add(m.at(i, j), &t);
                                m.set(i, j, cur);
                            }
                        }
                    }
                    d.batch_update(&ucols, &vcols).unwrap();
                }
                3 => {
                    let (s, t) =
                        (rng.next_below(n as u64) as usize, rng.next_below(n as u64) as usize);
                    d.y_insert(s, t);
                }
                _ => {
                    let (s, t) =
                        (rng.next_below(n as u64) as usize, rng.next_below(n as u64) as usize);
                    d.y_remove(s, t);
                }
            }
            assert!(d.factor_cols() < cap.max(1));
            let direct = mat_inverse(&pr, &m).unwrap();
            for (s, t) in d.y_pairs().collect::<Vec<_>>() {
                assert_eq!(d.y_get(s, t).unwrap(), direct.at(s, t), "cell ({s},{t})");
            }
        }
    }

    #[test]
    fn maintained_cells_track_direct_inverse() {
        for seed in 0..4 {
            interleaving_trial(seed, 4, 12);
        }
    }

    #[test]
    fn reset_transparency_cap_one_vs_cap_n() {
        let pr = pr(1_000_003, 2);
        let n = 6;
        let id = PolyMatrix::identity(&pr, n);
        let mut d1 = DynInverse::new(pr.clone(), &id, 1).unwrap();
        let mut dn = DynInverse::new(pr.clone(), &id, n * n).unwrap();
        for s in 0..n {
            for t in 0..n {
                d1.y_insert(s, t);
                dn.y_insert(s, t);
            }
        }
        let mut rng = SplitMix64::new(23);
        for _ in 0..15 {
            let (i, j) = (rng.next_below(n as u64) as usize, rng.next_below(n as u64) as usize);
            let delta = random_delta(&pr, &mut rng);
            d1.entry_update(i, j, &delta).unwrap();
            dn.entry_update(i, j, &delta).unwrap();
            for s in 0..n {
                for t in 0..n {
                    assert_eq!(d1.y_get(s, t), dn.y_get(s, t));
                }
            }
        }
        assert_eq!(d1.factor_cols(), 0, "cap=1 folds on every update");
    }
}
