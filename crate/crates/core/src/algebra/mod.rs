//! Modular scalar rings, truncated polynomials and dense polynomial matrices.
//!
//! Path counts are carried as elements of `Z_p[X]/<X^{h+1}>`: the prime is
//! either large enough to hold every count exactly (word-size or
//! arbitrary-precision, depending on magnitude) or a random word-size prime
//! when only zero/non-zero tests are required.

mod matrix;
mod poly;

pub use matrix::{
    counting_matrix, mat_inverse, mat_mul, mat_mul_with_threshold, PolyMatrix,
    DEFAULT_STRASSEN_THRESHOLD,
};
pub use poly::{PolyRing, TruncPoly};

use std::fmt;
use std::sync::atomic::{AtomicU64, Ordering};

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::rng::SplitMix64;

/// Errors raised by the algebraic layer.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AlgebraError {
    DimensionMismatch { left: (usize, usize), right: (usize, usize) },
    /// A truncated polynomial with a non-invertible constant term cannot be inverted.
    NonUnitConstantTerm,
    /// No unit pivot exists in some column during elimination.
    Singular,
    InvalidParameter(String),
}

impl fmt::Display for AlgebraError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AlgebraError::DimensionMismatch { left, right } => {
                write!(f, "dimension mismatch: {}x{} vs {}x{}", left.0, left.1, right.0, right.1)
            }
            AlgebraError::NonUnitConstantTerm => write!(f, "constant term is not a unit"),
            AlgebraError::Singular => write!(f, "matrix is singular over the ring"),
            AlgebraError::InvalidParameter(msg) => write!(f, "invalid parameter: {msg}"),
        }
    }
}

impl std::error::Error for AlgebraError {}

static ADD_OPS: AtomicU64 = AtomicU64::new(0);
static MUL_OPS: AtomicU64 = AtomicU64::new(0);

/// Snapshot of the global ring-operation counters.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct RingOpCounts {
    pub adds: u64,
    pub muls: u64,
}

impl RingOpCounts {
    pub fn total(&self) -> u64 {
        self.adds + self.muls
    }
}

pub fn ring_op_counts() -> RingOpCounts {
    RingOpCounts { adds: ADD_OPS.load(Ordering::Relaxed), muls: MUL_OPS.load(Ordering::Relaxed) }
}

pub fn reset_ring_op_counts() {
    ADD_OPS.store(0, Ordering::Relaxed);
    MUL_OPS.store(0, Ordering::Relaxed);
}

#[inline]
fn count_add() {
    ADD_OPS.fetch_add(1, Ordering::Relaxed);
}

#[inline]
fn count_mul() {
    MUL_OPS.fetch_add(1, Ordering::Relaxed);
}

/// Arithmetic over `Z_p` for a prime modulus held by the ring value.
///
/// Elements are plain residues in `[0, p)`; every operation threads through
/// the ring so matrices and polynomials stay representation-agnostic.
pub trait Ring: Clone {
    type Elem: Clone + PartialEq + Eq + fmt::Debug;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn from_u64(&self, x: u64) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    /// Multiplicative inverse; `None` for zero.
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem>;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn modulus_decimal(&self) -> String;
}

/// `Z_p` with a word-size prime; products go through `u128`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WordRing {
    p: u64,
}

impl WordRing {
    pub fn new(p: u64) -> Self {
        assert!(is_prime_u64(p), "modulus {p} is not prime");
        assert!(p < (1u64 << 63), "word modulus must fit 63 bits");
        WordRing { p }
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }
}

impl Ring for WordRing {
    type Elem = u64;

    fn zero(&self) -> u64 {
        0
    }

    fn one(&self) -> u64 {
        1 % self.p
    }

    fn from_u64(&self, x: u64) -> u64 {
        x % self.p
    }

    fn add(&self, a: &u64, b: &u64) -> u64 {
        count_add();
        let s = a + b;
        if s >= self.p { s - self.p } else { s }
    }

    fn sub(&self, a: &u64, b: &u64) -> u64 {
        count_add();
        if a >= b { a - b } else { a + self.p - b }
    }

    fn neg(&self, a: &u64) -> u64 {
        count_add();
        if *a == 0 { 0 } else { self.p - a }
    }

    fn mul(&self, a: &u64, b: &u64) -> u64 {
        count_mul();
        ((*a as u128 * *b as u128) % self.p as u128) as u64
    }

    fn inv(&self, a: &u64) -> Option<u64> {
        if *a == 0 {
            return None;
        }
        // Fermat: a^(p-2); counted as a single multiply.
        count_mul();
        let mut base = *a as u128;
        let mut exp = self.p - 2;
        let m = self.p as u128;
        let mut acc: u128 = 1;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc * base % m;
            }
            base = base * base % m;
            exp >>= 1;
        }
        Some(acc as u64)
    }

    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }

    fn modulus_decimal(&self) -> String {
        self.p.to_string()
    }
}

/// `Z_p` with an arbitrary-precision prime.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BigRing {
    p: BigUint,
}

impl BigRing {
    pub fn new(p: BigUint) -> Self {
        assert!(is_prime(&p), "modulus is not prime");
        BigRing { p }
    }

    pub fn modulus(&self) -> &BigUint {
        &self.p
    }
}

impl Ring for BigRing {
    type Elem = BigUint;

    fn zero(&self) -> BigUint {
        BigUint::zero()
    }

    fn one(&self) -> BigUint {
        if self.p.is_one() { BigUint::zero() } else { BigUint::one() }
    }

    fn from_u64(&self, x: u64) -> BigUint {
        BigUint::from(x) % &self.p
    }

    fn add(&self, a: &BigUint, b: &BigUint) -> BigUint {
        count_add();
        let s = a + b;
        if s >= self.p { s - &self.p } else { s }
    }

    fn sub(&self, a: &BigUint, b: &BigUint) -> BigUint {
        count_add();
        if a >= b { a - b } else { a + &self.p - b }
    }

    fn neg(&self, a: &BigUint) -> BigUint {
        count_add();
        if a.is_zero() { BigUint::zero() } else { &self.p - a }
    }

    fn mul(&self, a: &BigUint, b: &BigUint) -> BigUint {
        count_mul();
        a * b % &self.p
    }

    fn inv(&self, a: &BigUint) -> Option<BigUint> {
        if a.is_zero() {
            return None;
        }
        count_mul();
        let exp = &self.p - 2u32;
        Some(a.modpow(&exp, &self.p))
    }

    fn is_zero(&self, a: &BigUint) -> bool {
        a.is_zero()
    }

    fn modulus_decimal(&self) -> String {
        self.p.to_string()
    }
}

/// A ring whose representation was picked from the modulus magnitude.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ScalarRing {
    Word(WordRing),
    Big(BigRing),
}

impl ScalarRing {
    pub fn modulus_decimal(&self) -> String {
        match self {
            ScalarRing::Word(r) => r.modulus_decimal(),
            ScalarRing::Big(r) => r.modulus_decimal(),
        }
    }

    pub fn is_word(&self) -> bool {
        matches!(self, ScalarRing::Word(_))
    }
}

/// Ring for exact counting: the prime `p` satisfies `n^h <= p <= 2*n^h`, found
/// by scanning upward from `n^h`. Counts of `h`-step walks over `n` vertices
/// never exceed `n^h`, so residues determine the counts exactly.
pub fn ring_deterministic(n: u64, h: u32) -> ScalarRing {
    assert!(n >= 1 && h >= 1, "need n >= 1 and h >= 1");
    let lo = BigUint::from(n).pow(h);
    let p = next_prime_at_least(&lo);
    debug_assert!(p <= &lo * 2u32 || lo < BigUint::from(2u32), "prime scan left [m, 2m]");
    match u64::try_from(&p) {
        Ok(w) if w < (1u64 << 62) => ScalarRing::Word(WordRing::new(w)),
        _ => ScalarRing::Big(BigRing::new(p)),
    }
}

const RANDOM_PRIME_LO: u64 = 1 << 30;
const RANDOM_PRIME_HI: u64 = (1 << 31) - (1 << 20);

/// Ring for randomized counting: a word-size prime sampled from a fixed
/// interval around `2^30`. The seed fully determines the prime.
pub fn ring_randomized(seed: u64) -> WordRing {
    let mut rng = SplitMix64::new(seed ^ 0x9e37_79b9_7f4a_7c15);
    let start = RANDOM_PRIME_LO + rng.next_below(RANDOM_PRIME_HI - RANDOM_PRIME_LO);
    let mut cand = start | 1;
    while !is_prime_u64(cand) {
        cand += 2;
    }
    debug_assert!(cand <= 1 << 31);
    WordRing::new(cand)
}

/// Deterministic Miller-Rabin for `u64`: the first twelve prime bases decide
/// primality for every value below 3.18e23, which covers the full word range.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == p {
            return true;
        }
        if n % p == 0 {
            return false;
        }
    }
    let d = n - 1;
    let s = d.trailing_zeros();
    let d = d >> s;
    'base: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod_u64(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = ((x as u128 * x as u128) % n as u128) as u64;
            if x == n - 1 {
                continue 'base;
            }
        }
        return false;
    }
    true
}

fn pow_mod_u64(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mm = m as u128;
    let mut acc: u128 = 1;
    let mut b = base as u128 % mm;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * b % mm;
        }
        b = b * b % mm;
        exp >>= 1;
        base = b as u64;
    }
    let _ = base;
    acc as u64
}

const MR_BASES_BIG: [u64; 25] = [
    2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97,
];

/// Primality for arbitrary-precision values. Word-size inputs use the proven
/// deterministic base set; larger inputs run Miller-Rabin over the first 25
/// prime bases, which is exact for every modulus this crate ever constructs
/// (scan targets up to a few hundred bits).
pub fn is_prime(n: &BigUint) -> bool {
    if let Ok(w) = u64::try_from(n) {
        return is_prime_u64(w);
    }
    let one = BigUint::one();
    let two = BigUint::from(2u32);
    for p in MR_BASES_BIG {
        if (n % p).is_zero() {
            return false;
        }
    }
    let n_minus_1 = n - &one;
    let s = n_minus_1.trailing_zeros().unwrap_or(0);
    let d = &n_minus_1 >> s;
    'base: for a in MR_BASES_BIG {
        let a = BigUint::from(a);
        let mut x = a.modpow(&d, n);
        if x.is_one() || x == n_minus_1 {
            continue;
        }
        for _ in 1..s {
            x = x.modpow(&two, n);
            if x == n_minus_1 {
                continue 'base;
            }
        }
        return false;
    }
    true
}

/// First prime `>= m` (so `m = 1` yields 2).
pub fn next_prime_at_least(m: &BigUint) -> BigUint {
    let two = BigUint::from(2u32);
    if *m <= two {
        return two;
    }
    let mut cand = m.clone();
    if (&cand % 2u32).is_zero() {
        cand += 1u32;
    }
    while !is_prime(&cand) {
        cand += 2u32;
    }
    cand
}
