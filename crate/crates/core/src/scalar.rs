//! Complex scalars, cyclic indices and roots of unity.

use std::f64::consts::PI;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use nalgebra::DMatrix;

/// Double-precision complex scalar.
pub type C64 = nalgebra::Complex<f64>;

/// Dense complex matrix used for every `k x k` coefficient block.
pub type CMatrix = DMatrix<C64>;

/// Default tolerance for comparing scalars and elements.
pub const DEFAULT_TOL: f64 = 1e-9;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);

#[inline]
pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

#[inline]
pub fn real(re: f64) -> C64 {
    C64::new(re, 0.0)
}

/// Reduces a signed integer into `0..k`.
#[inline]
pub fn modk(x: i64, k: usize) -> usize {
    x.rem_euclid(k as i64) as usize
}

/// Element of the cyclic group of order `modulus`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CyclicIndex {
    value: usize,
    modulus: usize,
}

impl CyclicIndex {
    pub fn new(value: i64, modulus: usize) -> Self {
        assert!(modulus > 0, "cyclic group of order zero");
        Self {
            value: modk(value, modulus),
            modulus,
        }
    }

    pub fn value(self) -> usize {
        self.value
    }

    pub fn modulus(self) -> usize {
        self.modulus
    }

    pub fn scale(self, m: i64) -> Self {
        Self::new(self.value as i64 * m, self.modulus)
    }
}

impl Add for CyclicIndex {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        debug_assert_eq!(self.modulus, rhs.modulus);
        Self::new((self.value + rhs.value) as i64, self.modulus)
    }
}

impl Sub for CyclicIndex {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        debug_assert_eq!(self.modulus, rhs.modulus);
        Self::new(self.value as i64 - rhs.value as i64, self.modulus)
    }
}

impl Neg for CyclicIndex {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-(self.value as i64), self.modulus)
    }
}

impl fmt::Display for CyclicIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

/// Table of the `k`-th roots of unity `eta^m = exp(2 pi i m / k)`.
///
/// Exponents are reduced mod `k` before lookup, and each entry is computed
/// from its exact angle, so large exponents do not accumulate drift.
#[derive(Clone, Debug)]
pub struct RootsOfUnity {
    k: usize,
    table: Vec<C64>,
}

impl RootsOfUnity {
    pub fn new(k: usize) -> Self {
        let table = (0..k)
            .map(|m| {
                let theta = 2.0 * PI * m as f64 / k as f64;
                C64::new(theta.cos(), theta.sin())
            })
            .collect();
        Self { k, table }
    }

    pub fn order(&self) -> usize {
        self.k
    }

    #[inline]
    pub fn pow(&self, m: i64) -> C64 {
        self.table[modk(m, self.k)]
    }

    /// `eta^m` for an exponent that is already reduced.
    #[inline]
    pub fn at(&self, m: usize) -> C64 {
        self.table[m % self.k]
    }
}

/// Max-abs distance between two equally shaped matrices.
pub fn linf(a: &CMatrix, b: &CMatrix) -> f64 {
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

pub fn max_abs(a: &CMatrix) -> f64 {
    a.iter().map(|x| x.norm()).fold(0.0, f64::max)
}
