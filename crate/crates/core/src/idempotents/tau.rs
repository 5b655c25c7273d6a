//! Sign vectors `tau` on `qZ_k` whose circulant is positive semidefinite.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Result, SekineError};
use crate::scalar::{RootsOfUnity, C64, DEFAULT_TOL};

/// Patterns are enumerated exhaustively; beyond this length it gets slow.
const WARN_LENGTH: usize = 20;

/// `tau_j in {+1, -1}` for `j in qZ_k`, stored as `values[t] = tau_{tq}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct TauVector {
    k: usize,
    q: usize,
    values: Vec<i8>,
}

impl TauVector {
    pub fn new(k: usize, q: usize, values: Vec<i8>) -> Result<Self> {
        if q == 0 || !k.is_multiple_of(q) || k / q < 2 {
            return Err(SekineError::InvalidParameter(format!(
                "tau needs q | k with k/q > 1 (k={k}, q={q})"
            )));
        }
        if values.len() != k / q || values.iter().any(|&v| v != 1 && v != -1) {
            return Err(SekineError::InvalidParameter(format!(
                "tau must be {} signs, got {values:?}",
                k / q
            )));
        }
        Ok(Self { k, q, values })
    }

    pub fn all_ones(k: usize, q: usize) -> Result<Self> {
        let p = k.checked_div(q).unwrap_or(0);
        Self::new(k, q, vec![1; p])
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn q(&self) -> usize {
        self.q
    }

    /// Length of the vector, `p = k/q`.
    pub fn p(&self) -> usize {
        self.values.len()
    }

    pub fn values(&self) -> &[i8] {
        &self.values
    }

    /// `tau_j` for `j` a multiple of `q` (taken mod `k`).
    pub fn at(&self, j: usize) -> i8 {
        let j = j % self.k;
        assert!(j.is_multiple_of(self.q), "tau is only defined on multiples of q");
        self.values[j / self.q]
    }

    /// `sum_{j in qZ_k} tau_j eta^{ij}` for `i in Z_{k/q}`.
    pub fn dft(&self, i: usize) -> C64 {
        let omega = RootsOfUnity::new(self.p());
        self.values
            .iter()
            .enumerate()
            .map(|(t, &v)| omega.at(i * t) * f64::from(v))
            .sum()
    }

    /// Every DFT value is real and nonnegative up to `tol`.
    pub fn is_positive(&self, tol: f64) -> bool {
        (0..self.p()).all(|i| {
            let z = self.dft(i);
            z.re >= -tol && z.im.abs() <= tol
        })
    }

    pub fn is_symmetric(&self) -> bool {
        let p = self.p();
        (0..p).all(|t| self.values[t] == self.values[(p - t) % p])
    }

    /// `tau` rendered as a sign string, e.g. `"+-"`.
    pub fn signs(&self) -> String {
        self.values
            .iter()
            .map(|&v| if v > 0 { '+' } else { '-' })
            .collect()
    }
}

impl fmt::Display for TauVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.signs())
    }
}

/// All valid `tau` on `qZ_k` with `tau_0 = +1`, in lexicographic order with `+` first.
pub fn enumerate_tau(k: usize, q: usize) -> Result<Vec<TauVector>> {
    enumerate_tau_with_tol(k, q, DEFAULT_TOL)
}

pub fn enumerate_tau_with_tol(k: usize, q: usize, tol: f64) -> Result<Vec<TauVector>> {
    if q == 0 || !k.is_multiple_of(q) || k / q < 2 {
        return Err(SekineError::InvalidParameter(format!(
            "tau needs q | k with k/q > 1 (k={k}, q={q})"
        )));
    }
    let p = k / q;
    if p > WARN_LENGTH {
        log::warn!("enumerating 2^{} sign patterns for tau (k={k}, q={q})", p - 1);
    }
    let mut out = Vec::new();
    for bits in 0u64..(1u64 << (p - 1)) {
        // bit t-1 set means tau_{tq} = -1; the most significant position is t = 1.
        let mut values = vec![1i8; p];
        for (t, v) in values.iter_mut().enumerate().skip(1) {
            if bits & (1 << (p - 1 - t)) != 0 {
                *v = -1;
            }
        }
        let tau = TauVector { k, q, values };
        // A real DFT forces tau_j = tau_{-j}; skip asymmetric patterns before
        // paying for the DFT.
        if tau.is_symmetric() && tau.is_positive(tol) {
            out.push(tau);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Full 2^p sweep, no symmetry shortcut and no tau_0 restriction.
    fn brute(k: usize, q: usize) -> Vec<Vec<i8>> {
        let p = k / q;
        let omega = RootsOfUnity::new(p);
        let mut out = Vec::new();
        for bits in 0u32..(1 << p) {
            let v: Vec<i8> = (0..p).map(|t| if bits & (1 << t) != 0 { -1 } else { 1 }).collect();
            let ok = (0..p).all(|i| {
                let z: C64 = (0..p).map(|t| omega.at(i * t) * f64::from(v[t])).sum();
                z.re >= -1e-9 && z.im.abs() <= 1e-9
            });
            if ok {
                out.push(v);
            }
        }
        out.sort();
        out
    }

    #[test]
    fn k2_both_patterns() {
        let taus = enumerate_tau(2, 1).unwrap();
        let signs: Vec<String> = taus.iter().map(TauVector::signs).collect();
        assert_eq!(signs, vec!["++", "+-"]);
    }

    #[test]
    fn k3_only_all_ones() {
        let taus = enumerate_tau(3, 1).unwrap();
        assert_eq!(taus, vec![TauVector::all_ones(3, 1).unwrap()]);
        assert_eq!(brute(3, 1), vec![vec![1, 1, 1]]);
    }

    #[test]
    fn agrees_with_brute_force() {
        for k in 2..=12 {
            for q in (1..k).filter(|q| k % q == 0 && k / q > 1) {
                let mut got: Vec<Vec<i8>> = enumerate_tau(k, q)
                    .unwrap()
                    .into_iter()
                    .map(|t| t.values)
                    .collect();
                got.sort();
                // tau_0 = -1 never survives: the DFT values sum to p * tau_0.
                assert_eq!(got, brute(k, q), "k={k} q={q}");
            }
        }
    }

    #[test]
    fn all_ones_always_valid_and_symmetric() {
        for k in 2..=12 {
            for q in (1..k).filter(|q| k % q == 0 && k / q > 1) {
                let taus = enumerate_tau(k, q).unwrap();
                assert_eq!(taus[0], TauVector::all_ones(k, q).unwrap());
                assert!(taus.iter().all(TauVector::is_symmetric));
            }
        }
    }

    #[test]
    fn invalid_parameters() {
        assert!(enumerate_tau(4, 3).is_err());
        assert!(enumerate_tau(4, 4).is_err());
        assert!(TauVector::new(4, 2, vec![1, 0]).is_err());
        assert!(TauVector::new(4, 2, vec![1, 1, 1]).is_err());
    }
}
