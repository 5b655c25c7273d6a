//! The elements `rho_{p,q}`, `sigma_{p,q}` and the two-dimensional unitary
//! representations `pi_{p,q}` built from them.

use serde::Serialize;

use crate::algebra::{AlgebraElement, TensorElement};
use crate::error::{check_order, Result};
use crate::scalar::{CMatrix, CyclicIndex, RootsOfUnity};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RepLabel {
    pub p: CyclicIndex,
    pub q: CyclicIndex,
}

impl RepLabel {
    pub fn new(k: usize, p: i64, q: i64) -> Self {
        Self {
            p: CyclicIndex::new(p, k),
            q: CyclicIndex::new(q, k),
        }
    }

    /// The label `(p, -q)` of the equivalent representation.
    pub fn reflected(self) -> Self {
        Self {
            p: self.p,
            q: -self.q,
        }
    }
}

/// `rho_{p,q} = sum_{m,n} eta^{mp+nq} d_{m,n}`.
pub fn rho(k: usize, p: i64, q: i64) -> Result<AlgebraElement> {
    check_order(k)?;
    let eta = RootsOfUnity::new(k);
    let d = CMatrix::from_fn(k, k, |m, n| eta.pow(m as i64 * p + n as i64 * q));
    AlgebraElement::from_parts(d, CMatrix::zeros(k, k))
}

/// `sigma_{p,q} = sum_i eta^{iq} e_{i,i+p}`.
pub fn sigma(k: usize, p: i64, q: i64) -> Result<AlgebraElement> {
    check_order(k)?;
    let eta = RootsOfUnity::new(k);
    let shift = CyclicIndex::new(p, k).value();
    let mut m = CMatrix::zeros(k, k);
    for i in 0..k {
        m[(i, (i + shift) % k)] = eta.pow(i as i64 * q);
    }
    AlgebraElement::from_parts(CMatrix::zeros(k, k), m)
}

/// A 2x2 matrix with entries in `A_k`.
#[derive(Clone, Debug, PartialEq)]
pub struct RepMatrix {
    pub label: RepLabel,
    pub entries: [[AlgebraElement; 2]; 2],
}

impl RepMatrix {
    pub fn k(&self) -> usize {
        self.entries[0][0].k()
    }

    /// Entrywise adjoint of the transpose.
    pub fn adjoint(&self) -> Self {
        let e = &self.entries;
        Self {
            label: self.label,
            entries: [
                [e[0][0].adjoint(), e[1][0].adjoint()],
                [e[0][1].adjoint(), e[1][1].adjoint()],
            ],
        }
    }

    pub fn multiply(&self, other: &Self) -> Result<Self> {
        let mut entries: [[AlgebraElement; 2]; 2] = [
            [AlgebraElement::zero(self.k())?, AlgebraElement::zero(self.k())?],
            [AlgebraElement::zero(self.k())?, AlgebraElement::zero(self.k())?],
        ];
        for (i, row) in entries.iter_mut().enumerate() {
            for (j, slot) in row.iter_mut().enumerate() {
                let a = self.entries[i][0].multiply(&other.entries[0][j])?;
                let b = self.entries[i][1].multiply(&other.entries[1][j])?;
                *slot = &a + &b;
            }
        }
        Ok(Self {
            label: self.label,
            entries,
        })
    }

    /// Distance to `diag(1, 1)` with `1` the unit of `A_k`.
    pub fn distance_to_identity(&self) -> Result<f64> {
        let k = self.k();
        let one = AlgebraElement::unit(k)?;
        let zero = AlgebraElement::zero(k)?;
        let e = &self.entries;
        Ok(e[0][0]
            .distance(&one)
            .max(e[1][1].distance(&one))
            .max(e[0][1].distance(&zero))
            .max(e[1][0].distance(&zero)))
    }

    /// Conjugation by the swap matrix `[[0,1],[1,0]]`.
    pub fn swap_conjugate(&self) -> Self {
        let e = &self.entries;
        Self {
            label: self.label.reflected(),
            entries: [
                [e[1][1].clone(), e[1][0].clone()],
                [e[0][1].clone(), e[0][0].clone()],
            ],
        }
    }

    pub fn distance(&self, other: &Self) -> f64 {
        let mut worst: f64 = 0.0;
        for i in 0..2 {
            for j in 0..2 {
                worst = worst.max(self.entries[i][j].distance(&other.entries[i][j]));
            }
        }
        worst
    }

    /// Worst violation of `Delta(u_{ij}) = sum_l u_{il} (x) u_{lj}`.
    pub fn corepresentation_residual(&self) -> Result<f64> {
        let mut worst: f64 = 0.0;
        for i in 0..2 {
            for j in 0..2 {
                let lhs = self.entries[i][j].comultiply();
                let mut rhs = TensorElement::zero(self.k());
                for l in 0..2 {
                    let t = TensorElement::pure(&self.entries[i][l], &self.entries[l][j])?;
                    for (&(a, b), &c) in t.terms() {
                        rhs.add_term(a, b, c);
                    }
                }
                worst = worst.max(lhs.distance(&rhs));
            }
        }
        Ok(worst)
    }
}

/// `pi_{p,q} = [[rho_{p,q}, sigma_{p,-q}], [sigma_{p,q}, rho_{p,-q}]]`.
pub fn pi(k: usize, p: i64, q: i64) -> Result<RepMatrix> {
    Ok(RepMatrix {
        label: RepLabel::new(k, p, q),
        entries: [
            [rho(k, p, q)?, sigma(k, p, -q)?],
            [sigma(k, p, q)?, rho(k, p, -q)?],
        ],
    })
}

/// One-dimensional characters `rho_{p,q} +/- sigma_{p,q}` split off `pi_{p,q}`
/// at `q = 0` and, for even `k`, at `q = k/2`.
pub fn decompose_characters(k: usize, p: i64) -> Result<Vec<AlgebraElement>> {
    check_order(k)?;
    let mut qs = vec![0i64];
    if k.is_multiple_of(2) {
        qs.push(k as i64 / 2);
    }
    let mut out = Vec::with_capacity(2 * qs.len());
    for q in qs {
        let r = rho(k, p, q)?;
        let s = sigma(k, p, q)?;
        out.push(&r + &s);
        out.push(&r - &s);
    }
    Ok(out)
}

/// Checks `Delta(chi) = chi (x) chi` and `chi^* chi = 1`; returns the worst residual.
pub fn character_residual(chi: &AlgebraElement) -> Result<f64> {
    let k = chi.k();
    let delta = chi.comultiply();
    let square = TensorElement::pure(chi, chi)?;
    let unitary = chi.adjoint().multiply(chi)?;
    Ok(delta
        .distance(&square)
        .max(unitary.distance(&AlgebraElement::unit(k)?)))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct IrrepInventory {
    pub one_dim_count: usize,
    pub two_dim_count: usize,
}

impl IrrepInventory {
    /// `sum n_alpha^2` over the inventory; equals `dim A_k = 2k^2`.
    pub fn dimension_total(&self) -> usize {
        self.one_dim_count + 4 * self.two_dim_count
    }
}

pub fn irrep_inventory(k: usize) -> Result<IrrepInventory> {
    check_order(k)?;
    let inv = if k % 2 == 1 {
        IrrepInventory {
            one_dim_count: 2 * k,
            two_dim_count: k * (k - 1) / 2,
        }
    } else {
        IrrepInventory {
            one_dim_count: 4 * k,
            two_dim_count: k * (k - 2) / 2,
        }
    };
    assert_eq!(inv.dimension_total(), 2 * k * k, "irrep dimension count for k={k}");
    Ok(inv)
}
