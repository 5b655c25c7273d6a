//! The algebra `A_k = C^{k^2} (+) M_k(C)` with its Hopf structure.
//!
//! An element stores two `k x k` blocks: `dcoef[(i, j)]` is the coefficient of
//! the minimal projection `d_{i,j}` of the commutative part, and `mcoef` is the
//! matrix block written in the matrix units `e_{r,s}`.
//!
//! The comultiplication is implemented literally on basis elements and
//! extended linearly into a sparse [`TensorElement`]. It is the reference
//! route; convolution of functionals goes through the closed form in
//! [`crate::functionals`].

use std::collections::BTreeMap;
use std::ops::{Add, Sub};

use crate::error::{check_order, check_same, Result, SekineError};
use crate::functionals::Functional;
use crate::scalar::{linf, modk, CMatrix, RootsOfUnity, C64, ONE, ZERO};

/// A basis vector of `A_k`: either `d_{i,j}` or a matrix unit `e_{r,s}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BasisLabel {
    D(usize, usize),
    E(usize, usize),
}

impl BasisLabel {
    /// Product of two basis vectors, `None` when it vanishes.
    pub fn product(self, other: BasisLabel) -> Option<BasisLabel> {
        match (self, other) {
            (BasisLabel::D(i, j), BasisLabel::D(m, n)) if i == m && j == n => Some(self),
            (BasisLabel::E(r, s), BasisLabel::E(t, u)) if s == t => Some(BasisLabel::E(r, u)),
            _ => None,
        }
    }

    pub fn adjoint(self) -> BasisLabel {
        match self {
            BasisLabel::D(..) => self,
            BasisLabel::E(r, s) => BasisLabel::E(s, r),
        }
    }

    /// All `2k^2` basis vectors, `d`'s first.
    pub fn all(k: usize) -> impl Iterator<Item = BasisLabel> {
        let ds = (0..k).flat_map(move |i| (0..k).map(move |j| BasisLabel::D(i, j)));
        let es = (0..k).flat_map(move |r| (0..k).map(move |s| BasisLabel::E(r, s)));
        ds.chain(es)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct AlgebraElement {
    k: usize,
    dcoef: CMatrix,
    mcoef: CMatrix,
}

impl AlgebraElement {
    pub fn zero(k: usize) -> Result<Self> {
        check_order(k)?;
        Ok(Self {
            k,
            dcoef: CMatrix::zeros(k, k),
            mcoef: CMatrix::zeros(k, k),
        })
    }

    /// The unit `sum d_{i,j} + sum e_{r,r}`.
    pub fn unit(k: usize) -> Result<Self> {
        check_order(k)?;
        Ok(Self {
            k,
            dcoef: CMatrix::from_element(k, k, ONE),
            mcoef: CMatrix::identity(k, k),
        })
    }

    pub fn from_parts(dcoef: CMatrix, mcoef: CMatrix) -> Result<Self> {
        let k = dcoef.nrows();
        check_order(k)?;
        if dcoef.ncols() != k || mcoef.nrows() != k || mcoef.ncols() != k {
            return Err(SekineError::InvalidParameter(format!(
                "coefficient blocks must both be {k}x{k}"
            )));
        }
        Ok(Self { k, dcoef, mcoef })
    }

    /// `d_{i,j}`, indices taken mod `k`.
    pub fn d(k: usize, i: i64, j: i64) -> Result<Self> {
        Self::basis(k, BasisLabel::D(modk(i, k), modk(j, k)))
    }

    /// Matrix unit `e_{r,s}`, indices taken mod `k`.
    pub fn e(k: usize, r: i64, s: i64) -> Result<Self> {
        Self::basis(k, BasisLabel::E(modk(r, k), modk(s, k)))
    }

    pub fn basis(k: usize, label: BasisLabel) -> Result<Self> {
        let mut out = Self::zero(k)?;
        *out.coefficient_mut(label) = ONE;
        Ok(out)
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn dcoef(&self) -> &CMatrix {
        &self.dcoef
    }

    pub fn mcoef(&self) -> &CMatrix {
        &self.mcoef
    }

    pub fn coefficient(&self, label: BasisLabel) -> C64 {
        match label {
            BasisLabel::D(i, j) => self.dcoef[(i, j)],
            BasisLabel::E(r, s) => self.mcoef[(r, s)],
        }
    }

    fn coefficient_mut(&mut self, label: BasisLabel) -> &mut C64 {
        match label {
            BasisLabel::D(i, j) => &mut self.dcoef[(i, j)],
            BasisLabel::E(r, s) => &mut self.mcoef[(r, s)],
        }
    }

    /// Nonzero coefficients in basis order.
    pub fn terms(&self) -> impl Iterator<Item = (BasisLabel, C64)> + '_ {
        BasisLabel::all(self.k)
            .map(|l| (l, self.coefficient(l)))
            .filter(|(_, c)| *c != ZERO)
    }

    /// Product in the direct sum: pointwise on the `d` part, matrix product on the block.
    pub fn multiply(&self, other: &Self) -> Result<Self> {
        check_same(self.k, other.k)?;
        Ok(Self {
            k: self.k,
            dcoef: self.dcoef.component_mul(&other.dcoef),
            mcoef: &self.mcoef * &other.mcoef,
        })
    }

    pub fn adjoint(&self) -> Self {
        Self {
            k: self.k,
            dcoef: self.dcoef.map(|z| z.conj()),
            mcoef: self.mcoef.adjoint(),
        }
    }

    pub fn scale(&self, s: C64) -> Self {
        Self {
            k: self.k,
            dcoef: self.dcoef.map(|z| z * s),
            mcoef: self.mcoef.map(|z| z * s),
        }
    }

    /// Max-abs distance over all `2k^2` coefficients.
    pub fn distance(&self, other: &Self) -> f64 {
        assert_eq!(self.k, other.k, "distance across different k");
        linf(&self.dcoef, &other.dcoef).max(linf(&self.mcoef, &other.mcoef))
    }

    /// The counit: the coefficient of `d_{0,0}`.
    pub fn counit(&self) -> C64 {
        self.dcoef[(0, 0)]
    }

    /// `(1/2k^2) sum dcoef + (1/2k) tr(mcoef)`.
    pub fn haar_state(&self) -> C64 {
        let k = self.k as f64;
        self.dcoef.sum() / (2.0 * k * k) + self.mcoef.trace() / (2.0 * k)
    }

    pub fn comultiply(&self) -> TensorElement {
        comultiply_with(self, EtaConvention::Standard)
    }
}

impl Add for &AlgebraElement {
    type Output = AlgebraElement;
    fn add(self, rhs: &AlgebraElement) -> AlgebraElement {
        assert_eq!(self.k, rhs.k);
        AlgebraElement {
            k: self.k,
            dcoef: &self.dcoef + &rhs.dcoef,
            mcoef: &self.mcoef + &rhs.mcoef,
        }
    }
}

impl Sub for &AlgebraElement {
    type Output = AlgebraElement;
    fn sub(self, rhs: &AlgebraElement) -> AlgebraElement {
        assert_eq!(self.k, rhs.k);
        AlgebraElement {
            k: self.k,
            dcoef: &self.dcoef - &rhs.dcoef,
            mcoef: &self.mcoef - &rhs.mcoef,
        }
    }
}

/// Which root of unity the comultiplication uses on the `d_{i,j}` generators.
///
/// `FlippedOnD` replaces `eta` by `eta^{-1}` in the `d` formula only; it breaks
/// the Hopf structure and exists as a negative control for the self-check.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum EtaConvention {
    #[default]
    Standard,
    FlippedOnD,
}

/// Comultiplication of a single basis vector, pushed into `out` with weight `w`.
fn comultiply_basis(
    label: BasisLabel,
    w: C64,
    k: usize,
    eta: &RootsOfUnity,
    convention: EtaConvention,
    out: &mut TensorElement,
) {
    let ki = k as i64;
    let inv_k = 1.0 / k as f64;
    match label {
        BasisLabel::D(i, j) => {
            let (i, j) = (i as i64, j as i64);
            let sign = match convention {
                EtaConvention::Standard => 1,
                EtaConvention::FlippedOnD => -1,
            };
            for m in 0..ki {
                for n in 0..ki {
                    out.add_term(
                        BasisLabel::D(m as usize, n as usize),
                        BasisLabel::D(modk(i - m, k), modk(j - n, k)),
                        w,
                    );
                    out.add_term(
                        BasisLabel::E(m as usize, n as usize),
                        BasisLabel::E(modk(m + j, k), modk(n + j, k)),
                        w * eta.pow(sign * i * (m - n)) * inv_k,
                    );
                }
            }
        }
        BasisLabel::E(i, j) => {
            let (i, j) = (i as i64, j as i64);
            for m in 0..ki {
                for n in 0..ki {
                    let shifted = BasisLabel::E(modk(i - n, k), modk(j - n, k));
                    out.add_term(
                        BasisLabel::D(modk(-m, k), modk(-n, k)),
                        shifted,
                        w * eta.pow(m * (i - j)),
                    );
                    out.add_term(
                        shifted,
                        BasisLabel::D(m as usize, n as usize),
                        w * eta.pow(m * (j - i)),
                    );
                }
            }
        }
    }
}

#[doc(hidden)]
pub fn comultiply_with(a: &AlgebraElement, convention: EtaConvention) -> TensorElement {
    let eta = RootsOfUnity::new(a.k);
    let mut out = TensorElement::zero(a.k);
    for (label, w) in a.terms() {
        comultiply_basis(label, w, a.k, &eta, convention, &mut out);
    }
    out
}

/// Sparse element of `A_k (x) A_k`.
#[derive(Clone, Debug, PartialEq)]
pub struct TensorElement {
    k: usize,
    terms: BTreeMap<(BasisLabel, BasisLabel), C64>,
}

impl TensorElement {
    pub fn zero(k: usize) -> Self {
        Self {
            k,
            terms: BTreeMap::new(),
        }
    }

    /// `a (x) b` expanded in the basis.
    pub fn pure(a: &AlgebraElement, b: &AlgebraElement) -> Result<Self> {
        check_same(a.k, b.k)?;
        let mut out = Self::zero(a.k);
        for (la, ca) in a.terms() {
            for (lb, cb) in b.terms() {
                out.add_term(la, lb, ca * cb);
            }
        }
        Ok(out)
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn add_term(&mut self, left: BasisLabel, right: BasisLabel, c: C64) {
        if c == ZERO {
            return;
        }
        *self.terms.entry((left, right)).or_insert(ZERO) += c;
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(BasisLabel, BasisLabel), &C64)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, left: BasisLabel, right: BasisLabel) -> C64 {
        self.terms.get(&(left, right)).copied().unwrap_or(ZERO)
    }

    pub fn multiply(&self, other: &Self) -> Result<Self> {
        check_same(self.k, other.k)?;
        let mut out = Self::zero(self.k);
        for (&(a1, a2), &x) in &self.terms {
            for (&(b1, b2), &y) in &other.terms {
                if let (Some(l), Some(r)) = (a1.product(b1), a2.product(b2)) {
                    out.add_term(l, r, x * y);
                }
            }
        }
        Ok(out)
    }

    pub fn adjoint(&self) -> Self {
        let mut out = Self::zero(self.k);
        for (&(l, r), &x) in &self.terms {
            out.add_term(l.adjoint(), r.adjoint(), x.conj());
        }
        out
    }

    /// Max-abs coefficient difference over the union of supports.
    pub fn distance(&self, other: &Self) -> f64 {
        let mut worst: f64 = 0.0;
        for (key, x) in &self.terms {
            let y = other.terms.get(key).copied().unwrap_or(ZERO);
            worst = worst.max((x - y).norm());
        }
        for (key, y) in &other.terms {
            if !self.terms.contains_key(key) {
                worst = worst.max(y.norm());
            }
        }
        worst
    }

    /// `(f (x) id)(t)`.
    pub fn slice_left(&self, f: &Functional) -> Result<AlgebraElement> {
        check_same(self.k, f.k())?;
        let mut out = AlgebraElement::zero(self.k)?;
        for (&(l, r), &x) in &self.terms {
            *out.coefficient_mut(r) += x * f.at(l);
        }
        Ok(out)
    }

    /// `(id (x) f)(t)`.
    pub fn slice_right(&self, f: &Functional) -> Result<AlgebraElement> {
        check_same(self.k, f.k())?;
        let mut out = AlgebraElement::zero(self.k)?;
        for (&(l, r), &x) in &self.terms {
            *out.coefficient_mut(l) += x * f.at(r);
        }
        Ok(out)
    }

    /// `(Delta (x) id)(t)`.
    pub fn comultiply_left(&self) -> TripleTensor {
        let eta = RootsOfUnity::new(self.k);
        let mut out = TripleTensor::zero(self.k);
        for (&(l, r), &x) in &self.terms {
            let mut scratch = TensorElement::zero(self.k);
            comultiply_basis(l, x, self.k, &eta, EtaConvention::Standard, &mut scratch);
            for (&(a, b), &y) in &scratch.terms {
                out.add_term([a, b, r], y);
            }
        }
        out
    }

    /// `(id (x) Delta)(t)`.
    pub fn comultiply_right(&self) -> TripleTensor {
        let eta = RootsOfUnity::new(self.k);
        let mut out = TripleTensor::zero(self.k);
        for (&(l, r), &x) in &self.terms {
            let mut scratch = TensorElement::zero(self.k);
            comultiply_basis(r, x, self.k, &eta, EtaConvention::Standard, &mut scratch);
            for (&(a, b), &y) in &scratch.terms {
                out.add_term([l, a, b], y);
            }
        }
        out
    }
}

/// Sparse element of `A_k (x) A_k (x) A_k`, used for coassociativity.
#[derive(Clone, Debug, PartialEq)]
pub struct TripleTensor {
    k: usize,
    terms: BTreeMap<[BasisLabel; 3], C64>,
}

impl TripleTensor {
    pub fn zero(k: usize) -> Self {
        Self {
            k,
            terms: BTreeMap::new(),
        }
    }

    pub fn add_term(&mut self, labels: [BasisLabel; 3], c: C64) {
        if c != ZERO {
            *self.terms.entry(labels).or_insert(ZERO) += c;
        }
    }

    pub fn distance(&self, other: &Self) -> f64 {
        let mut worst: f64 = 0.0;
        for (key, x) in &self.terms {
            let y = other.terms.get(key).copied().unwrap_or(ZERO);
            worst = worst.max((x - y).norm());
        }
        for (key, y) in &other.terms {
            if !self.terms.contains_key(key) {
                worst = worst.max(y.norm());
            }
        }
        worst
    }
}

pub fn unit(k: usize) -> Result<AlgebraElement> {
    AlgebraElement::unit(k)
}

pub fn multiply(a: &AlgebraElement, b: &AlgebraElement) -> Result<AlgebraElement> {
    a.multiply(b)
}

pub fn adjoint(a: &AlgebraElement) -> AlgebraElement {
    a.adjoint()
}

pub fn comultiply(a: &AlgebraElement) -> TensorElement {
    a.comultiply()
}

pub fn counit(a: &AlgebraElement) -> C64 {
    a.counit()
}

pub fn haar_state(a: &AlgebraElement) -> C64 {
    a.haar_state()
}

/// `(f (x) g)(t)`.
pub fn tensor_pair_apply(f: &Functional, g: &Functional, t: &TensorElement) -> Result<C64> {
    check_same(f.k(), g.k())?;
    check_same(f.k(), t.k())?;
    Ok(t
        .terms
        .iter()
        .map(|(&(l, r), &x)| x * f.at(l) * g.at(r))
        .sum())
}
