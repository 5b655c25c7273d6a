//! Linear functionals on `A_k` and their convolution.
//!
//! A functional is stored in the dual basis: `alpha[(i, j)] = mu(d_{i,j})` and
//! `kappa[(r, s)] = mu(e_{r,s})`.

use std::collections::BTreeMap;
use std::ops::{Add, Sub};

use nalgebra::Matrix2;
use serde::{Deserialize, Serialize};

use crate::algebra::{tensor_pair_apply, AlgebraElement, BasisLabel};
use crate::error::{check_order, check_same, Result, SekineError};
use crate::scalar::{linf, max_abs, real, CMatrix, RootsOfUnity, C64, ONE, ZERO};

/// Two functionals are considered equal below this L-infinity distance.
pub const FUNCTIONAL_EQ_TOL: f64 = 1e-8;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(into = "crate::io::StateFile", try_from = "crate::io::StateFile")]
pub struct Functional {
    k: usize,
    alpha: CMatrix,
    kappa: CMatrix,
}

impl Functional {
    pub fn new(alpha: CMatrix, kappa: CMatrix) -> Result<Self> {
        let k = alpha.nrows();
        check_order(k)?;
        if alpha.ncols() != k || kappa.nrows() != k || kappa.ncols() != k {
            return Err(SekineError::InvalidParameter(format!(
                "alpha and kappa must both be {k}x{k}"
            )));
        }
        Ok(Self { k, alpha, kappa })
    }

    pub fn zero(k: usize) -> Result<Self> {
        check_order(k)?;
        Ok(Self {
            k,
            alpha: CMatrix::zeros(k, k),
            kappa: CMatrix::zeros(k, k),
        })
    }

    /// The counit, i.e. the dual vector of `d_{0,0}`.
    pub fn counit(k: usize) -> Result<Self> {
        Self::point_mass(k, 0, 0)
    }

    /// Dual vector of `d_{i,j}`.
    pub fn point_mass(k: usize, i: usize, j: usize) -> Result<Self> {
        let mut f = Self::zero(k)?;
        f.alpha[(i % k, j % k)] = ONE;
        Ok(f)
    }

    /// Dual vector of the matrix unit `e_{r,s}`.
    pub fn matrix_dual(k: usize, r: usize, s: usize) -> Result<Self> {
        let mut f = Self::zero(k)?;
        f.kappa[(r % k, s % k)] = ONE;
        Ok(f)
    }

    /// `(1/2k^2) sum d~_{i,j} + (1/2k) sum e~_{r,r}`.
    pub fn haar(k: usize) -> Result<Self> {
        check_order(k)?;
        let kf = k as f64;
        Ok(Self {
            k,
            alpha: CMatrix::from_element(k, k, real(1.0 / (2.0 * kf * kf))),
            kappa: CMatrix::identity(k, k) * real(1.0 / (2.0 * kf)),
        })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn alpha(&self) -> &CMatrix {
        &self.alpha
    }

    pub fn kappa(&self) -> &CMatrix {
        &self.kappa
    }

    pub fn alpha_mut(&mut self) -> &mut CMatrix {
        &mut self.alpha
    }

    pub fn kappa_mut(&mut self) -> &mut CMatrix {
        &mut self.kappa
    }

    /// Value on a single basis vector.
    #[inline]
    pub fn at(&self, label: BasisLabel) -> C64 {
        match label {
            BasisLabel::D(i, j) => self.alpha[(i, j)],
            BasisLabel::E(r, s) => self.kappa[(r, s)],
        }
    }

    pub fn evaluate(&self, a: &AlgebraElement) -> Result<C64> {
        check_same(self.k, a.k())?;
        Ok(self.alpha.component_mul(a.dcoef()).sum() + self.kappa.component_mul(a.mcoef()).sum())
    }

    /// `mu(1) = sum alpha + tr kappa`.
    pub fn total_mass(&self) -> C64 {
        self.sum_alpha() + self.trace_kappa()
    }

    pub fn sum_alpha(&self) -> C64 {
        self.alpha.sum()
    }

    pub fn trace_kappa(&self) -> C64 {
        self.kappa.trace()
    }

    pub fn scale(&self, s: f64) -> Self {
        Self {
            k: self.k,
            alpha: &self.alpha * real(s),
            kappa: &self.kappa * real(s),
        }
    }

    /// L-infinity distance over the concatenated `(alpha, kappa)` entries.
    pub fn distance(&self, other: &Self) -> f64 {
        assert_eq!(self.k, other.k, "distance across different k");
        linf(&self.alpha, &other.alpha).max(linf(&self.kappa, &other.kappa))
    }

    pub fn approx_eq(&self, other: &Self) -> bool {
        self.k == other.k && self.distance(other) < FUNCTIONAL_EQ_TOL
    }

    pub fn convolve(&self, other: &Self) -> Result<Self> {
        convolve(self, other)
    }
}

impl Add for &Functional {
    type Output = Functional;
    fn add(self, rhs: &Functional) -> Functional {
        assert_eq!(self.k, rhs.k);
        Functional {
            k: self.k,
            alpha: &self.alpha + &rhs.alpha,
            kappa: &self.kappa + &rhs.kappa,
        }
    }
}

impl Sub for &Functional {
    type Output = Functional;
    fn sub(self, rhs: &Functional) -> Functional {
        assert_eq!(self.k, rhs.k);
        Functional {
            k: self.k,
            alpha: &self.alpha - &rhs.alpha,
            kappa: &self.kappa - &rhs.kappa,
        }
    }
}

/// Closed-form convolution `mu * nu = (mu (x) nu) Delta`.
///
/// With `alpha, kappa` for `mu` and `beta, omega` for `nu`:
///
/// ```text
/// gamma_{i,j} = sum_{m,n} alpha_{m,n} beta_{i-m,j-n}
///             + (1/k) sum_{r,s} eta^{i(r-s)} kappa_{r,s} omega_{r+j,s+j}
/// theta_{r,s} = sum_{i,j} eta^{i(s-r)} (alpha_{i,j} omega_{r+j,s+j} + beta_{i,j} kappa_{r-j,s-j})
/// ```
///
/// The sums over `i` only see `r - s`, so both are evaluated as partial DFTs
/// along the diagonals, giving `O(k^3)` work instead of `O(k^4)`.
pub fn convolve(mu: &Functional, nu: &Functional) -> Result<Functional> {
    check_same(mu.k, nu.k)?;
    let k = mu.k;
    let eta = RootsOfUnity::new(k);
    let (alpha, kappa) = (&mu.alpha, &mu.kappa);
    let (beta, omega) = (&nu.alpha, &nu.kappa);

    let mut gamma = CMatrix::zeros(k, k);
    for i in 0..k {
        for j in 0..k {
            let mut acc = ZERO;
            for m in 0..k {
                for n in 0..k {
                    acc += alpha[(m, n)] * beta[((i + k - m) % k, (j + k - n) % k)];
                }
            }
            gamma[(i, j)] = acc;
        }
    }

    // diag[j][t] = sum_r kappa_{r,r-t} omega_{r+j,r-t+j}, so that the
    // kappa-omega term of gamma_{i,j} is (1/k) sum_t eta^{it} diag[j][t].
    let inv_k = real(1.0 / k as f64);
    for j in 0..k {
        let mut diag = vec![ZERO; k];
        for (t, slot) in diag.iter_mut().enumerate() {
            for r in 0..k {
                let s = (r + k - t) % k;
                *slot += kappa[(r, s)] * omega[((r + j) % k, (s + j) % k)];
            }
        }
        for i in 0..k {
            let acc: C64 = diag
                .iter()
                .enumerate()
                .map(|(t, v)| eta.at(i * t) * v)
                .sum();
            gamma[(i, j)] += acc * inv_k;
        }
    }

    // Partial DFTs along the first index: a_hat[(j, u)] = sum_i alpha_{i,j} eta^{iu}.
    let partial_dft = |m: &CMatrix| {
        let mut out = CMatrix::zeros(k, k);
        for j in 0..k {
            for u in 0..k {
                out[(j, u)] = (0..k).map(|i| m[(i, j)] * eta.at(i * u)).sum();
            }
        }
        out
    };
    let a_hat = partial_dft(alpha);
    let b_hat = partial_dft(beta);

    let mut theta = CMatrix::zeros(k, k);
    for r in 0..k {
        for s in 0..k {
            let u = (s + k - r) % k;
            let mut acc = ZERO;
            for j in 0..k {
                acc += a_hat[(j, u)] * omega[((r + j) % k, (s + j) % k)];
                acc += b_hat[(j, u)] * kappa[((r + k - j) % k, (s + k - j) % k)];
            }
            theta[(r, s)] = acc;
        }
    }

    Ok(Functional {
        k,
        alpha: gamma,
        kappa: theta,
    })
}

/// Convolution evaluated from its definition: `(mu (x) nu)` applied to the
/// comultiplication of every basis vector. Slow; a correctness reference.
pub fn convolve_oracle(mu: &Functional, nu: &Functional) -> Result<Functional> {
    check_same(mu.k, nu.k)?;
    let k = mu.k;
    let mut out = Functional::zero(k)?;
    for label in BasisLabel::all(k) {
        let delta = AlgebraElement::basis(k, label)?.comultiply();
        let value = tensor_pair_apply(mu, nu, &delta)?;
        match label {
            BasisLabel::D(i, j) => out.alpha[(i, j)] = value,
            BasisLabel::E(r, s) => out.kappa[(r, s)] = value,
        }
    }
    Ok(out)
}

/// `mu^{*n}` by repeated squaring.
pub fn convolve_power(mu: &Functional, n: u64) -> Result<Functional> {
    if n == 0 {
        return Err(SekineError::ZeroPower);
    }
    let mut base = mu.clone();
    let mut acc: Option<Functional> = None;
    let mut e = n;
    loop {
        if e & 1 == 1 {
            acc = Some(match acc {
                None => base.clone(),
                Some(a) => convolve(&a, &base)?,
            });
        }
        e >>= 1;
        if e == 0 {
            break;
        }
        base = convolve(&base, &base)?;
    }
    Ok(acc.expect("n >= 1"))
}

/// Outcome of the positivity and normalization checks.
#[derive(Clone, Debug, Serialize)]
pub struct StateReport {
    /// Smallest real part among the `alpha` entries.
    pub alpha_min: f64,
    /// Largest imaginary part (in modulus) among the `alpha` entries.
    pub alpha_max_imag: f64,
    /// `max |kappa - kappa^*|`.
    pub kappa_hermitian_residual: f64,
    /// Smallest eigenvalue of the Hermitian part of `kappa`.
    pub kappa_min_eigenvalue: f64,
    /// `|sum alpha + tr kappa - 1|`.
    pub normalization_residual: f64,
    pub tol: f64,
    pub pass: bool,
}

impl StateReport {
    pub fn positivity_ok(&self) -> bool {
        self.alpha_min >= -self.tol
            && self.alpha_max_imag <= self.tol
            && self.kappa_hermitian_residual <= self.tol
            && self.kappa_min_eigenvalue >= -self.tol
    }
}

/// Smallest eigenvalue of a Hermitian matrix.
pub fn min_hermitian_eigenvalue(m: &CMatrix) -> f64 {
    let herm = (m + m.adjoint()) * real(0.5);
    herm.symmetric_eigenvalues()
        .iter()
        .copied()
        .fold(f64::INFINITY, f64::min)
}

pub fn is_state(f: &Functional, tol: f64) -> StateReport {
    let alpha_min = f.alpha.iter().map(|z| z.re).fold(f64::INFINITY, f64::min);
    let alpha_max_imag = f.alpha.iter().map(|z| z.im.abs()).fold(0.0, f64::max);
    let kappa_hermitian_residual = linf(&f.kappa, &f.kappa.adjoint());
    let kappa_min_eigenvalue = min_hermitian_eigenvalue(&f.kappa);
    let normalization_residual = (f.total_mass() - ONE).norm();
    let mut report = StateReport {
        alpha_min,
        alpha_max_imag,
        kappa_hermitian_residual,
        kappa_min_eigenvalue,
        normalization_residual,
        tol,
        pass: false,
    };
    report.pass = report.positivity_ok() && normalization_residual <= tol;
    report
}

#[derive(Clone, Debug, Serialize)]
pub struct IdempotencyReport {
    /// Max violation of `alpha = alpha*alpha + (1/k) sum eta kappa kappa`.
    pub residual_a: f64,
    /// Max violation of the fixed-point equation for `kappa`.
    pub residual_b: f64,
    /// `|sum alpha + tr kappa - 1|`.
    pub residual_c: f64,
    /// `|mu * mu - mu|` through the closed-form convolution.
    pub convolution_residual: f64,
    pub state: StateReport,
    pub tol: f64,
    pub pass: bool,
}

impl IdempotencyReport {
    pub fn max_residual(&self) -> f64 {
        self.residual_a
            .max(self.residual_b)
            .max(self.residual_c)
            .max(self.convolution_residual)
    }
}

/// Checks the idempotent-state equations term by term, independently of
/// [`convolve`], and cross-checks with the convolution fixed point.
pub fn idempotency_report(f: &Functional, tol: f64) -> IdempotencyReport {
    let k = f.k;
    let ki = k as i64;
    let eta = RootsOfUnity::new(k);
    let idx = |x: i64| x.rem_euclid(ki) as usize;
    let a = |i: i64, j: i64| f.alpha[(idx(i), idx(j))];
    let kap = |r: i64, s: i64| f.kappa[(idx(r), idx(s))];

    let mut residual_a: f64 = 0.0;
    for i in 0..ki {
        for j in 0..ki {
            let mut rhs = ZERO;
            for r in 0..ki {
                for s in 0..ki {
                    rhs += a(i - r, j - s) * a(r, s);
                    rhs += eta.pow(i * (r - s)) * kap(r, s) * kap(r + j, s + j) / k as f64;
                }
            }
            residual_a = residual_a.max((a(i, j) - rhs).norm());
        }
    }

    let mut residual_b: f64 = 0.0;
    for r in 0..ki {
        for s in 0..ki {
            let mut rhs = ZERO;
            for i in 0..ki {
                for j in 0..ki {
                    rhs += eta.pow(i * (s - r)) * a(i, j) * (kap(r + j, s + j) + kap(r - j, s - j));
                }
            }
            residual_b = residual_b.max((kap(r, s) - rhs).norm());
        }
    }

    let residual_c = (f.total_mass() - ONE).norm();
    let convolution_residual = convolve(f, f)
        .map(|ff| ff.distance(f))
        .unwrap_or(f64::INFINITY);
    let state = is_state(f, tol);
    let pass = state.positivity_ok()
        && residual_a <= tol
        && residual_b <= tol
        && residual_c <= tol
        && convolution_residual <= tol;
    IdempotencyReport {
        residual_a,
        residual_b,
        residual_c,
        convolution_residual,
        state,
        tol,
        pass,
    }
}

/// `mu_hat(pi_{p,q}) = [[mu(rho_{p,q}), mu(sigma_{p,-q})], [mu(sigma_{p,q}), mu(rho_{p,-q})]]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FourierMatrix {
    pub p: usize,
    pub q: usize,
    pub matrix: Matrix2<C64>,
}

impl FourierMatrix {
    pub fn is_zero(&self, tol: f64) -> bool {
        self.matrix.iter().all(|z| z.norm() <= tol)
    }

    pub fn is_identity(&self, tol: f64) -> bool {
        (self.matrix - Matrix2::identity()).iter().all(|z| z.norm() <= tol)
    }

    pub fn distance(&self, other: &Matrix2<C64>) -> f64 {
        (self.matrix - other).iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Eigenvalues from the characteristic polynomial.
    pub fn eigenvalues(&self) -> [C64; 2] {
        let m = &self.matrix;
        let tr = m[(0, 0)] + m[(1, 1)];
        let det = m[(0, 0)] * m[(1, 1)] - m[(0, 1)] * m[(1, 0)];
        let disc = (tr * tr - det * 4.0).sqrt();
        [(tr + disc) * 0.5, (tr - disc) * 0.5]
    }

    /// Largest singular value.
    pub fn operator_norm(&self) -> f64 {
        let g = self.matrix.adjoint() * self.matrix;
        let (a, d) = (g[(0, 0)].re, g[(1, 1)].re);
        let half_gap = (0.25 * (a - d) * (a - d) + g[(0, 1)].norm_sqr()).sqrt();
        (0.5 * (a + d) + half_gap).max(0.0).sqrt()
    }
}

/// `mu(rho_{p,q}) = sum_{m,n} alpha_{m,n} eta^{mp+nq}`.
pub fn eval_rho(f: &Functional, eta: &RootsOfUnity, p: usize, q: usize) -> C64 {
    let k = f.k;
    let mut acc = ZERO;
    for m in 0..k {
        for n in 0..k {
            acc += f.alpha[(m, n)] * eta.at(m * p + n * q);
        }
    }
    acc
}

/// `mu(sigma_{p,q}) = sum_i kappa_{i,i+p} eta^{iq}`.
pub fn eval_sigma(f: &Functional, eta: &RootsOfUnity, p: usize, q: usize) -> C64 {
    let k = f.k;
    (0..k)
        .map(|i| f.kappa[(i, (i + p) % k)] * eta.at(i * q))
        .sum()
}

pub fn fourier(f: &Functional, p: usize, q: usize) -> FourierMatrix {
    let eta = RootsOfUnity::new(f.k);
    fourier_with(f, &eta, p, q)
}

fn fourier_with(f: &Functional, eta: &RootsOfUnity, p: usize, q: usize) -> FourierMatrix {
    let k = f.k;
    let (p, q) = (p % k, q % k);
    let mq = (k - q) % k;
    FourierMatrix {
        p,
        q,
        matrix: Matrix2::new(
            eval_rho(f, eta, p, q),
            eval_sigma(f, eta, p, mq),
            eval_sigma(f, eta, p, q),
            eval_rho(f, eta, p, mq),
        ),
    }
}

pub fn fourier_all(f: &Functional) -> BTreeMap<(usize, usize), FourierMatrix> {
    let eta = RootsOfUnity::new(f.k);
    let mut out = BTreeMap::new();
    for p in 0..f.k {
        for q in 0..f.k {
            out.insert((p, q), fourier_with(f, &eta, p, q));
        }
    }
    out
}

/// Max-abs entry of `alpha` and `kappa`, handy for scale-aware residuals.
pub fn magnitude(f: &Functional) -> f64 {
    max_abs(&f.alpha).max(max_abs(&f.kappa))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn evaluate_basics() {
        let eps = Functional::counit(3).unwrap();
        let d00 = AlgebraElement::d(3, 0, 0).unwrap();
        assert_eq!(eps.evaluate(&d00).unwrap(), ONE);
        let h = Functional::haar(3).unwrap();
        let one = AlgebraElement::unit(3).unwrap();
        assert!((h.evaluate(&one).unwrap() - ONE).norm() < 1e-15);
        let e11 = AlgebraElement::e(3, 1, 1).unwrap();
        assert!((h.evaluate(&e11).unwrap() - real(1.0 / 6.0)).norm() < 1e-15);
        assert!(matches!(
            h.evaluate(&AlgebraElement::unit(2).unwrap()),
            Err(SekineError::OrderMismatch { .. })
        ));
    }

    #[test]
    fn point_masses_add_indices() {
        for k in 2..=5 {
            for (a, b, c2, d) in [(1, 0, 1, 0), (1, 2, 3, 4), (0, 1, 2, 2)] {
                let x = Functional::point_mass(k, a % k, b % k).unwrap();
                let y = Functional::point_mass(k, c2 % k, d % k).unwrap();
                let want = Functional::point_mass(k, (a + c2) % k, (b + d) % k).unwrap();
                assert!(convolve(&x, &y).unwrap().distance(&want) < 1e-14);
            }
        }
    }

    #[test]
    fn haar_is_idempotent() {
        for k in 2..=6 {
            let h = Functional::haar(k).unwrap();
            assert!(convolve(&h, &h).unwrap().distance(&h) < 1e-14);
            assert!(idempotency_report(&h, 1e-9).pass);
        }
    }

    #[test]
    fn power_of_point_mass_k2() {
        let d10 = Functional::point_mass(2, 1, 0).unwrap();
        let sq = convolve_power(&d10, 2).unwrap();
        assert!(sq.distance(&Functional::counit(2).unwrap()) < 1e-15);
        assert_eq!(convolve_power(&d10, 1).unwrap(), d10);
        assert!(matches!(convolve_power(&d10, 0), Err(SekineError::ZeroPower)));
    }

    #[test]
    fn state_report_failures() {
        let mut f = Functional::haar(3).unwrap();
        f.alpha[(0, 0)] = real(-1.0);
        let r = is_state(&f, 1e-9);
        assert!(!r.pass && !r.positivity_ok());

        let half_e01 = Functional::matrix_dual(3, 0, 1).unwrap().scale(0.5);
        let r = is_state(&half_e01, 1e-9);
        assert!(r.kappa_hermitian_residual > 0.4);
        assert!(!r.pass);

        assert!(is_state(&Functional::haar(4).unwrap(), 1e-9).pass);
    }

    #[test]
    fn phi_l_passes() {
        // (1/2k) sum_i d~_{i,0} + 1/2 e~_{l,l}
        for k in 2..=7 {
            for l in 0..k {
                let mut f = Functional::zero(k).unwrap();
                for i in 0..k {
                    f.alpha[(i, 0)] = real(1.0 / (2.0 * k as f64));
                }
                f.kappa[(l, l)] = real(0.5);
                let rep = idempotency_report(&f, 1e-9);
                assert!(rep.pass, "k={k} l={l}: {rep:?}");
            }
        }
    }

    #[test]
    fn perturbed_uniform_state_fails_at_perturbation_scale() {
        let k = 3;
        let mut f = Functional::haar(k).unwrap();
        assert!(idempotency_report(&f, 1e-9).pass);
        f.alpha[(1, 2)] += real(1e-3);
        let rep = idempotency_report(&f, 1e-9);
        assert!(!rep.pass);
        assert!((rep.residual_c - 1e-3).abs() < 1e-12, "{rep:?}");
        for r in [rep.residual_a, rep.residual_b, rep.convolution_residual] {
            assert!(r > 1e-5 && r < 1e-2, "{rep:?}");
        }
    }

    #[test]
    fn fourier_of_counit_and_haar() {
        let k = 4;
        let eps = Functional::counit(k).unwrap();
        for fm in fourier_all(&eps).values() {
            assert!(fm.is_identity(1e-14));
        }
        let h = Functional::haar(k).unwrap();
        for ((p, q), fm) in fourier_all(&h) {
            if p == 0 && q == 0 {
                let want = Matrix2::from_element(real(0.5));
                assert!(fm.distance(&want) < 1e-14);
            } else {
                assert!(fm.is_zero(1e-14), "({p},{q})");
            }
        }
    }

    #[test]
    fn eigen_and_norm_of_known_matrix() {
        let fm = FourierMatrix {
            p: 0,
            q: 0,
            matrix: Matrix2::new(real(0.0), real(1.0), real(1.0), real(0.0)),
        };
        let ev = fm.eigenvalues();
        let mut re = [ev[0].re, ev[1].re];
        re.sort_by(f64::total_cmp);
        assert!((re[0] + 1.0).abs() < 1e-15 && (re[1] - 1.0).abs() < 1e-15);
        assert!((fm.operator_norm() - 1.0).abs() < 1e-15);
    }
}
