//! Random walks: convolution powers of a state and their limits.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Exp1, StandardNormal};
use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::error::{Result, SekineError};
use crate::functionals::{convolve, fourier_all, is_state, Functional};
use crate::idempotents::{Catalog, IdempotentDescriptor};
use crate::scalar::{c, real, CMatrix, RootsOfUnity, C64, DEFAULT_TOL};

pub const WALK_TOL: f64 = 1e-10;
pub const WALK_MAX_STEPS: usize = 100_000;
/// Sub-tolerance steps in a row needed to call a walk converged.
pub const STREAK: usize = 3;
/// A squaring probe that has settled while single steps still move by more
/// than this means the walk is periodic.
pub const OSCILLATION_TOL: f64 = 1e-6;
/// JSON traces are thinned to at most this many points.
pub const TRACE_POINTS: usize = 1000;

#[derive(Clone, Debug, Serialize)]
pub struct SpectralEntry {
    pub p: usize,
    pub q: usize,
    pub eigenvalues: [[f64; 2]; 2],
    pub moduli: [f64; 2],
}

#[derive(Clone, Debug, Serialize)]
pub struct SpectralReport {
    pub entries: Vec<SpectralEntry>,
    pub max_modulus: f64,
    /// Every eigenvalue is either strictly inside the unit disc or equal to 1.
    pub contracting: bool,
    /// Some eigenvalue is within tolerance of `-1`.
    pub has_minus_one: bool,
    pub tol: f64,
}

impl SpectralReport {
    /// Labels carrying an eigenvalue on the unit circle other than 1.
    pub fn peripheral_labels(&self) -> Vec<(usize, usize)> {
        self.entries
            .iter()
            .filter(|e| {
                e.eigenvalues.iter().zip(e.moduli).any(|(z, m)| {
                    (m - 1.0).abs() < self.tol && (c(z[0], z[1]) - 1.0).norm() >= self.tol
                })
            })
            .map(|e| (e.p, e.q))
            .collect()
    }
}

/// Eigenvalues of every Fourier matrix of `mu`.
pub fn spectral_report(mu: &Functional, tol: f64) -> SpectralReport {
    let mut entries = Vec::new();
    let mut max_modulus: f64 = 0.0;
    let mut contracting = true;
    let mut has_minus_one = false;
    for ((p, q), m) in fourier_all(mu) {
        let ev = m.eigenvalues();
        let moduli = [ev[0].norm(), ev[1].norm()];
        for z in ev {
            max_modulus = max_modulus.max(z.norm());
            contracting &= z.norm() < 1.0 - tol || (z - 1.0).norm() < tol;
            has_minus_one |= (z + 1.0).norm() < tol;
        }
        entries.push(SpectralEntry {
            p,
            q,
            eigenvalues: [[ev[0].re, ev[0].im], [ev[1].re, ev[1].im]],
            moduli,
        });
    }
    SpectralReport {
        entries,
        max_modulus,
        contracting,
        has_minus_one,
        tol,
    }
}

fn thin_trace<S: Serializer>(trace: &[f64], s: S) -> std::result::Result<S::Ok, S::Error> {
    if trace.len() <= TRACE_POINTS {
        return trace.serialize(s);
    }
    let stride = trace.len().div_ceil(TRACE_POINTS);
    let thinned: Vec<f64> = trace.iter().step_by(stride).copied().collect();
    thinned.serialize(s)
}

#[derive(Clone, Debug, Serialize)]
pub struct WalkReport {
    pub converged: bool,
    /// Power `n` at which the final run of small steps began (or where the walk stopped).
    pub steps_used: u64,
    /// Number of convolutions actually performed.
    pub convolutions: usize,
    /// Set when a squaring probe exposed a periodic walk.
    pub periodic: bool,
    pub limit: Option<Functional>,
    pub limit_descriptor: Option<IdempotentDescriptor>,
    /// `|mu^{*(n+1)} - mu^{*n}|` after every single step.
    #[serde(serialize_with = "thin_trace")]
    pub trace: Vec<f64>,
    pub spectral: SpectralReport,
}

fn require_state(mu: &Functional) -> Result<()> {
    let report = is_state(mu, DEFAULT_TOL);
    if !report.pass {
        return Err(SekineError::InvalidParameter(format!(
            "walk input is not a state (normalization residual {:.2e}, min kappa eigenvalue {:.2e})",
            report.normalization_residual, report.kappa_min_eigenvalue
        )));
    }
    Ok(())
}

/// Iterates `x -> x * mu` until three consecutive steps move less than `tol`.
///
/// Whenever `n` is a power of two, `x * x = mu^{*2n}` is also formed. If it
/// moved the state, the walk jumps ahead to it, which makes slowly mixing walks
/// cheap. If it did not move but a single step does, the walk is periodic and
/// is abandoned.
pub fn walk(mu: &Functional, max_steps: usize, tol: f64) -> Result<WalkReport> {
    walk_classified(mu, max_steps, tol, None)
}

pub fn walk_classified(
    mu: &Functional,
    max_steps: usize,
    tol: f64,
    catalog: Option<&Catalog>,
) -> Result<WalkReport> {
    require_state(mu)?;
    let spectral = spectral_report(mu, 1e-9);
    let mut x = mu.clone();
    let mut n: u64 = 1;
    let mut streak = 0usize;
    let mut streak_start = 1u64;
    let mut trace = Vec::new();
    let mut convolutions = 0usize;
    let mut periodic = false;
    let mut converged = false;

    while convolutions < max_steps {
        let next = convolve(&x, mu)?;
        convolutions += 1;
        let step = next.distance(&x);
        trace.push(step);
        if step < tol {
            if streak == 0 {
                streak_start = n;
            }
            streak += 1;
            if streak >= STREAK {
                converged = true;
                x = next;
                n += 1;
                break;
            }
        } else {
            streak = 0;
        }

        if n.is_power_of_two() && n < (1 << 62) {
            let square = convolve(&x, &x)?;
            convolutions += 1;
            let jump = square.distance(&x);
            if jump < tol && step > OSCILLATION_TOL {
                periodic = true;
                break;
            }
            if jump >= tol {
                x = square;
                n *= 2;
                streak = 0;
                continue;
            }
        }
        x = next;
        n += 1;
    }

    let limit = converged.then_some(x);
    let limit_descriptor = match (&limit, catalog) {
        (Some(l), Some(c)) => c.classify(l).cloned(),
        _ => None,
    };
    Ok(WalkReport {
        converged,
        steps_used: if converged { streak_start } else { n },
        convolutions,
        periodic,
        limit,
        limit_descriptor,
        trace,
        spectral,
    })
}

/// `(1/N) sum_{n=1}^{N} mu^{*n}` by a running sum.
pub fn cesaro(mu: &Functional, n: usize) -> Result<Functional> {
    if n == 0 {
        return Err(SekineError::ZeroPower);
    }
    let mut power = mu.clone();
    let mut sum = mu.clone();
    for _ in 1..n {
        power = convolve(&power, mu)?;
        sum = &sum + &power;
    }
    Ok(sum.scale(1.0 / n as f64))
}

/// The limit of the Cesàro averages, to near machine precision.
///
/// The lazy walk `(eps + mu)/2` has the same eigenvalue-1 projection at every
/// Fourier label as `mu` and no other unit-modulus eigenvalue, so its powers
/// converge to the Cesàro limit. Those powers are taken by repeated squaring.
///
/// Squaring doubles any rounding error sitting on an eigenvalue equal to 1, so
/// the loop stops at the first squaring that moves less than [`CESARO_SETTLE`]
/// and the total mass is renormalized after every step.
pub fn cesaro_limit(mu: &Functional) -> Result<Functional> {
    let eps = Functional::counit(mu.k())?;
    let mut x = (&eps + mu).scale(0.5);
    for _ in 0..CESARO_MAX_SQUARINGS {
        let next = convolve(&x, &x)?;
        let next = next.scale(1.0 / next.total_mass().re);
        let moved = next.distance(&x);
        x = next;
        if moved < CESARO_SETTLE {
            break;
        }
    }
    Ok(x)
}

pub const CESARO_SETTLE: f64 = 1e-12;
/// `2^64` steps of the lazy walk; spectral gaps below `1e-18` are out of reach anyway.
pub const CESARO_MAX_SQUARINGS: usize = 64;

/// `alpha_{0,0} > tol`, which guarantees convergence of the walk.
pub fn check_sufficient(mu: &Functional, tol: f64) -> bool {
    mu.alpha()[(0, 0)].re > tol
}

/// At every label `(p, q) != (0, 0)`, the values `eta^{ip+jq}` over the
/// support of `alpha` are not all equal.
///
/// At `(0, 0)` the value set is always `{1}`, so that label is excluded.
pub fn check_weak_sufficient(mu: &Functional, tol: f64) -> bool {
    weak_condition_failures(mu, tol).is_empty()
}

/// Labels at which the value set is a singleton (or empty).
pub fn weak_condition_failures(mu: &Functional, tol: f64) -> Vec<(usize, usize)> {
    let k = mu.k();
    let support: Vec<(usize, usize)> = (0..k)
        .flat_map(|i| (0..k).map(move |j| (i, j)))
        .filter(|&(i, j)| mu.alpha()[(i, j)].norm() > tol)
        .collect();
    let mut out = Vec::new();
    for p in 0..k {
        for q in 0..k {
            if (p, q) == (0, 0) {
                continue;
            }
            let mut exps = support.iter().map(|&(i, j)| (i * p + j * q) % k);
            let first = exps.next();
            if first.is_none() || exps.all(|e| Some(e) == first) {
                out.push((p, q));
            }
        }
    }
    out
}

fn normalize(alpha: CMatrix, kappa: CMatrix) -> Result<Functional> {
    let f = Functional::new(alpha, kappa)?;
    let mass = f.total_mass().re;
    Ok(f.scale(1.0 / mass))
}

fn random_psd(rng: &mut ChaCha8Rng, k: usize, rank: usize, rows: &[bool]) -> CMatrix {
    let g = CMatrix::from_fn(rank, k, |_, j| {
        if rows[j] {
            c(rng.sample(StandardNormal), rng.sample(StandardNormal))
        } else {
            real(0.0)
        }
    });
    let mut m = g.adjoint() * g;
    // exact Hermitian symmetry, so the state check sees no rounding skew
    let herm = (&m + m.adjoint()) * real(0.5);
    m.copy_from(&herm);
    m
}

/// A dense random state: exponential `alpha`, `kappa = G^* G` for Gaussian `G`.
///
/// With `force_alpha00`, `alpha_{0,0}` is at least `0.01` after normalization.
pub fn random_state(k: usize, seed: u64, force_alpha00: bool) -> Result<Functional> {
    crate::error::check_order(k)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let alpha = CMatrix::from_fn(k, k, |_, _| real(rng.sample::<f64, _>(Exp1)));
    let weight: f64 = rng.random_range(0.05..1.0);
    let kappa = random_psd(&mut rng, k, k, &vec![true; k]) * real(weight / k as f64);
    let mut f = normalize(alpha, kappa)?;
    if force_alpha00 {
        let a00 = f.alpha()[(0, 0)].re;
        if a00 < 0.01 {
            let rest = (1.0 - 0.01) / (1.0 - a00);
            f = f.scale(rest);
            f.alpha_mut()[(0, 0)] = real(0.01);
        }
    }
    Ok(f)
}

/// A random state with sparse `alpha` support and a low-rank or zero `kappa`,
/// so that walk limits spread over the whole catalog.
pub fn random_sparse_state(k: usize, seed: u64) -> Result<Functional> {
    crate::error::check_order(k)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let density: f64 = rng.random_range(0.05..0.5);
    let mut alpha = CMatrix::from_fn(k, k, |_, _| {
        if rng.random_bool(density) {
            real(rng.random_range(0.1..1.0))
        } else {
            real(0.0)
        }
    });
    let kappa = if rng.random_bool(0.35) {
        CMatrix::zeros(k, k)
    } else {
        let rows: Vec<bool> = (0..k).map(|_| rng.random_bool(0.4)).collect();
        let rank = rng.random_range(1..=2);
        random_psd(&mut rng, k, rank, &rows)
    };
    if alpha.iter().all(|z| z.re == 0.0) && kappa.trace().re <= 0.0 {
        let i = rng.random_range(0..k);
        let j = rng.random_range(0..k);
        alpha[(i, j)] = real(1.0);
    }
    normalize(alpha, kappa)
}

/// Walks over many seeds in parallel, reporting `(seed, report)`.
pub fn walk_many(
    k: usize,
    seeds: impl IntoParallelIterator<Item = u64>,
    force_alpha00: bool,
    max_steps: usize,
    tol: f64,
) -> Result<Vec<(u64, WalkReport)>> {
    let mut out: Vec<(u64, WalkReport)> = seeds
        .into_par_iter()
        .map(|seed| {
            let mu = random_state(k, seed, force_alpha00)?;
            Ok((seed, walk(&mu, max_steps, tol)?))
        })
        .collect::<Result<_>>()?;
    out.sort_by_key(|(s, _)| *s);
    Ok(out)
}

/// `mu(rho_{p,q})` over the support, used to inspect the weak condition.
pub fn rho_values(mu: &Functional, p: usize, q: usize) -> Vec<C64> {
    let k = mu.k();
    let eta = RootsOfUnity::new(k);
    let mut out = Vec::new();
    for i in 0..k {
        for j in 0..k {
            if mu.alpha()[(i, j)].norm() > 0.0 {
                out.push(eta.at(i * p + j * q));
            }
        }
    }
    out
}
