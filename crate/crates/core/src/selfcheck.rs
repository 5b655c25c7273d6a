//! Axiom suites for the algebra, its representations and the Fourier transform.
//!
//! Every check reports a named residual against a threshold, so a failure
//! points at the property that broke.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::Serialize;

use crate::algebra::{
    comultiply_with, tensor_pair_apply, AlgebraElement, BasisLabel, EtaConvention, TensorElement,
    TripleTensor,
};
use crate::error::{check_order, Result};
use crate::functionals::{convolve, fourier, is_state, Functional};
use crate::representations::{
    character_residual, decompose_characters, irrep_inventory, pi, rho, sigma,
};
use crate::scalar::{c, CMatrix, RootsOfUnity, C64};
use crate::walks::random_state;

pub const AXIOM_TOL: f64 = 1e-12;
pub const HOMOMORPHISM_TOL: f64 = 1e-9;
pub const CONVOLUTION_TOL: f64 = 1e-10;

#[derive(Clone, Debug, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub residual: f64,
    pub threshold: f64,
    pub pass: bool,
}

impl CheckResult {
    pub fn new(name: impl Into<String>, residual: f64, threshold: f64) -> Self {
        Self {
            name: name.into(),
            residual,
            threshold,
            pass: residual.is_finite() && residual < threshold,
        }
    }
}

pub fn all_pass(results: &[CheckResult]) -> bool {
    results.iter().all(|r| r.pass)
}

pub fn random_element(rng: &mut ChaCha8Rng, k: usize) -> Result<AlgebraElement> {
    let mut gauss = || c(rng.sample(StandardNormal), rng.sample(StandardNormal));
    let d = CMatrix::from_fn(k, k, |_, _| gauss());
    let m = CMatrix::from_fn(k, k, |_, _| gauss());
    AlgebraElement::from_parts(d, m)
}

/// A few random basis vectors with random weights; keeps tensors small.
pub fn random_sparse_element(rng: &mut ChaCha8Rng, k: usize, terms: usize) -> Result<AlgebraElement> {
    let mut out = AlgebraElement::zero(k)?;
    for _ in 0..terms {
        let (i, j) = (rng.random_range(0..k), rng.random_range(0..k));
        let label = if rng.random_bool(0.5) {
            BasisLabel::D(i, j)
        } else {
            BasisLabel::E(i, j)
        };
        let w = c(rng.sample(StandardNormal), rng.sample(StandardNormal));
        out = &out + &AlgebraElement::basis(k, label)?.scale(w);
    }
    Ok(out)
}

/// A random functional with Gaussian coefficients (not a state).
pub fn random_functional(rng: &mut ChaCha8Rng, k: usize) -> Result<Functional> {
    let mut gauss = || c(rng.sample(StandardNormal), rng.sample(StandardNormal));
    let a = CMatrix::from_fn(k, k, |_, _| gauss());
    let m = CMatrix::from_fn(k, k, |_, _| gauss());
    Functional::new(a, m)
}

fn comultiply_tensor_left(t: &TensorElement, conv: EtaConvention) -> Result<TripleTensor> {
    let k = t.k();
    let mut out = TripleTensor::zero(k);
    for (&(l, r), &x) in t.terms() {
        let delta = comultiply_with(&AlgebraElement::basis(k, l)?.scale(x), conv);
        for (&(a, b), &y) in delta.terms() {
            out.add_term([a, b, r], y);
        }
    }
    Ok(out)
}

fn comultiply_tensor_right(t: &TensorElement, conv: EtaConvention) -> Result<TripleTensor> {
    let k = t.k();
    let mut out = TripleTensor::zero(k);
    for (&(l, r), &x) in t.terms() {
        let delta = comultiply_with(&AlgebraElement::basis(k, r)?.scale(x), conv);
        for (&(a, b), &y) in delta.terms() {
            out.add_term([l, a, b], y);
        }
    }
    Ok(out)
}

/// Coassociativity, counit laws, unitality, the *-homomorphism property,
/// Haar bi-invariance and the trace property.
pub fn algebra_axioms(k: usize, conv: EtaConvention, seed: u64) -> Result<Vec<CheckResult>> {
    check_order(k)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let eps = Functional::counit(k)?;
    let h = Functional::haar(k)?;
    let one = AlgebraElement::unit(k)?;

    let mut coassoc: f64 = 0.0;
    let mut counit_left: f64 = 0.0;
    let mut counit_right: f64 = 0.0;
    let mut haar_left: f64 = 0.0;
    let mut haar_right: f64 = 0.0;
    let mut adjoint: f64 = 0.0;
    for label in BasisLabel::all(k) {
        let x = AlgebraElement::basis(k, label)?;
        let delta = comultiply_with(&x, conv);
        coassoc = coassoc.max(
            comultiply_tensor_left(&delta, conv)?.distance(&comultiply_tensor_right(&delta, conv)?),
        );
        counit_left = counit_left.max(delta.slice_left(&eps)?.distance(&x));
        counit_right = counit_right.max(delta.slice_right(&eps)?.distance(&x));
        let hx = one.scale(x.haar_state());
        haar_left = haar_left.max(delta.slice_left(&h)?.distance(&hx));
        haar_right = haar_right.max(delta.slice_right(&h)?.distance(&hx));
        adjoint = adjoint.max(comultiply_with(&x.adjoint(), conv).distance(&delta.adjoint()));
    }

    let unit_tensor = TensorElement::pure(&one, &one)?;
    let unital = comultiply_with(&one, conv).distance(&unit_tensor);

    let mut multiplicative: f64 = 0.0;
    for _ in 0..8 {
        let a = random_sparse_element(&mut rng, k, 3)?;
        let b = random_sparse_element(&mut rng, k, 3)?;
        let lhs = comultiply_with(&a.multiply(&b)?, conv);
        let rhs = comultiply_with(&a, conv).multiply(&comultiply_with(&b, conv))?;
        multiplicative = multiplicative.max(lhs.distance(&rhs));
    }

    let mut trace: f64 = 0.0;
    for _ in 0..20 {
        let a = random_element(&mut rng, k)?;
        let b = random_element(&mut rng, k)?;
        let ab = a.multiply(&b)?.haar_state();
        let ba = b.multiply(&a)?.haar_state();
        trace = trace.max((ab - ba).norm());
    }

    Ok(vec![
        CheckResult::new("coassociativity", coassoc, AXIOM_TOL),
        CheckResult::new("counit law (eps x id)", counit_left, AXIOM_TOL),
        CheckResult::new("counit law (id x eps)", counit_right, AXIOM_TOL),
        CheckResult::new("comultiplication is unital", unital, AXIOM_TOL),
        CheckResult::new("comultiplication preserves adjoints", adjoint, AXIOM_TOL),
        CheckResult::new("comultiplication is multiplicative", multiplicative, HOMOMORPHISM_TOL),
        CheckResult::new("haar left invariance", haar_left, AXIOM_TOL),
        CheckResult::new("haar right invariance", haar_right, AXIOM_TOL),
        CheckResult::new("haar trace property", trace, AXIOM_TOL),
    ])
}

/// Every representation check, including those that need the comultiplication.
pub fn representation_suite(k: usize, conv: EtaConvention) -> Result<Vec<CheckResult>> {
    let mut out = representation_relations(k)?;
    out.extend(corepresentation_checks(k, conv)?);
    Ok(out)
}

/// Unitarity, the product and adjoint relations of `rho` and `sigma`, the
/// swap equivalence and the dimension count. No comultiplication involved.
pub fn representation_relations(k: usize) -> Result<Vec<CheckResult>> {
    check_order(k)?;
    let ki = k as i64;
    let eta = RootsOfUnity::new(k);
    let zero = AlgebraElement::zero(k)?;

    let mut rho_products: f64 = 0.0;
    let mut sigma_products: f64 = 0.0;
    let mut annihilation: f64 = 0.0;
    for p in 0..ki {
        for q in 0..ki {
            let r1 = rho(k, p, q)?;
            let s1 = sigma(k, p, q)?;
            for p2 in 0..ki {
                for q2 in 0..ki {
                    let r2 = rho(k, p2, q2)?;
                    let s2 = sigma(k, p2, q2)?;
                    rho_products = rho_products
                        .max(r1.multiply(&r2)?.distance(&rho(k, p + p2, q + q2)?));
                    let expected = sigma(k, p + p2, q + q2)?.scale(eta.pow(p * q2));
                    sigma_products = sigma_products.max(s1.multiply(&s2)?.distance(&expected));
                    annihilation = annihilation
                        .max(r1.multiply(&s2)?.distance(&zero))
                        .max(s2.multiply(&r1)?.distance(&zero));
                }
            }
        }
    }

    let mut adjoints: f64 = 0.0;
    let mut unitarity: f64 = 0.0;
    let mut swap: f64 = 0.0;
    for p in 0..ki {
        for q in 0..ki {
            adjoints = adjoints
                .max(rho(k, p, q)?.adjoint().distance(&rho(k, -p, -q)?))
                .max(
                    sigma(k, p, q)?
                        .adjoint()
                        .distance(&sigma(k, -p, -q)?.scale(eta.pow(p * q))),
                );
            let u = pi(k, p, q)?;
            let ustar = u.adjoint();
            unitarity = unitarity
                .max(ustar.multiply(&u)?.distance_to_identity()?)
                .max(u.multiply(&ustar)?.distance_to_identity()?);
            swap = swap.max(u.swap_conjugate().distance(&pi(k, p, -q)?));
        }
    }

    let inv = irrep_inventory(k)?;
    let char_count: usize = (0..ki)
        .map(|p| decompose_characters(k, p).map(|c| c.len()))
        .sum::<Result<usize>>()?;
    let dim_gap = (inv.dimension_total() as f64 - 2.0 * (k * k) as f64).abs()
        + (char_count as f64 - inv.one_dim_count as f64).abs();

    Ok(vec![
        CheckResult::new("rho products", rho_products, AXIOM_TOL),
        CheckResult::new("sigma products", sigma_products, AXIOM_TOL),
        CheckResult::new("rho sigma annihilation", annihilation, AXIOM_TOL),
        CheckResult::new("rho and sigma adjoints", adjoints, AXIOM_TOL),
        CheckResult::new("pi unitarity", unitarity, AXIOM_TOL),
        CheckResult::new("pi(p,q) swap-equivalent to pi(p,-q)", swap, AXIOM_TOL),
        CheckResult::new("irrep dimension count", dim_gap, 0.5),
    ])
}

/// `Delta(u_ij) = sum_l u_il (x) u_lj` for every `pi_{p,q}`, and
/// `Delta(chi) = chi (x) chi` for the one-dimensional characters.
pub fn corepresentation_checks(k: usize, conv: EtaConvention) -> Result<Vec<CheckResult>> {
    check_order(k)?;
    let ki = k as i64;
    let mut corep: f64 = 0.0;
    for p in 0..ki {
        for q in 0..ki {
            let u = pi(k, p, q)?;
            for i in 0..2 {
                for j in 0..2 {
                    let lhs = comultiply_with(&u.entries[i][j], conv);
                    let mut rhs = TensorElement::zero(k);
                    for l in 0..2 {
                        let t = TensorElement::pure(&u.entries[i][l], &u.entries[l][j])?;
                        for (&(a, b), &x) in t.terms() {
                            rhs.add_term(a, b, x);
                        }
                    }
                    corep = corep.max(lhs.distance(&rhs));
                }
            }
        }
    }
    let mut characters: f64 = 0.0;
    for p in 0..ki {
        for chi in decompose_characters(k, p)? {
            characters = characters.max(match conv {
                EtaConvention::Standard => character_residual(&chi)?,
                _ => comultiply_with(&chi, conv).distance(&TensorElement::pure(&chi, &chi)?),
            });
        }
    }
    Ok(vec![
        CheckResult::new("pi corepresentation", corep, AXIOM_TOL),
        CheckResult::new("one-dimensional characters", characters, AXIOM_TOL),
    ])
}

/// Evaluates `(mu (x) nu)` on the comultiplication of every basis vector.
pub fn convolve_by_definition(
    mu: &Functional,
    nu: &Functional,
    conv: EtaConvention,
) -> Result<Functional> {
    let k = mu.k();
    let mut out = Functional::zero(k)?;
    for label in BasisLabel::all(k) {
        let value: C64 = tensor_pair_apply(mu, nu, &comultiply_with(&AlgebraElement::basis(k, label)?, conv))?;
        match label {
            BasisLabel::D(i, j) => out.alpha_mut()[(i, j)] = value,
            BasisLabel::E(r, s) => out.kappa_mut()[(r, s)] = value,
        }
    }
    Ok(out)
}

/// Closed-form convolution against the definition, Fourier multiplicativity,
/// associativity, and the contraction bound for states.
pub fn fourier_suite(k: usize, conv: EtaConvention, seed: u64, pairs: usize) -> Result<Vec<CheckResult>> {
    check_order(k)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut oracle: f64 = 0.0;
    let mut multiplicative: f64 = 0.0;
    let mut associative: f64 = 0.0;
    for _ in 0..pairs {
        let mu = random_functional(&mut rng, k)?;
        let nu = random_functional(&mut rng, k)?;
        let xi = random_functional(&mut rng, k)?;
        let prod = convolve(&mu, &nu)?;
        oracle = oracle.max(prod.distance(&convolve_by_definition(&mu, &nu, conv)?));
        for p in 0..k {
            for q in 0..k {
                let lhs = fourier(&prod, p, q);
                let rhs = fourier(&mu, p, q).matrix * fourier(&nu, p, q).matrix;
                multiplicative = multiplicative.max(lhs.distance(&rhs));
            }
        }
        let left = convolve(&prod, &xi)?;
        let right = convolve(&mu, &convolve(&nu, &xi)?)?;
        associative = associative.max(left.distance(&right));
    }

    let mut norm_excess: f64 = 0.0;
    let mut states_ok = true;
    for s in 0..pairs.min(20) {
        let st = random_state(k, seed.wrapping_add(s as u64), false)?;
        states_ok &= is_state(&st, 1e-9).pass;
        for p in 0..k {
            for q in 0..k {
                norm_excess = norm_excess.max(fourier(&st, p, q).operator_norm() - 1.0);
            }
        }
    }
    let counit_identity = (0..k)
        .flat_map(|p| (0..k).map(move |q| (p, q)))
        .map(|(p, q)| fourier(&Functional::counit(k).unwrap(), p, q).distance(&nalgebra::Matrix2::identity()))
        .fold(0.0, f64::max);

    Ok(vec![
        CheckResult::new("closed-form convolution matches definition", oracle, CONVOLUTION_TOL),
        CheckResult::new("fourier multiplicativity", multiplicative, CONVOLUTION_TOL),
        CheckResult::new("convolution associativity", associative, CONVOLUTION_TOL),
        CheckResult::new("fourier of counit is identity", counit_identity, AXIOM_TOL),
        CheckResult::new(
            "fourier of states is contractive",
            if states_ok { norm_excess.max(0.0) } else { f64::INFINITY },
            AXIOM_TOL,
        ),
    ])
}

/// Every suite at order `k`.
pub fn selfcheck(k: usize, conv: EtaConvention) -> Result<Vec<CheckResult>> {
    let mut out = algebra_axioms(k, conv, 11)?;
    out.extend(representation_suite(k, conv)?);
    out.extend(fourier_suite(k, conv, 23, 10)?);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn standard_passes() {
        for k in 2..=4 {
            let results = selfcheck(k, EtaConvention::Standard).unwrap();
            for r in &results {
                assert!(r.pass, "k={k}: {} residual {:e}", r.name, r.residual);
            }
        }
    }

    #[test]
    fn flipped_eta_is_caught() {
        for k in 3..=4 {
            let results = selfcheck(k, EtaConvention::FlippedOnD).unwrap();
            let failed: Vec<&str> = results.iter().filter(|r| !r.pass).map(|r| r.name.as_str()).collect();
            assert!(failed.contains(&"closed-form convolution matches definition"), "k={k} {failed:?}");
        }
    }
}
