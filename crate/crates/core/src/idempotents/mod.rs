//! The full catalog of idempotent states on `A_k`.

mod subgroup;
mod tau;

use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use subgroup::{enumerate_subgroups, Subgroup};
pub use tau::{enumerate_tau, enumerate_tau_with_tol, TauVector};

use crate::error::{check_order, check_same, Result, SekineError};
use crate::functionals::{idempotency_report, Functional};
use crate::scalar::{real, CMatrix, DEFAULT_TOL};

/// Catalog members closer than this are considered the same state.
pub const MATCH_TOL: f64 = 1e-6;

/// Which of the four disjoint families a member belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    Haar,
    Subgroup,
    Diagonal,
    Circulant,
}

impl Family {
    /// `(sum alpha, tr kappa)` shared by every member of the family.
    pub fn masses(self) -> (f64, f64) {
        match self {
            Family::Subgroup => (1.0, 0.0),
            _ => (0.5, 0.5),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum IdempotentDescriptor {
    Haar,
    HaarSub { subgroup: Subgroup },
    TypeII { q: usize, l: usize },
    TypeIII { p: usize, l: usize, tau: TauVector },
}

impl IdempotentDescriptor {
    pub fn family(&self) -> Family {
        match self {
            Self::Haar => Family::Haar,
            Self::HaarSub { .. } => Family::Subgroup,
            Self::TypeII { .. } => Family::Diagonal,
            Self::TypeIII { .. } => Family::Circulant,
        }
    }

    /// Short text form used for node labels and tables.
    pub fn label(&self) -> String {
        match self {
            Self::Haar => "h".to_string(),
            Self::HaarSub { subgroup } if subgroup.order() == 1 => "eps".to_string(),
            Self::HaarSub { subgroup } => {
                let [(a, b), (c, d)] = subgroup.canonical_generators();
                format!("h_G[{a},{b};{c},{d}]")
            }
            Self::TypeII { q, l } => format!("h_{{{q},{l}}}"),
            Self::TypeIII { p, l, tau } => format!("h_{{{p},{l},{tau}}}"),
        }
    }

    /// Support of `alpha`: the subgroup the state is uniform on.
    pub fn gamma(&self, k: usize) -> Result<Subgroup> {
        match self {
            Self::Haar => Subgroup::product(k, 1, 1),
            Self::HaarSub { subgroup } => {
                check_same(k, subgroup.k())?;
                Ok(subgroup.clone())
            }
            Self::TypeII { q, .. } => Subgroup::product(k, 1, *q),
            Self::TypeIII { p, .. } => Subgroup::product(k, *p, k / p),
        }
    }

    pub fn build(&self, k: usize) -> Result<Functional> {
        match self {
            Self::Haar => haar_functional(k),
            Self::HaarSub { subgroup } => {
                check_same(k, subgroup.k())?;
                build_haar_sub(subgroup)
            }
            Self::TypeII { q, l } => build_type2(k, *q, *l),
            Self::TypeIII { p, l, tau } => build_type3(k, *p, *l, tau),
        }
    }
}

impl fmt::Display for IdempotentDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

pub fn haar_functional(k: usize) -> Result<Functional> {
    Functional::haar(k)
}

/// Uniform distribution on `gamma`, no matrix part.
pub fn build_haar_sub(gamma: &Subgroup) -> Result<Functional> {
    let k = gamma.k();
    let weight = real(1.0 / gamma.order() as f64);
    let mut alpha = CMatrix::zeros(k, k);
    for &(i, j) in gamma.elements() {
        alpha[(i, j)] = weight;
    }
    Functional::new(alpha, CMatrix::zeros(k, k))
}

/// Half-uniform on `Z_k x qZ_k`, diagonal matrix part on the class `l mod q`.
pub fn build_type2(k: usize, q: usize, l: usize) -> Result<Functional> {
    check_order(k)?;
    if q < 2 || !k.is_multiple_of(q) || l >= q {
        return Err(SekineError::InvalidParameter(format!(
            "type II needs q | k, q > 1, 0 <= l < q (k={k}, q={q}, l={l})"
        )));
    }
    let kf = k as f64;
    let qf = q as f64;
    let alpha = CMatrix::from_fn(k, k, |_, j| {
        if j % q == 0 {
            real(qf / (2.0 * kf * kf))
        } else {
            real(0.0)
        }
    });
    let kappa = CMatrix::from_fn(k, k, |r, s| {
        if r == s && r % q == l {
            real(qf / (2.0 * kf))
        } else {
            real(0.0)
        }
    });
    Functional::new(alpha, kappa)
}

/// Half-uniform on `pZ_k x qZ_k` (`q = k/p`), signed circulant block on the
/// class `l mod q`.
pub fn build_type3(k: usize, p: usize, l: usize, tau: &TauVector) -> Result<Functional> {
    check_order(k)?;
    if p < 2 || !k.is_multiple_of(p) {
        return Err(SekineError::InvalidParameter(format!(
            "type III needs p | k with p > 1 (k={k}, p={p})"
        )));
    }
    let q = k / p;
    if l >= q {
        return Err(SekineError::InvalidParameter(format!(
            "type III needs 0 <= l < {q}, got {l}"
        )));
    }
    if tau.k() != k || tau.q() != q || tau.values()[0] != 1 || !tau.is_positive(DEFAULT_TOL) {
        return Err(SekineError::InvalidParameter(format!(
            "tau {tau} is not a valid sign vector on {q}Z_{k}"
        )));
    }
    let kf = k as f64;
    let alpha = CMatrix::from_fn(k, k, |i, j| {
        if i % p == 0 && j % q == 0 {
            real(1.0 / (2.0 * kf))
        } else {
            real(0.0)
        }
    });
    let block = q as f64 / (2.0 * kf);
    let kappa = CMatrix::from_fn(k, k, |r, s| {
        if r % q == l && s % q == l {
            real(block * f64::from(tau.at((s + k - r) % k)))
        } else {
            real(0.0)
        }
    });
    Functional::new(alpha, kappa)
}

#[derive(Clone, Debug, Serialize)]
pub struct CatalogEntry {
    pub descriptor: IdempotentDescriptor,
    pub functional: Functional,
}

#[derive(Clone, Debug, Serialize)]
pub struct Catalog {
    pub k: usize,
    pub entries: Vec<CatalogEntry>,
}

impl Catalog {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn descriptors(&self) -> impl Iterator<Item = &IdempotentDescriptor> {
        self.entries.iter().map(|e| &e.descriptor)
    }

    pub fn position(&self, d: &IdempotentDescriptor) -> Option<usize> {
        self.entries.iter().position(|e| &e.descriptor == d)
    }

    pub fn count(&self, family: Family) -> usize {
        self.entries
            .iter()
            .filter(|e| e.descriptor.family() == family)
            .count()
    }

    /// Index and distance of the closest member.
    pub fn nearest(&self, f: &Functional) -> Result<(usize, f64)> {
        check_same(self.k, f.k())?;
        Ok(self
            .entries
            .iter()
            .enumerate()
            .map(|(i, e)| (i, e.functional.distance(f)))
            .min_by(|a, b| a.1.total_cmp(&b.1))
            .expect("catalog is never empty"))
    }

    pub fn classify(&self, f: &Functional) -> Option<&IdempotentDescriptor> {
        self.classify_within(f, MATCH_TOL)
    }

    pub fn classify_within(&self, f: &Functional, tol: f64) -> Option<&IdempotentDescriptor> {
        let (i, d) = self.nearest(f).ok()?;
        (d < tol).then(|| &self.entries[i].descriptor)
    }
}

/// Every descriptor for order `k`, in catalog order.
pub fn enumerate_descriptors(k: usize) -> Result<Vec<IdempotentDescriptor>> {
    check_order(k)?;
    let mut out = vec![IdempotentDescriptor::Haar];
    out.extend(
        enumerate_subgroups(k)?
            .into_iter()
            .map(|subgroup| IdempotentDescriptor::HaarSub { subgroup }),
    );
    let divisors: Vec<usize> = (2..=k).filter(|d| k.is_multiple_of(*d)).collect();
    for &q in &divisors {
        out.extend((0..q).map(|l| IdempotentDescriptor::TypeII { q, l }));
    }
    for &p in &divisors {
        let q = k / p;
        let taus = enumerate_tau(k, q)?;
        for l in 0..q {
            for tau in &taus {
                out.push(IdempotentDescriptor::TypeIII {
                    p,
                    l,
                    tau: tau.clone(),
                });
            }
        }
    }
    Ok(out)
}

/// Builds and verifies the whole catalog.
///
/// Fails if any member is not an idempotent state at `1e-9`, misses its
/// family's masses, or lies within [`MATCH_TOL`] of another member.
pub fn enumerate_catalog(k: usize) -> Result<Catalog> {
    let descriptors = enumerate_descriptors(k)?;
    let entries: Vec<CatalogEntry> = descriptors
        .into_par_iter()
        .map(|descriptor| {
            let functional = descriptor.build(k)?;
            let report = idempotency_report(&functional, DEFAULT_TOL);
            if !report.pass {
                return Err(SekineError::Catalog(format!(
                    "{descriptor} fails idempotency (max residual {:.3e})",
                    report.max_residual()
                )));
            }
            let (sa, tk) = descriptor.family().masses();
            if (functional.sum_alpha().re - sa).abs() > DEFAULT_TOL
                || (functional.trace_kappa().re - tk).abs() > DEFAULT_TOL
            {
                return Err(SekineError::Catalog(format!(
                    "{descriptor} has the wrong (sum alpha, tr kappa)"
                )));
            }
            Ok(CatalogEntry {
                descriptor,
                functional,
            })
        })
        .collect::<Result<_>>()?;

    let n = entries.len();
    let clash = (0..n).into_par_iter().find_map_any(|i| {
        (i + 1..n)
            .find(|&j| entries[i].functional.distance(&entries[j].functional) <= MATCH_TOL)
            .map(|j| (i, j))
    });
    if let Some((i, j)) = clash {
        return Err(SekineError::Catalog(format!(
            "{} and {} coincide",
            entries[i].descriptor, entries[j].descriptor
        )));
    }
    log::debug!("catalog for k={k}: {n} members");
    Ok(Catalog { k, entries })
}

pub fn classify<'a>(f: &Functional, catalog: &'a Catalog) -> Option<&'a IdempotentDescriptor> {
    catalog.classify(f)
}
