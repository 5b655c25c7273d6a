//! Human-readable rendering of coefficients and reports.

use std::fmt::Write as _;

use sekine_core::functionals::{FourierMatrix, Functional, IdempotencyReport};
use sekine_core::idempotents::Catalog;
use sekine_core::selfcheck::CheckResult;
use sekine_core::C64;

const RATIONAL_TOL: f64 = 1e-9;

/// `x` as `a/b` when it lies within `1e-9` of a fraction with `b <= max_den`.
pub fn rational(x: f64, max_den: usize) -> String {
    if x.abs() < RATIONAL_TOL {
        return "0".into();
    }
    for den in 1..=max_den {
        let num = (x * den as f64).round();
        if (x - num / den as f64).abs() < RATIONAL_TOL {
            return if den == 1 {
                format!("{num}")
            } else {
                format!("{num}/{den}")
            };
        }
    }
    format!("{x:.6e}")
}

pub fn complex(z: C64, max_den: usize) -> String {
    if z.im.abs() < RATIONAL_TOL {
        rational(z.re, max_den)
    } else if z.re.abs() < RATIONAL_TOL {
        format!("{}i", rational(z.im, max_den))
    } else {
        let sign = if z.im < 0.0 { '-' } else { '+' };
        format!("{}{sign}{}i", rational(z.re, max_den), rational(z.im.abs(), max_den))
    }
}

/// Nonzero coefficients as `d(i,j)=x ... e(r,s)=y ...`.
pub fn coefficients(f: &Functional) -> String {
    let k = f.k();
    let max_den = 4 * k * k;
    let mut parts = Vec::new();
    for i in 0..k {
        for j in 0..k {
            let z = f.alpha()[(i, j)];
            if z.norm() > RATIONAL_TOL {
                parts.push(format!("d({i},{j})={}", complex(z, max_den)));
            }
        }
    }
    for r in 0..k {
        for s in 0..k {
            let z = f.kappa()[(r, s)];
            if z.norm() > RATIONAL_TOL {
                parts.push(format!("e({r},{s})={}", complex(z, max_den)));
            }
        }
    }
    parts.join(" ")
}

pub fn catalog_table(catalog: &Catalog, reports: &[IdempotencyReport]) -> String {
    let k = catalog.k;
    let max_den = 4 * k * k;
    let width = catalog
        .descriptors()
        .map(|d| d.label().len())
        .max()
        .unwrap_or(4)
        .max(5);
    let mut out = String::new();
    let _ = writeln!(out, "k={k}: {} idempotent states", catalog.len());
    let _ = writeln!(
        out,
        "{:>3}  {:<width$}  {:<9}  {:>7}  {:>7}  {:>9}  coefficients",
        "#", "label", "family", "sum a", "tr k", "residual"
    );
    for (i, (e, r)) in catalog.entries.iter().zip(reports).enumerate() {
        let family = format!("{:?}", e.descriptor.family()).to_lowercase();
        let _ = writeln!(
            out,
            "{i:>3}  {:<width$}  {family:<9}  {:>7}  {:>7}  {:>9.1e}  {}",
            e.descriptor.label(),
            rational(e.functional.sum_alpha().re, max_den),
            rational(e.functional.trace_kappa().re, max_den),
            r.max_residual(),
            coefficients(&e.functional),
        );
    }
    out
}

pub fn idempotency_text(r: &IdempotencyReport) -> String {
    let s = &r.state;
    let mut out = String::new();
    let _ = writeln!(out, "state check (tol {:e}): {}", s.tol, verdict(s.pass));
    let _ = writeln!(out, "  min alpha             {:.3e}", s.alpha_min);
    let _ = writeln!(out, "  max |Im alpha|        {:.3e}", s.alpha_max_imag);
    let _ = writeln!(out, "  kappa hermitian resid {:.3e}", s.kappa_hermitian_residual);
    let _ = writeln!(out, "  min kappa eigenvalue  {:.3e}", s.kappa_min_eigenvalue);
    let _ = writeln!(out, "  normalization resid   {:.3e}", s.normalization_residual);
    let _ = writeln!(out, "idempotency (tol {:e}): {}", r.tol, verdict(r.pass));
    let _ = writeln!(out, "  residual A            {:.3e}", r.residual_a);
    let _ = writeln!(out, "  residual B            {:.3e}", r.residual_b);
    let _ = writeln!(out, "  residual C            {:.3e}", r.residual_c);
    let _ = writeln!(out, "  |mu*mu - mu|          {:.3e}", r.convolution_residual);
    out
}

pub fn fourier_table(k: usize, values: &[FourierMatrix]) -> String {
    let max_den = 4 * k * k;
    let mut out = String::new();
    for m in values {
        let x = &m.matrix;
        let cell = |i: usize, j: usize| complex(x[(i, j)], max_den);
        let _ = writeln!(
            out,
            "({},{})  [[{}, {}], [{}, {}]]",
            m.p,
            m.q,
            cell(0, 0),
            cell(0, 1),
            cell(1, 0),
            cell(1, 1)
        );
    }
    out
}

pub fn checks_table(k: usize, results: &[CheckResult]) -> String {
    let mut out = String::new();
    for r in results {
        let _ = writeln!(
            out,
            "[{}] k={k} {:<45} residual {:.2e} (threshold {:.0e})",
            if r.pass { "PASS" } else { "FAIL" },
            r.name,
            r.residual,
            r.threshold
        );
    }
    out
}

fn verdict(ok: bool) -> &'static str {
    if ok {
        "pass"
    } else {
        "FAIL"
    }
}
