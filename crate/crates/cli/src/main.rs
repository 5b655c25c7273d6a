//! `sekine`: enumerate, verify, order and simulate idempotent states on `A_k`.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage or parse error.

mod format;

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use sekine_core::algebra::EtaConvention;
use sekine_core::functionals::{fourier_all, idempotency_report, Functional, IdempotencyReport};
use sekine_core::idempotents::{enumerate_catalog, Catalog};
use sekine_core::io::{catalog_to_json, read_state, state_to_json, StateFile};
use sekine_core::lattice::{
    build_order_fourier, build_order_theoretic, build_order_with_tol, export_dot, export_json,
    hasse, OrderRelation,
};
use sekine_core::selfcheck::{all_pass, selfcheck};
use sekine_core::walks::{
    cesaro, cesaro_limit, check_sufficient, check_weak_sufficient, walk_classified,
    WALK_MAX_STEPS, WALK_TOL,
};
use sekine_core::SekineError;

/// Environment variable capping the worker thread count.
const THREADS_ENV: &str = "SEKINE_THREADS";

#[derive(Parser)]
#[command(name = "sekine", version, about = "Idempotent states on the Sekine quantum groups A_k")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum CatalogFormat {
    Json,
    Table,
}

#[derive(Clone, Copy, ValueEnum)]
enum GraphFormat {
    Dot,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum ReportFormat {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// List every idempotent state with its coefficients and residuals.
    Enumerate {
        #[arg(long)]
        k: usize,
        #[arg(long, value_enum, default_value = "table")]
        format: CatalogFormat,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
    },
    /// Check whether a state file holds an idempotent state.
    Verify {
        #[arg(long)]
        state: PathBuf,
        /// Expected group order; the file's own k is used when omitted.
        #[arg(long)]
        k: Option<usize>,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
        #[arg(long, value_enum, default_value = "text")]
        format: ReportFormat,
    },
    /// Hasse diagram of the order on idempotent states.
    Lattice {
        #[arg(long)]
        k: usize,
        #[arg(long, value_enum, default_value = "dot")]
        format: GraphFormat,
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
    },
    /// Convolution powers of a state.
    Walk {
        #[arg(long)]
        state: PathBuf,
        #[arg(long, default_value_t = WALK_MAX_STEPS)]
        max_steps: usize,
        #[arg(long, default_value_t = WALK_TOL)]
        tol: f64,
        /// Also report the Cesàro average and its limit.
        #[arg(long)]
        cesaro: bool,
        /// Number of terms in the Cesàro average.
        #[arg(long, default_value_t = 10_000)]
        cesaro_terms: usize,
    },
    /// Run the algebra, representation and Fourier axiom suites.
    Selfcheck {
        #[arg(long)]
        k: usize,
        /// Use eta^{-1} in the comultiplication of the d generators (negative control).
        #[arg(long, hide = true)]
        inject_eta_flip: bool,
    },
    /// Print the Fourier matrices of a state at every label.
    Fourier {
        #[arg(long)]
        state: PathBuf,
        #[arg(long, value_enum, default_value = "text")]
        format: ReportFormat,
    },
    /// Write the state file of a catalog member.
    Emit {
        #[arg(long)]
        k: usize,
        /// Member label as printed by `enumerate`, e.g. `h`, `eps`, `h_{2,0}`.
        #[arg(long)]
        label: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

enum Failure {
    Verification(String),
    Usage(String),
}

impl From<SekineError> for Failure {
    fn from(e: SekineError) -> Self {
        match e {
            SekineError::Catalog(_) | SekineError::NotPartialOrder(_) => {
                Failure::Verification(e.to_string())
            }
            _ => Failure::Usage(e.to_string()),
        }
    }
}

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

type CmdResult = Result<(), Failure>;

fn emit(text: &str) {
    let mut out = std::io::stdout().lock();
    let _ = out.write_all(text.as_bytes());
    if !text.ends_with('\n') {
        let _ = out.write_all(b"\n");
    }
}

fn load_state(path: &Path) -> Result<Functional, Failure> {
    read_state(path).map_err(|e| Failure::Usage(e.to_string()))
}

fn cmd_enumerate(k: usize, format: CatalogFormat, tol: f64) -> CmdResult {
    let catalog = enumerate_catalog(k)?;
    match format {
        CatalogFormat::Json => emit(&catalog_to_json(&catalog, tol)?),
        CatalogFormat::Table => {
            let reports: Vec<IdempotencyReport> = catalog
                .entries
                .iter()
                .map(|e| idempotency_report(&e.functional, tol))
                .collect();
            emit(&format::catalog_table(&catalog, &reports));
        }
    }
    Ok(())
}

#[derive(Serialize)]
struct VerifyOutput<'a> {
    k: usize,
    report: &'a IdempotencyReport,
    classification: Option<String>,
}

fn cmd_verify(path: &Path, k: Option<usize>, tol: f64, format: ReportFormat) -> CmdResult {
    let f = load_state(path)?;
    if let Some(k) = k {
        if k != f.k() {
            return Err(Failure::Usage(format!(
                "state file has k={}, expected k={k}",
                f.k()
            )));
        }
    }
    let report = idempotency_report(&f, tol);
    let classification = if report.pass {
        enumerate_catalog(f.k())?.classify(&f).map(|d| d.label())
    } else {
        None
    };
    match format {
        ReportFormat::Json => emit(&serde_json::to_string_pretty(&VerifyOutput {
            k: f.k(),
            report: &report,
            classification: classification.clone(),
        })?),
        ReportFormat::Text => {
            let mut text = format::idempotency_text(&report);
            if let Some(label) = &classification {
                text.push_str(&format!("catalog member: {label}\n"));
            }
            emit(&text);
        }
    }
    if report.pass {
        Ok(())
    } else {
        Err(Failure::Verification(format!(
            "not an idempotent state (max residual {:.3e})",
            report.max_residual()
        )))
    }
}

fn describe_mismatches(name: &str, a: &OrderRelation, b: &OrderRelation) -> Option<String> {
    let m = a.mismatches(b);
    if m.is_empty() {
        return None;
    }
    let shown: Vec<String> = m
        .iter()
        .take(10)
        .map(|&(i, j)| format!("{} < {}", a.labels[i], a.labels[j]))
        .collect();
    Some(format!(
        "{name} order disagrees on {} pairs: {}",
        m.len(),
        shown.join(", ")
    ))
}

fn cmd_lattice(k: usize, format: GraphFormat, tol: f64) -> CmdResult {
    let catalog = enumerate_catalog(k)?;
    let rel = build_order_with_tol(&catalog, tol)?;
    let problems: Vec<String> = [
        describe_mismatches("fourier", &rel, &build_order_fourier(&catalog, tol)),
        describe_mismatches("theoretic", &rel, &build_order_theoretic(&catalog)),
    ]
    .into_iter()
    .flatten()
    .collect();
    if !problems.is_empty() {
        return Err(Failure::Verification(problems.join("\n")));
    }
    let hd = hasse(&rel)?;
    log::info!("k={k}: {} nodes, {} cover edges", hd.node_count(), hd.edge_count());
    match format {
        GraphFormat::Dot => emit(&export_dot(&hd)),
        GraphFormat::Json => emit(&export_json(&hd)?),
    }
    Ok(())
}

#[derive(Serialize)]
struct CesaroOutput {
    terms: usize,
    average: StateFile,
    average_idempotency_residual: f64,
    average_classification: Option<String>,
    limit: StateFile,
    limit_classification: Option<String>,
}

#[derive(Serialize)]
struct WalkOutput<'a> {
    k: usize,
    alpha00_positive: bool,
    weak_condition: bool,
    report: &'a sekine_core::walks::WalkReport,
    limit_classification: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    cesaro: Option<CesaroOutput>,
}

fn cmd_walk(path: &Path, max_steps: usize, tol: f64, with_cesaro: bool, terms: usize) -> CmdResult {
    let mu = load_state(path)?;
    let state = sekine_core::functionals::is_state(&mu, 1e-9);
    if !state.pass {
        return Err(Failure::Verification(format!(
            "input is not a state (normalization residual {:.2e}, min kappa eigenvalue {:.2e}, min alpha {:.2e})",
            state.normalization_residual, state.kappa_min_eigenvalue, state.alpha_min
        )));
    }
    let catalog: Catalog = enumerate_catalog(mu.k())?;
    let report = walk_classified(&mu, max_steps, tol, Some(&catalog))?;
    let cesaro_out = if with_cesaro {
        let avg = cesaro(&mu, terms.max(1))?;
        let limit = cesaro_limit(&mu)?;
        Some(CesaroOutput {
            terms,
            average_idempotency_residual: idempotency_report(&avg, 1e-2).max_residual(),
            average_classification: catalog.classify(&avg).map(|d| d.label()),
            average: StateFile::from(&avg),
            limit_classification: catalog.classify(&limit).map(|d| d.label()),
            limit: StateFile::from(&limit),
        })
    } else {
        None
    };
    let out = WalkOutput {
        k: mu.k(),
        alpha00_positive: check_sufficient(&mu, 1e-12),
        weak_condition: check_weak_sufficient(&mu, 1e-12),
        limit_classification: report.limit_descriptor.as_ref().map(|d| d.label()),
        report: &report,
        cesaro: cesaro_out,
    };
    emit(&serde_json::to_string_pretty(&out)?);
    Ok(())
}

fn cmd_selfcheck(k: usize, flip: bool) -> CmdResult {
    let conv = if flip {
        EtaConvention::FlippedOnD
    } else {
        EtaConvention::Standard
    };
    let results = selfcheck(k, conv)?;
    emit(&format::checks_table(k, &results));
    if all_pass(&results) {
        Ok(())
    } else {
        let failed: Vec<&str> = results
            .iter()
            .filter(|r| !r.pass)
            .map(|r| r.name.as_str())
            .collect();
        Err(Failure::Verification(format!(
            "failing properties: {}",
            failed.join(", ")
        )))
    }
}

#[derive(Serialize)]
struct FourierEntry {
    p: usize,
    q: usize,
    matrix: [[[f64; 2]; 2]; 2],
}

fn cmd_fourier(path: &Path, format: ReportFormat) -> CmdResult {
    let f = load_state(path)?;
    let values: Vec<_> = fourier_all(&f).into_values().collect();
    match format {
        ReportFormat::Text => emit(&format::fourier_table(f.k(), &values)),
        ReportFormat::Json => {
            let entries: Vec<FourierEntry> = values
                .iter()
                .map(|m| {
                    let z = |i: usize, j: usize| [m.matrix[(i, j)].re, m.matrix[(i, j)].im];
                    FourierEntry {
                        p: m.p,
                        q: m.q,
                        matrix: [[z(0, 0), z(0, 1)], [z(1, 0), z(1, 1)]],
                    }
                })
                .collect();
            emit(&serde_json::to_string_pretty(&entries)?);
        }
    }
    Ok(())
}

fn cmd_emit(k: usize, label: &str, out: Option<&PathBuf>) -> CmdResult {
    let catalog = enumerate_catalog(k)?;
    let entry = catalog
        .entries
        .iter()
        .find(|e| e.descriptor.label() == label)
        .ok_or_else(|| Failure::Usage(format!("no member labelled {label} at k={k}")))?;
    let text = state_to_json(&entry.functional)?;
    match out {
        Some(path) => std::fs::write(path, text + "\n")
            .map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?,
        None => emit(&text),
    }
    Ok(())
}

fn configure_threads() {
    let Ok(raw) = std::env::var(THREADS_ENV) else {
        return;
    };
    match raw.parse::<usize>() {
        Ok(n) if n > 0 => {
            if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
                log::warn!("could not size thread pool: {e}");
            }
        }
        _ => log::warn!("ignoring {THREADS_ENV}={raw}: expected a positive integer"),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    configure_threads();
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Enumerate { k, format, tol } => cmd_enumerate(*k, *format, *tol),
        Command::Verify {
            state,
            k,
            tol,
            format,
        } => cmd_verify(state, *k, *tol, *format),
        Command::Lattice { k, format, tol } => cmd_lattice(*k, *format, *tol),
        Command::Walk {
            state,
            max_steps,
            tol,
            cesaro,
            cesaro_terms,
        } => cmd_walk(state, *max_steps, *tol, *cesaro, *cesaro_terms),
        Command::Selfcheck { k, inject_eta_flip } => cmd_selfcheck(*k, *inject_eta_flip),
        Command::Fourier { state, format } => cmd_fourier(state, *format),
        Command::Emit { k, label, out } => cmd_emit(*k, label, out.as_ref()),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Verification(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
