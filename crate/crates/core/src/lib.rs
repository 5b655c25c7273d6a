//! Sekine finite quantum groups `A_k`: the algebra and its comultiplication,
//! representations and Fourier transform, convolution of functionals, the
//! catalog of idempotent states with its order, and random walks.

pub mod algebra;
pub mod error;
pub mod functionals;
pub mod idempotents;
pub mod io;
pub mod lattice;
pub mod representations;
pub mod scalar;
pub mod selfcheck;
pub mod walks;

pub use algebra::{AlgebraElement, BasisLabel, EtaConvention, TensorElement};
pub use error::{Result, SekineError};
pub use functionals::{
    convolve, convolve_oracle, convolve_power, fourier, fourier_all, idempotency_report, is_state,
    FourierMatrix, Functional, IdempotencyReport, StateReport,
};
pub use idempotents::{
    classify, enumerate_catalog, Catalog, CatalogEntry, Family, IdempotentDescriptor, Subgroup,
    TauVector,
};
pub use lattice::{build_order, export_dot, hasse, HasseDiagram, OrderRelation};
pub use representations::{pi, rho, sigma, RepLabel, RepMatrix};
pub use scalar::{CMatrix, CyclicIndex, RootsOfUnity, C64, DEFAULT_TOL};
pub use walks::{cesaro, cesaro_limit, random_state, walk, WalkReport};
