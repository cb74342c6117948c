//! Symplectic spectra, Williamson normal forms and shadow volumes of quantum
//! covariance ellipsoids.
//!
//! A real symmetric `2n×2n` matrix `σ` is a quantum covariance matrix when
//! `σ + ½iħΩ ⪰ 0`, equivalently when every symplectic eigenvalue satisfies
//! `νⱼ ≥ ħ/2`. The crate computes:
//!
//! - the symplectic spectrum and Williamson normal form ([`spectrum`]),
//! - quantum validity by two independent routes and the Gromov width of the
//!   covariance ellipsoid ([`quantum`]),
//! - volumes of orthogonal shadows of the ellipsoid on symplectic subspaces,
//!   and randomized checks of linear non-squeezing ([`projection`]),
//! - the universal invariants `Δⱼ` by three routes ([`invariants`]).
//!
//! Phase-space vectors use the block ordering `(x₁…xₙ, p₁…pₙ)`; see
//! [`symplectic`].

#![forbid(unsafe_code)]
// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod invariants;
mod linalg;
pub mod projection;
pub mod quantum;
pub mod spectrum;
pub mod symplectic;

pub use error::{Error, Result};
pub use invariants::{
    delta_projection_identity, delta_via_charpoly, delta_via_minors, delta_via_spectrum, InvariantRoute,
    ProjectionIdentity, UniversalInvariants,
};
pub use projection::{
    ball_shadow_volume, camel_bound, check_camel, nonsqueezing_campaign, project_covariance_ellipsoid,
    random_complex_subspace, random_symplectic_subspace, CamelCheck, CampaignSummary, ProjectedEllipsoid,
    SymplecticSubspace,
};
pub use quantum::{
    gromov_width, gromov_width_from_spectrum, is_quantum_hermitian, is_quantum_spectrum, robertson_schrodinger,
    uncertainty_charpoly_factors, validity_report, QuantumValidityReport,
};
pub use spectrum::{
    apply_congruence, symplectic_eigenvalues, williamson, CovarianceMatrix, SymplecticSpectrum, WilliamsonDecomposition,
};
pub use symplectic::{
    coordinate_symplectic_subspace, is_symplectic, random_symplectic, random_symplectic_rotation, standard_form,
    symplectic_gram_schmidt, symplectic_product, Ordering, PhaseSpace, SymplecticBasis, SymplecticForm,
    SymplecticMatrix,
};
