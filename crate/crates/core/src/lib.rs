//! Finite frame theory toolkit.
//!
//! Frames are finite families of vectors in R^d. The crate computes their
//! optimal bounds, canonical duals and reconstructions, the common lower
//! bound over all subfamilies, tail localizations, Riesz-basis
//! extractions, and sign/subset suprema for unconditional-convergence
//! diagnostics.

pub mod error;
pub mod extraction;
pub mod frame;
pub mod gallery;
pub mod io;
pub mod linalg;
pub mod series;
pub mod subfamily;
pub mod subset;

pub use error::{Error, Result};
pub use extraction::{
    extract, perturbation_certificate, riesz_bounds_of_subset, ExtractionResult,
    PerturbationCertificate, Strategy, StrategyKind,
};
pub use frame::{DualFrame, Frame, FrameBounds, RieszCheck};
pub use linalg::{Mat, SymEigen, TolerancePolicy, Vector};
pub use series::{NormMode, SeriesFamily, SignSup, SignSupReport, SupMethod};
pub use subfamily::{
    common_bound_decay, riesz_frame_constant, subfamily_lower_bound, tail_localization,
    CertificateMethod, DecayFamily, LocalizationResult, RieszFrameCertificate,
};
pub use subset::SubsetId;
