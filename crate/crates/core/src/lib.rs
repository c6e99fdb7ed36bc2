//! Numerical tools for univalence and quasiconformal-extension criteria of
//! analytic functions on the unit disk.
//!
//! The crate evaluates criterion functionals on disk grids, builds the
//! Löwner chains those criteria correspond to, materializes the induced
//! extension to the plane, and measures its Beltrami coefficient by finite
//! differences. Every "pass" is a statement about sampled points.

pub mod branch;
pub mod companion;
pub mod criteria;
pub mod disk;
pub mod error;
pub mod grid;
pub mod jet;
pub mod loewner;
pub mod map;
pub mod moebius;
mod par;
pub mod qc;
pub mod sector;

pub use companion::CompanionMap;
pub use criteria::{check, Criterion, CriterionKind, CriterionParams, CriterionReport};
pub use disk::{u_disk_contains, u_disk_ratio};
pub use error::{QcError, Result};
pub use grid::{AnnulusGrid, DiskGrid};
pub use jet::Jet2;
pub use loewner::{Construction, ExtensionMap, LoewnerChain};
pub use map::AnalyticMap;
pub use moebius::MoebiusMap;
pub use num_complex::Complex64;
pub use qc::{compose_dilatation, BeltramiEstimate};
pub use sector::SectorDomain;
