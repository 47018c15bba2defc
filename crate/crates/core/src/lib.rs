//! Finite-dimensional Kreĭn-space linear algebra: inertia and negative
//! squares, index-preserving completions of block operators, defect and link
//! operators, and extremal selfadjoint extensions of operator columns.
//!
//! All matrices are dense `f64` ([`spectral::Mat`]). Rank and sign decisions
//! go through a single [`spectral::TolerancePolicy`].

pub mod completion;
pub mod defect;
pub mod error;
pub mod extension;
pub mod generate;
pub mod krein;
pub mod random;
pub mod spectral;
pub mod verify;

pub use error::{Error, Result};
pub use krein::{BlockSpace, FundamentalSymmetry};
pub use spectral::{Inertia, Mat, SymmetricMatrix, TolerancePolicy};
