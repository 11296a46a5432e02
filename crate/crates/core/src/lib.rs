//! Kernel direct discriminant analysis (KDDA) feature extraction combined with
//! kernel support vector machines for multi-class recognition.
//!
//! The crate is organised bottom-up:
//!
//! * [`numerics`]: dense matrices and a symmetric eigensolver.
//! * [`kernels`]: kernel functions, Gram matrices and cross-kernel vectors.
//! * [`extractors`]: KDDA (kernel direct LDA) and kernel PCA feature extraction.
//! * [`svm`]: binary soft-margin SVM trained by sequential minimal optimization.
//! * [`multiclass`]: one-vs-rest and pairwise-coupling SVMs, nearest neighbour.
//! * [`dataset`]: PGM image loading, per-class random splits, synthetic data.
//! * [`harness`]: repeated-split experiments, sweeps and CSV reports.
//! * [`persist`]: a bit-exact text container for fitted models.
//!
//! All feature-space quantities are computed through kernel evaluations only;
//! mapped vectors are never materialised.

#![allow(clippy::needless_range_loop)]

pub mod dataset;
pub mod error;
pub mod extractors;
pub mod harness;
pub mod kernels;
pub mod multiclass;
pub mod numerics;
pub mod persist;
pub mod svm;

pub use error::{Error, Result};
pub use extractors::{ClassIndex, KddaModel, KpcaModel};
pub use kernels::KernelSpec;
pub use numerics::{EigenResult, Matrix};
pub use svm::{SvmModel, SvmTrainConfig};
