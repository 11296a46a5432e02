//! Kernel-space feature extraction: KDDA (discriminant) and KPCA (baseline).

mod kdda;
mod kpca;
mod labels;

pub use kdda::{kdda_fit, kdda_transform, KddaDiagnostics, KddaModel, BETWEEN_EIG_TOL};
pub use kpca::{kpca_fit, kpca_transform, KpcaModel, KPCA_EIG_TOL};
pub use labels::ClassIndex;
