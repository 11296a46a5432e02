use crate::dataset::Dataset;
use crate::error::{Error, Result};
use crate::kernels::KernelSpec;

use super::config::{ExperimentConfig, ExtractorKind, Method, SvmKernelChoice};
use super::experiment::{run_cell, Cell};

/// One point of a sweep curve.
#[derive(Debug, Clone, PartialEq)]
pub struct CurvePoint {
    /// The swept value (σ² or M).
    pub value: f64,
    /// Mean test error rate over completed repeats; `None` if none completed.
    pub mean_error: Option<f64>,
    pub completed: usize,
    pub repeats: usize,
}

impl CurvePoint {
    fn from_cell(value: f64, cell: &Cell) -> Self {
        Self {
            value,
            mean_error: cell.mean_rate().map(|r| 1.0 - r),
            completed: cell.completed(),
            repeats: cell.outcomes.len(),
        }
    }
}

/// The method and training size a sweep runs on: the first configured of
/// each.
fn sweep_target(cfg: &ExperimentConfig) -> Result<(Method, usize)> {
    cfg.validate()?;
    Ok((cfg.methods[0], cfg.k_train[0]))
}

/// Error rate as a function of the SVM's RBF σ². Every point uses the same
/// split seeds, so curves differ only in σ².
pub fn sweep_sigma(
    ds: &Dataset,
    cfg: &ExperimentConfig,
    sigma2_values: &[f64],
) -> Result<Vec<CurvePoint>> {
    let (method, k_train) = sweep_target(cfg)?;
    if !method.classifier.uses_svm() {
        return Err(Error::InvalidConfig(format!(
            "sigma sweep needs an SVM classifier, `{method}` has none"
        )));
    }
    let kernels: Vec<KernelSpec> = sigma2_values
        .iter()
        .map(|&s| KernelSpec::rbf(s).map_err(|e| Error::InvalidConfig(e.to_string())))
        .collect::<Result<_>>()?;
    Ok(kernels
        .iter()
        .zip(sigma2_values)
        .map(|(&kernel, &s)| {
            let cfg = ExperimentConfig {
                svm_kernel: SvmKernelChoice::Fixed(kernel),
                ..cfg.clone()
            };
            CurvePoint::from_cell(s, &run_cell(ds, k_train, &method, &cfg))
        })
        .collect())
}

/// Error rate as a function of the number of KDDA features. Every `M` must
/// lie in `1..=C − 1`.
pub fn sweep_m(
    ds: &Dataset,
    cfg: &ExperimentConfig,
    m_values: &[usize],
) -> Result<Vec<CurvePoint>> {
    let (method, k_train) = sweep_target(cfg)?;
    if method.extractor != ExtractorKind::Kdda {
        return Err(Error::InvalidConfig(format!(
            "M sweep needs a kdda extractor, got `{method}`"
        )));
    }
    let max_m = ds.num_classes() - 1;
    if let Some(&m) = m_values.iter().find(|&&m| m == 0 || m > max_m) {
        return Err(Error::InvalidConfig(format!(
            "M = {m} is outside 1..={max_m} for {} classes",
            ds.num_classes()
        )));
    }
    Ok(m_values
        .iter()
        .map(|&m| {
            let cfg = ExperimentConfig {
                m_features: m,
                ..cfg.clone()
            };
            CurvePoint::from_cell(m as f64, &run_cell(ds, k_train, &method, &cfg))
        })
        .collect())
}
