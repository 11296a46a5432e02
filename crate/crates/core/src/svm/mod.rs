//! Binary soft-margin kernel SVM.

mod smo;

pub use smo::{dual_objective, smo_solve, SmoIterate, SmoSolution};

use crate::error::{Error, Result};
use crate::kernels::{check_samples, eval_unchecked, gram_matrix, KernelSpec};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SvmTrainConfig {
    /// Box constraint `C`.
    pub c_cost: f64,
    pub kernel: KernelSpec,
    /// KKT tolerance used both as the stopping rule and by the audit.
    pub kkt_tol: f64,
    /// Iteration budget, in units of the training-set size.
    pub max_passes: usize,
}

impl Default for SvmTrainConfig {
    fn default() -> Self {
        Self {
            c_cost: 10.0,
            kernel: KernelSpec::Rbf { sigma2: 1.0 },
            kkt_tol: 1e-3,
            max_passes: 1000,
        }
    }
}

impl SvmTrainConfig {
    pub fn new(kernel: KernelSpec, c_cost: f64) -> Self {
        Self {
            kernel,
            c_cost,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.kernel.validate()?;
        if !(self.c_cost.is_finite() && self.c_cost > 0.0) {
            return Err(Error::InvalidConfig(format!(
                "SVM cost C must be positive, got {}",
                self.c_cost
            )));
        }
        if !(self.kkt_tol.is_finite() && self.kkt_tol > 0.0) {
            return Err(Error::InvalidConfig(format!(
                "KKT tolerance must be positive, got {}",
                self.kkt_tol
            )));
        }
        if self.max_passes == 0 {
            return Err(Error::InvalidConfig("max_passes must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TrainStatus {
    Converged,
    /// The iteration budget ran out before the KKT tolerance was met.
    NotConverged,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrainStats {
    pub iterations: usize,
    pub dual_objective: f64,
    pub max_violation: f64,
}

/// Support-vector expansion `f(x) = Σ αᵢyᵢ k(xᵢ, x) + b`.
#[derive(Debug, Clone, PartialEq)]
pub struct SvmModel {
    pub(crate) support_vectors: Vec<Vec<f64>>,
    /// Indices of the support vectors in the training set.
    pub(crate) support_indices: Vec<usize>,
    /// `αᵢ yᵢ` per support vector.
    pub(crate) dual_coeffs: Vec<f64>,
    pub(crate) bias: f64,
    pub(crate) kernel: KernelSpec,
    pub(crate) c_cost: f64,
    pub(crate) dim: usize,
    pub(crate) status: TrainStatus,
    pub(crate) stats: TrainStats,
}

impl SvmModel {
    /// Assembles a model from an explicit expansion. Every `|αᵢyᵢ|` must lie
    /// in `(0, C]`.
    pub fn from_parts(
        support_vectors: Vec<Vec<f64>>,
        dual_coeffs: Vec<f64>,
        bias: f64,
        kernel: KernelSpec,
        c_cost: f64,
        dim: usize,
    ) -> Result<Self> {
        kernel.validate()?;
        if support_vectors.len() != dual_coeffs.len() {
            return Err(Error::InvalidInput(
                "support vector and coefficient counts differ".into(),
            ));
        }
        if dim == 0 || support_vectors.iter().any(|s| s.len() != dim) {
            return Err(Error::InvalidInput(
                "support vector dimension mismatch".into(),
            ));
        }
        if !bias.is_finite()
            || dual_coeffs
                .iter()
                .any(|a| !(a.is_finite() && a.abs() > 0.0 && a.abs() <= c_cost))
        {
            return Err(Error::InvalidInput(
                "dual coefficients must satisfy 0 < |αy| <= C and be finite".into(),
            ));
        }
        let n = support_vectors.len();
        Ok(Self {
            support_vectors,
            support_indices: (0..n).collect(),
            dual_coeffs,
            bias,
            kernel,
            c_cost,
            dim,
            status: TrainStatus::Converged,
            stats: TrainStats {
                iterations: 0,
                dual_objective: f64::NAN,
                max_violation: f64::NAN,
            },
        })
    }

    pub fn support_vectors(&self) -> &[Vec<f64>] {
        &self.support_vectors
    }

    pub fn support_indices(&self) -> &[usize] {
        &self.support_indices
    }

    pub fn dual_coeffs(&self) -> &[f64] {
        &self.dual_coeffs
    }

    /// `αᵢ` per support vector.
    pub fn alphas(&self) -> Vec<f64> {
        self.dual_coeffs.iter().map(|a| a.abs()).collect()
    }

    pub fn bias(&self) -> f64 {
        self.bias
    }

    pub fn kernel(&self) -> &KernelSpec {
        &self.kernel
    }

    pub fn c_cost(&self) -> f64 {
        self.c_cost
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn status(&self) -> TrainStatus {
        self.status
    }

    pub fn is_converged(&self) -> bool {
        self.status == TrainStatus::Converged
    }

    pub fn stats(&self) -> &TrainStats {
        &self.stats
    }

    pub fn decision(&self, x: &[f64]) -> Result<f64> {
        decision(self, x)
    }

    /// Checks the KKT conditions against the training set the model was
    /// fitted on.
    pub fn audit(&self, samples: &[Vec<f64>], labels: &[f64], tol: f64) -> Result<KktReport> {
        let mut alphas = vec![0.0; samples.len()];
        for (&idx, &coef) in self.support_indices.iter().zip(&self.dual_coeffs) {
            let slot = alphas.get_mut(idx).ok_or_else(|| {
                Error::InvalidInput("training set is smaller than the model's support set".into())
            })?;
            *slot = coef.abs();
        }
        kkt_audit(
            samples,
            labels,
            &alphas,
            self.bias,
            &self.kernel,
            self.c_cost,
            tol,
        )
    }
}

fn check_labels(labels: &[f64]) -> Result<()> {
    if let Some(bad) = labels.iter().find(|&&y| y != 1.0 && y != -1.0) {
        return Err(Error::InvalidInput(format!("labels must be ±1, got {bad}")));
    }
    let pos = labels.iter().any(|&y| y > 0.0);
    let neg = labels.iter().any(|&y| y < 0.0);
    if !(pos && neg) {
        return Err(Error::InvalidInput(
            "binary SVM training needs both +1 and -1 labels".into(),
        ));
    }
    Ok(())
}

/// Trains a binary SVM by SMO. Running out of iterations is not an error:
/// the model is returned with [`TrainStatus::NotConverged`].
pub fn svm_train(samples: &[Vec<f64>], labels: &[f64], cfg: &SvmTrainConfig) -> Result<SvmModel> {
    svm_train_observed(samples, labels, cfg, None)
}

/// [`svm_train`] with a callback invoked after every SMO update.
pub fn svm_train_observed(
    samples: &[Vec<f64>],
    labels: &[f64],
    cfg: &SvmTrainConfig,
    observer: Option<&mut dyn FnMut(&SmoIterate<'_>)>,
) -> Result<SvmModel> {
    cfg.validate()?;
    let dim = check_samples(samples)?;
    if samples.len() != labels.len() {
        return Err(Error::InvalidInput(format!(
            "{} samples but {} labels",
            samples.len(),
            labels.len()
        )));
    }
    if samples.len() < 2 {
        return Err(Error::InvalidInput(
            "SVM training needs at least two samples".into(),
        ));
    }
    check_labels(labels)?;

    // The full Gram matrix is the row cache; problem sizes here are small.
    let gram = gram_matrix(&cfg.kernel, samples)?;
    let max_iter = cfg.max_passes.saturating_mul(samples.len());
    let sol = smo_solve(&gram, labels, cfg.c_cost, cfg.kkt_tol, max_iter, observer);

    let support_indices: Vec<usize> = (0..samples.len())
        .filter(|&i| sol.alphas[i] > 0.0)
        .collect();
    Ok(SvmModel {
        support_vectors: support_indices
            .iter()
            .map(|&i| samples[i].clone())
            .collect(),
        dual_coeffs: support_indices
            .iter()
            .map(|&i| sol.alphas[i] * labels[i])
            .collect(),
        support_indices,
        bias: sol.bias,
        kernel: cfg.kernel,
        c_cost: cfg.c_cost,
        dim,
        status: if sol.converged {
            TrainStatus::Converged
        } else {
            TrainStatus::NotConverged
        },
        stats: TrainStats {
            iterations: sol.iterations,
            dual_objective: sol.dual_objective,
            max_violation: sol.max_violation,
        },
    })
}

/// `f(x) = Σ αᵢyᵢ k(xᵢ, x) + b`.
pub fn decision(model: &SvmModel, x: &[f64]) -> Result<f64> {
    if x.len() != model.dim {
        return Err(Error::InvalidInput(format!(
            "sample has dimension {}, model expects {}",
            x.len(),
            model.dim
        )));
    }
    let sum: f64 = model
        .support_vectors
        .iter()
        .zip(&model.dual_coeffs)
        .map(|(sv, &coef)| coef * eval_unchecked(&model.kernel, sv, x))
        .sum();
    Ok(sum + model.bias)
}

/// One failed KKT condition.
#[derive(Debug, Clone, PartialEq)]
pub struct KktViolation {
    pub index: usize,
    pub alpha: f64,
    /// `yᵢ f(xᵢ)`.
    pub margin: f64,
    pub amount: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct KktReport {
    pub max_violation: f64,
    /// `|Σ αᵢ yᵢ|`.
    pub equality_residual: f64,
    pub violations: Vec<KktViolation>,
}

impl KktReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Audits the KKT conditions of a dual solution at tolerance `tol`:
/// free vectors satisfy `|yf − 1| ≤ tol`, `α = 0` requires `yf ≥ 1 − tol`,
/// `α = C` requires `yf ≤ 1 + tol`; box and equality constraints must hold.
pub fn kkt_audit(
    samples: &[Vec<f64>],
    labels: &[f64],
    alphas: &[f64],
    bias: f64,
    kernel: &KernelSpec,
    c: f64,
    tol: f64,
) -> Result<KktReport> {
    check_samples(samples)?;
    if labels.len() != samples.len() || alphas.len() != samples.len() {
        return Err(Error::InvalidInput(
            "samples, labels and alphas differ in length".into(),
        ));
    }
    let equality_residual = alphas
        .iter()
        .zip(labels)
        .map(|(a, y)| a * y)
        .sum::<f64>()
        .abs();
    let mut violations = Vec::new();
    let mut max_violation = 0.0_f64;
    for (i, x) in samples.iter().enumerate() {
        let f: f64 = samples
            .iter()
            .zip(alphas)
            .zip(labels)
            .filter(|((_, &a), _)| a != 0.0)
            .map(|((s, &a), &y)| a * y * eval_unchecked(kernel, s, x))
            .sum::<f64>()
            + bias;
        let margin = labels[i] * f;
        let a = alphas[i];
        let amount = if a < 0.0 || a > c {
            f64::INFINITY
        } else if a == 0.0 {
            (1.0 - margin).max(0.0)
        } else if a == c {
            (margin - 1.0).max(0.0)
        } else {
            (margin - 1.0).abs()
        };
        max_violation = max_violation.max(amount);
        if amount > tol {
            violations.push(KktViolation {
                index: i,
                alpha: a,
                margin,
                amount,
            });
        }
    }
    if equality_residual > 1e-8 {
        violations.push(KktViolation {
            index: usize::MAX,
            alpha: f64::NAN,
            margin: f64::NAN,
            amount: equality_residual,
        });
    }
    Ok(KktReport {
        max_violation,
        equality_residual,
        violations,
    })
}
