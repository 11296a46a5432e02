//! K-class classifiers over extracted feature vectors: one-vs-rest and
//! pairwise-coupled binary SVMs, and a nearest-neighbour baseline.
//!
//! Class ids are `1..=k`; every tie is resolved toward the smallest class id
//! (or earliest stored sample).

mod nn;
mod ovr;
mod pairwise;

pub use nn::{nn_predict, nn_train, NnModel};
pub use ovr::{ovr_predict, ovr_train, OvrModel};
pub use pairwise::{
    gaussian_pdf, pairwise_predict, pairwise_train, DecisionStats, PairModel, PairwiseModel,
    STDDEV_FLOOR,
};

use crate::error::{Error, Result};
use crate::extractors::ClassIndex;

/// A trained K-class predictor.
pub trait Classifier: Send + Sync {
    fn predict(&self, x: &[f64]) -> Result<usize>;

    fn num_classes(&self) -> usize;

    fn predict_many(&self, xs: &[Vec<f64>]) -> Result<Vec<usize>> {
        xs.iter().map(|x| self.predict(x)).collect()
    }
}

/// Index of the first maximum, shifted to a 1-based class id.
pub(crate) fn argmax_class(scores: &[f64]) -> usize {
    let mut best = 0;
    for (i, &s) in scores.iter().enumerate().skip(1) {
        if s > scores[best] {
            best = i;
        }
    }
    best + 1
}

/// Validates K-class training input and returns the class bookkeeping.
pub(crate) fn check_training(features: &[Vec<f64>], labels: &[usize]) -> Result<ClassIndex> {
    crate::kernels::check_samples(features)?;
    if features.len() != labels.len() {
        return Err(Error::InvalidInput(format!(
            "{} feature vectors but {} labels",
            features.len(),
            labels.len()
        )));
    }
    let index = ClassIndex::new(labels)?;
    if index.num_classes() < 2 {
        return Err(Error::InvalidInput(
            "multi-class training needs k >= 2".into(),
        ));
    }
    Ok(index)
}

pub(crate) fn check_dim(x: &[f64], dim: usize) -> Result<()> {
    if x.len() != dim {
        return Err(Error::InvalidInput(format!(
            "feature vector has dimension {}, model expects {dim}",
            x.len()
        )));
    }
    Ok(())
}
