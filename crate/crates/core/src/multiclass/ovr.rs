use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::svm::{decision, svm_train, SvmModel, SvmTrainConfig};

use super::{argmax_class, check_dim, check_training, Classifier};

/// One binary SVM per class; model `m` separates class `m + 1` (+1) from the
/// rest (−1).
#[derive(Debug, Clone, PartialEq)]
pub struct OvrModel {
    pub(crate) models: Vec<SvmModel>,
    pub(crate) dim: usize,
}

impl OvrModel {
    pub fn models(&self) -> &[SvmModel] {
        &self.models
    }

    /// Decision values `f_m(x)` for every class.
    pub fn scores(&self, x: &[f64]) -> Result<Vec<f64>> {
        check_dim(x, self.dim)?;
        self.models.iter().map(|m| decision(m, x)).collect()
    }

    /// Number of sub-models that stopped on the iteration budget.
    pub fn not_converged(&self) -> usize {
        self.models.iter().filter(|m| !m.is_converged()).count()
    }
}

pub fn ovr_train(
    features: &[Vec<f64>],
    labels: &[usize],
    cfg: &SvmTrainConfig,
) -> Result<OvrModel> {
    let index = check_training(features, labels)?;
    let dim = features[0].len();
    let models = (1..=index.num_classes())
        .into_par_iter()
        .map(|class| {
            let y: Vec<f64> = labels
                .iter()
                .map(|&l| if l == class { 1.0 } else { -1.0 })
                .collect();
            svm_train(features, &y, cfg).map_err(|e| Error::SubModel {
                class: class.to_string(),
                source: Box::new(e),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(OvrModel { models, dim })
}

/// `argmax_m f_m(x)`, ties to the smallest class id.
pub fn ovr_predict(model: &OvrModel, x: &[f64]) -> Result<usize> {
    Ok(argmax_class(&model.scores(x)?))
}

impl Classifier for OvrModel {
    fn predict(&self, x: &[f64]) -> Result<usize> {
        ovr_predict(self, x)
    }

    fn num_classes(&self) -> usize {
        self.models.len()
    }
}
