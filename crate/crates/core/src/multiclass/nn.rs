use crate::error::Result;
use crate::numerics::squared_distance;

use super::{check_dim, check_training, Classifier};

/// Euclidean 1-nearest-neighbour classifier.
#[derive(Debug, Clone, PartialEq)]
pub struct NnModel {
    pub(crate) samples: Vec<Vec<f64>>,
    pub(crate) labels: Vec<usize>,
    pub(crate) classes: usize,
}

impl NnModel {
    pub fn samples(&self) -> &[Vec<f64>] {
        &self.samples
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }
}

/// Stores the training set. Unlike the SVM schemes a single class is
/// accepted.
pub fn nn_train(features: &[Vec<f64>], labels: &[usize]) -> Result<NnModel> {
    let classes = match check_training(features, labels) {
        Ok(index) => index.num_classes(),
        Err(_) if features.len() == labels.len() && labels.iter().all(|&l| l == 1) => {
            crate::kernels::check_samples(features)?;
            1
        }
        Err(e) => return Err(e),
    };
    Ok(NnModel {
        samples: features.to_vec(),
        labels: labels.to_vec(),
        classes,
    })
}

/// Label of the nearest stored vector; ties go to the earliest stored one.
pub fn nn_predict(model: &NnModel, x: &[f64]) -> Result<usize> {
    check_dim(x, model.samples[0].len())?;
    let mut best = 0;
    let mut best_d = f64::INFINITY;
    for (i, s) in model.samples.iter().enumerate() {
        let d = squared_distance(s, x);
        if d < best_d {
            best = i;
            best_d = d;
        }
    }
    Ok(model.labels[best])
}

impl Classifier for NnModel {
    fn predict(&self, x: &[f64]) -> Result<usize> {
        nn_predict(self, x)
    }

    fn num_classes(&self) -> usize {
        self.classes
    }
}
