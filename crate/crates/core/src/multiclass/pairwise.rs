use std::f64::consts::PI;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::svm::{decision, svm_train, SvmModel, SvmTrainConfig};

use super::{argmax_class, check_dim, check_training, Classifier};

/// Smallest standard deviation used for a class's decision-value Gaussian.
pub const STDDEV_FLOOR: f64 = 1e-6;

/// Gaussian fitted to one class's decision values on its own training data.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecisionStats {
    pub mean: f64,
    pub stddev: f64,
}

impl DecisionStats {
    /// Population mean and standard deviation, with the deviation floored at
    /// [`STDDEV_FLOOR`].
    pub fn fit(values: &[f64]) -> Self {
        let n = values.len() as f64;
        let mean = values.iter().sum::<f64>() / n;
        let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n;
        Self {
            mean,
            stddev: var.sqrt().max(STDDEV_FLOOR),
        }
    }

    pub fn density(&self, f: f64) -> f64 {
        gaussian_pdf(f, self.mean, self.stddev)
    }
}

pub fn gaussian_pdf(x: f64, mean: f64, stddev: f64) -> f64 {
    let z = (x - mean) / stddev;
    (-0.5 * z * z).exp() / (stddev * (2.0 * PI).sqrt())
}

/// Binary SVM for classes `first < second` (`first` labelled +1).
#[derive(Debug, Clone, PartialEq)]
pub struct PairModel {
    pub first: usize,
    pub second: usize,
    pub model: SvmModel,
    pub first_stats: DecisionStats,
    pub second_stats: DecisionStats,
}

impl PairModel {
    /// `p(first | x, first or second)` from the decision value `f`. When both
    /// densities underflow the pair is uninformative and yields 0.5.
    pub fn probability_first(&self, f: f64) -> f64 {
        let g1 = self.first_stats.density(f);
        let g2 = self.second_stats.density(f);
        let total = g1 + g2;
        if total > 0.0 {
            g1 / total
        } else {
            0.5
        }
    }
}

/// `k(k−1)/2` binary SVMs, one per unordered class pair.
#[derive(Debug, Clone, PartialEq)]
pub struct PairwiseModel {
    pub(crate) pairs: Vec<PairModel>,
    pub(crate) classes: usize,
    pub(crate) dim: usize,
}

impl PairwiseModel {
    pub fn pairs(&self) -> &[PairModel] {
        &self.pairs
    }

    /// `k×k` table of pairwise probabilities `p_ij`; the diagonal is zero.
    pub fn probabilities(&self, x: &[f64]) -> Result<Vec<Vec<f64>>> {
        check_dim(x, self.dim)?;
        let mut p = vec![vec![0.0; self.classes]; self.classes];
        for pair in &self.pairs {
            let f = decision(&pair.model, x)?;
            let pij = pair.probability_first(f);
            p[pair.first - 1][pair.second - 1] = pij;
            p[pair.second - 1][pair.first - 1] = 1.0 - pij;
        }
        Ok(p)
    }

    /// Class scores `Σ_{j≠i} p_ij`.
    pub fn scores(&self, x: &[f64]) -> Result<Vec<f64>> {
        Ok(self
            .probabilities(x)?
            .iter()
            .map(|row| row.iter().sum())
            .collect())
    }

    pub fn not_converged(&self) -> usize {
        self.pairs
            .iter()
            .filter(|p| !p.model.is_converged())
            .count()
    }
}

pub fn pairwise_train(
    features: &[Vec<f64>],
    labels: &[usize],
    cfg: &SvmTrainConfig,
) -> Result<PairwiseModel> {
    let index = check_training(features, labels)?;
    let k = index.num_classes();
    let dim = features[0].len();
    let pair_ids: Vec<(usize, usize)> = (1..=k)
        .flat_map(|i| ((i + 1)..=k).map(move |j| (i, j)))
        .collect();

    let pairs = pair_ids
        .into_par_iter()
        .map(|(first, second)| {
            let (x, y): (Vec<Vec<f64>>, Vec<f64>) = features
                .iter()
                .zip(labels)
                .filter(|(_, &l)| l == first || l == second)
                .map(|(f, &l)| (f.clone(), if l == first { 1.0 } else { -1.0 }))
                .unzip();
            let model = svm_train(&x, &y, cfg).map_err(|e| Error::SubModel {
                class: format!("{first}-vs-{second}"),
                source: Box::new(e),
            })?;
            let mut first_values = Vec::new();
            let mut second_values = Vec::new();
            for (xi, &yi) in x.iter().zip(&y) {
                let f = decision(&model, xi)?;
                if yi > 0.0 {
                    first_values.push(f);
                } else {
                    second_values.push(f);
                }
            }
            Ok(PairModel {
                first,
                second,
                model,
                first_stats: DecisionStats::fit(&first_values),
                second_stats: DecisionStats::fit(&second_values),
            })
        })
        .collect::<Result<Vec<_>>>()?;

    Ok(PairwiseModel {
        pairs,
        classes: k,
        dim,
    })
}

/// Probability-sum voting over the pairwise classifiers.
pub fn pairwise_predict(model: &PairwiseModel, x: &[f64]) -> Result<usize> {
    Ok(argmax_class(&model.scores(x)?))
}

impl Classifier for PairwiseModel {
    fn predict(&self, x: &[f64]) -> Result<usize> {
        pairwise_predict(self, x)
    }

    fn num_classes(&self) -> usize {
        self.classes
    }
}
