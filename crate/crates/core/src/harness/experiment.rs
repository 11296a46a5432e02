use std::time::{Duration, Instant};

use rayon::prelude::*;

use crate::dataset::{split_indices, Dataset, SplitSpec};
use crate::error::{Error, Result};
use crate::extractors::{kdda_fit, kpca_fit, KddaModel, KpcaModel};
use crate::kernels::KernelSpec;
use crate::multiclass::{nn_train, ovr_train, pairwise_train, Classifier};
use crate::numerics::squared_distance;
use crate::svm::SvmTrainConfig;

use super::config::{
    ClassifierKind, CostChoice, ExperimentConfig, ExtractorKind, Method, SvmKernelChoice,
};

/// Calibration splits are drawn from seeds `seed + CALIBRATION_SEED_OFFSET + i`,
/// far from the reported repeats' `seed + r`.
pub const CALIBRATION_SEED_OFFSET: u64 = 10_000;
pub const CALIBRATION_SPLITS: u64 = 3;
/// SVM σ² candidates, as multiples of the median squared distance between
/// training feature vectors.
pub const SIGMA2_MULTIPLIERS: [f64; 5] = [0.0625, 0.25, 1.0, 4.0, 16.0];
pub const COST_GRID: [f64; 3] = [1.0, 10.0, 100.0];

/// A fitted feature extractor.
#[derive(Debug, Clone)]
pub enum Extractor {
    Kdda(KddaModel),
    Kpca(KpcaModel),
    Identity,
}

impl Extractor {
    pub fn transform_many(&self, xs: &[Vec<f64>]) -> Result<Vec<Vec<f64>>> {
        match self {
            Extractor::Kdda(m) => m.transform_many(xs),
            Extractor::Kpca(m) => m.transform_many(xs),
            Extractor::Identity => Ok(xs.to_vec()),
        }
    }
}

/// SVM hyperparameters for one cell.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SvmParams {
    pub kernel: KernelSpec,
    pub c_cost: f64,
}

/// A trained extractor + classifier.
pub struct Pipeline {
    pub extractor: Extractor,
    pub classifier: Box<dyn Classifier>,
    /// Training features, one row per training sample.
    pub train_features: Vec<Vec<f64>>,
    /// Binary SVMs that stopped on the iteration budget.
    pub not_converged: usize,
}

impl Pipeline {
    pub fn predict_many(&self, xs: &[Vec<f64>]) -> Result<Vec<usize>> {
        let features = self.extractor.transform_many(xs)?;
        self.classifier.predict_many(&features)
    }

    /// Fraction of `labels` predicted correctly.
    pub fn accuracy(&self, xs: &[Vec<f64>], labels: &[usize]) -> Result<f64> {
        let predicted = self.predict_many(xs)?;
        Ok(recognition_rate(&predicted, labels))
    }
}

pub fn recognition_rate(predicted: &[usize], labels: &[usize]) -> f64 {
    let hits = predicted.iter().zip(labels).filter(|(p, l)| p == l).count();
    hits as f64 / labels.len() as f64
}

pub fn fit_extractor(
    train: &Dataset,
    method: &Method,
    cfg: &ExperimentConfig,
) -> Result<Extractor> {
    let kernel = method.extractor_kernel.unwrap_or(cfg.extractor_kernel);
    Ok(match method.extractor {
        ExtractorKind::Kdda => Extractor::Kdda(kdda_fit(
            train.samples(),
            &train.class_index(),
            kernel,
            cfg.m_features,
        )?),
        ExtractorKind::Kpca => {
            let m = match cfg.kpca_m_features {
                0 => train.len(),
                m => m,
            };
            Extractor::Kpca(kpca_fit(train.samples(), kernel, m)?)
        }
        ExtractorKind::None => Extractor::Identity,
    })
}

fn train_classifier(
    features: &[Vec<f64>],
    labels: &[usize],
    kind: ClassifierKind,
    svm: Option<SvmParams>,
    cfg: &ExperimentConfig,
) -> Result<(Box<dyn Classifier>, usize)> {
    let svm_cfg = || -> Result<SvmTrainConfig> {
        let p =
            svm.ok_or_else(|| Error::InvalidConfig("SVM parameters were not resolved".into()))?;
        Ok(SvmTrainConfig {
            c_cost: p.c_cost,
            kernel: p.kernel,
            kkt_tol: cfg.kkt_tol,
            max_passes: cfg.max_passes,
        })
    };
    Ok(match kind {
        ClassifierKind::SvmOvr => {
            let m = ovr_train(features, labels, &svm_cfg()?)?;
            let nc = m.not_converged();
            (Box::new(m), nc)
        }
        ClassifierKind::SvmPairwise => {
            let m = pairwise_train(features, labels, &svm_cfg()?)?;
            let nc = m.not_converged();
            (Box::new(m), nc)
        }
        ClassifierKind::Nn => (Box::new(nn_train(features, labels)?), 0),
    })
}

/// Fits the full pipeline on `train`.
pub fn fit_pipeline(
    train: &Dataset,
    method: &Method,
    cfg: &ExperimentConfig,
    svm: Option<SvmParams>,
) -> Result<Pipeline> {
    let extractor = fit_extractor(train, method, cfg)?;
    let train_features = extractor.transform_many(train.samples())?;
    let (classifier, not_converged) =
        train_classifier(&train_features, train.labels(), method.classifier, svm, cfg)?;
    Ok(Pipeline {
        extractor,
        classifier,
        train_features,
        not_converged,
    })
}

/// Lower median of the pairwise squared distances (1 if they are all zero).
pub fn median_squared_distance(xs: &[Vec<f64>]) -> f64 {
    let mut d: Vec<f64> = Vec::with_capacity(xs.len() * xs.len().saturating_sub(1) / 2);
    for (i, a) in xs.iter().enumerate() {
        for b in &xs[i + 1..] {
            d.push(squared_distance(a, b));
        }
    }
    if d.is_empty() {
        return 1.0;
    }
    d.sort_by(f64::total_cmp);
    let m = d[(d.len() - 1) / 2];
    if m > 0.0 {
        m
    } else {
        1.0
    }
}

/// Train features, train labels, test features, test labels.
type CalibrationSplit = (Vec<Vec<f64>>, Vec<usize>, Vec<Vec<f64>>, Vec<usize>);

/// Resolves the SVM kernel and cost for one cell. Fixed choices are used
/// as-is; `auto` entries are chosen by mean error over
/// [`CALIBRATION_SPLITS`] splits that are disjoint in seed from the
/// reported repeats. Ties go to the earlier grid entry.
pub fn resolve_svm_params(
    ds: &Dataset,
    k_train: usize,
    method: &Method,
    cfg: &ExperimentConfig,
) -> Result<Option<SvmParams>> {
    if !method.classifier.uses_svm() {
        return Ok(None);
    }
    if let (SvmKernelChoice::Fixed(kernel), CostChoice::Fixed(c_cost)) =
        (cfg.svm_kernel, cfg.c_cost)
    {
        return Ok(Some(SvmParams { kernel, c_cost }));
    }

    let splits: Vec<CalibrationSplit> = (0..CALIBRATION_SPLITS)
        .into_par_iter()
        .map(|i| {
            let spec = SplitSpec::new(k_train, cfg.seed.wrapping_add(CALIBRATION_SEED_OFFSET), i);
            let (tr, te) = split_indices(ds, spec)?;
            let (train, test) = (ds.subset(&tr)?, ds.subset(&te)?);
            let extractor = fit_extractor(&train, method, cfg)?;
            Ok((
                extractor.transform_many(train.samples())?,
                train.labels().to_vec(),
                extractor.transform_many(test.samples())?,
                test.labels().to_vec(),
            ))
        })
        .collect::<Result<_>>()?;

    let kernels: Vec<KernelSpec> = match cfg.svm_kernel {
        SvmKernelChoice::Fixed(k) => vec![k],
        SvmKernelChoice::Auto => {
            let base = median_squared_distance(&splits[0].0);
            SIGMA2_MULTIPLIERS
                .iter()
                .map(|m| KernelSpec::rbf(base * m))
                .collect::<Result<_>>()?
        }
    };
    let costs: Vec<f64> = match cfg.c_cost {
        CostChoice::Fixed(c) => vec![c],
        CostChoice::Auto => COST_GRID.to_vec(),
    };
    let grid: Vec<SvmParams> = kernels
        .iter()
        .flat_map(|&kernel| {
            costs
                .iter()
                .map(move |&c_cost| SvmParams { kernel, c_cost })
        })
        .collect();

    let errors: Vec<f64> = grid
        .par_iter()
        .map(|&params| {
            let mut total = 0.0;
            for (xtr, ytr, xte, yte) in &splits {
                let (clf, _) = train_classifier(xtr, ytr, method.classifier, Some(params), cfg)?;
                total += 1.0 - recognition_rate(&clf.predict_many(xte)?, yte);
            }
            Ok(total / splits.len() as f64)
        })
        .collect::<Result<_>>()?;
    let mut best = 0;
    for (i, &e) in errors.iter().enumerate() {
        if e < errors[best] {
            best = i;
        }
    }
    Ok(Some(grid[best]))
}

/// Result of one repeat.
#[derive(Debug, Clone, PartialEq)]
pub struct RepeatOutcome {
    pub repeat: u64,
    /// Split seed, `base_seed + repeat`.
    pub seed: u64,
    pub result: std::result::Result<f64, String>,
    pub not_converged: usize,
}

/// All repeats of one (k_train, method) combination.
#[derive(Debug, Clone)]
pub struct Cell {
    pub k_train: usize,
    pub method: Method,
    pub svm: Option<SvmParams>,
    pub outcomes: Vec<RepeatOutcome>,
    pub wall_time: Duration,
}

impl Cell {
    pub fn rates(&self) -> Vec<f64> {
        self.outcomes
            .iter()
            .filter_map(|o| o.result.as_ref().ok().copied())
            .collect()
    }

    pub fn completed(&self) -> usize {
        self.rates().len()
    }

    pub fn failed(&self) -> usize {
        self.outcomes.len() - self.completed()
    }

    pub fn is_complete(&self) -> bool {
        self.failed() == 0
    }

    /// Mean over completed repeats, `None` if none completed.
    pub fn mean_rate(&self) -> Option<f64> {
        let rates = self.rates();
        (!rates.is_empty()).then(|| rates.iter().sum::<f64>() / rates.len() as f64)
    }

    /// Sample standard deviation over completed repeats.
    pub fn stddev(&self) -> Option<f64> {
        let rates = self.rates();
        let mean = self.mean_rate()?;
        (rates.len() >= 2).then(|| {
            let ss: f64 = rates.iter().map(|r| (r - mean).powi(2)).sum();
            (ss / (rates.len() - 1) as f64).sqrt()
        })
    }

    pub fn not_converged(&self) -> usize {
        self.outcomes.iter().map(|o| o.not_converged).sum()
    }
}

#[derive(Debug, Clone)]
pub struct Report {
    pub repeats: usize,
    pub seed: u64,
    /// Ordered by `k_train` (config order), then method (config order).
    pub cells: Vec<Cell>,
}

impl Report {
    pub fn cell(&self, k_train: usize, method: &str) -> Option<&Cell> {
        self.cells
            .iter()
            .find(|c| c.k_train == k_train && c.method.to_string() == method)
    }

    pub fn failed_repeats(&self) -> usize {
        self.cells.iter().map(Cell::failed).sum()
    }
}

fn run_repeat(
    ds: &Dataset,
    k_train: usize,
    method: &Method,
    cfg: &ExperimentConfig,
    svm: Option<SvmParams>,
    repeat: u64,
) -> RepeatOutcome {
    let spec = SplitSpec::new(k_train, cfg.seed, repeat);
    let run = || -> Result<(f64, usize)> {
        let (tr, te) = split_indices(ds, spec)?;
        check_partition(&tr, &te, ds.len())?;
        let (train, test) = (ds.subset(&tr)?, ds.subset(&te)?);
        let pipeline = fit_pipeline(&train, method, cfg, svm)?;
        Ok((
            pipeline.accuracy(test.samples(), test.labels())?,
            pipeline.not_converged,
        ))
    };
    let (result, not_converged) = match run() {
        Ok((rate, nc)) => (Ok(rate), nc),
        Err(e) => (Err(e.to_string()), 0),
    };
    RepeatOutcome {
        repeat,
        seed: spec.effective_seed(),
        result,
        not_converged,
    }
}

/// Train and test index lists must be disjoint and cover the dataset.
fn check_partition(train: &[usize], test: &[usize], n: usize) -> Result<()> {
    let mut seen = vec![false; n];
    for &i in train.iter().chain(test) {
        if std::mem::replace(&mut seen[i], true) {
            return Err(Error::Numerical(format!(
                "sample {i} is in both train and test"
            )));
        }
    }
    if seen.iter().any(|s| !s) {
        return Err(Error::Numerical("split does not cover the dataset".into()));
    }
    Ok(())
}

/// Runs one cell: resolves SVM parameters, then all repeats in parallel.
pub fn run_cell(ds: &Dataset, k_train: usize, method: &Method, cfg: &ExperimentConfig) -> Cell {
    let start = Instant::now();
    let (svm, outcomes) = match resolve_svm_params(ds, k_train, method, cfg) {
        Ok(svm) => {
            let outcomes = (0..cfg.repeats as u64)
                .into_par_iter()
                .map(|r| run_repeat(ds, k_train, method, cfg, svm, r))
                .collect();
            (svm, outcomes)
        }
        // Without parameters no repeat can run; each records the cause.
        Err(e) => {
            let msg = format!("calibration failed: {e}");
            let outcomes = (0..cfg.repeats as u64)
                .map(|r| RepeatOutcome {
                    repeat: r,
                    seed: cfg.seed.wrapping_add(r),
                    result: Err(msg.clone()),
                    not_converged: 0,
                })
                .collect();
            (None, outcomes)
        }
    };
    Cell {
        k_train,
        method: *method,
        svm,
        outcomes,
        wall_time: start.elapsed(),
    }
}

/// Runs every (k_train, method) cell of `cfg`. Stage failures are recorded
/// per repeat; only configuration and loading problems are returned as
/// errors.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<Report> {
    cfg.validate()?;
    let ds = cfg.load_dataset()?;
    run_experiment_on(&ds, cfg)
}

/// [`run_experiment`] on an already loaded dataset.
pub fn run_experiment_on(ds: &Dataset, cfg: &ExperimentConfig) -> Result<Report> {
    cfg.validate()?;
    let smallest = ds.class_sizes().into_iter().min().unwrap_or(0);
    if let Some(&k) = cfg.k_train.iter().find(|&&k| k >= smallest) {
        return Err(Error::InvalidConfig(format!(
            "k_train = {k} leaves no test sample in a class of {smallest}"
        )));
    }
    let mut cells = Vec::new();
    for &k in &cfg.k_train {
        for method in &cfg.methods {
            cells.push(run_cell(ds, k, method, cfg));
        }
    }
    Ok(Report {
        repeats: cfg.repeats,
        seed: cfg.seed,
        cells,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::config::DataSource;

    fn blobs_cfg() -> ExperimentConfig {
        let mut cfg = ExperimentConfig::new(
            DataSource::Blobs {
                classes: 3,
                per_class: 12,
                dim: 2,
                separation: 6.0,
                spread: 0.3,
                seed: 4,
            },
            vec![4],
        );
        cfg.extractor_kernel = KernelSpec::rbf(4.0).unwrap();
        cfg.repeats = 3;
        cfg
    }

    #[test]
    fn separable_blobs_are_recognised_perfectly() {
        let report = run_experiment(&blobs_cfg()).unwrap();
        let cell = &report.cells[0];
        assert_eq!(cell.completed(), 3);
        assert_eq!(cell.mean_rate(), Some(1.0));
        assert!(cell.svm.is_some());
    }

    #[test]
    fn nn_on_raw_inputs_recovers_training_labels() {
        let cfg = blobs_cfg();
        let ds = cfg.load_dataset().unwrap();
        let method = Method::new(ExtractorKind::None, ClassifierKind::Nn);
        let p = fit_pipeline(&ds, &method, &cfg, None).unwrap();
        assert_eq!(p.accuracy(ds.samples(), ds.labels()).unwrap(), 1.0);
    }

    #[test]
    fn mean_and_stddev_follow_the_rates() {
        let mut cfg = blobs_cfg();
        cfg.source = DataSource::Rings {
            classes: 3,
            per_class: 10,
            noise: 0.2,
            seed: 2,
        };
        cfg.methods = vec![Method::new(ExtractorKind::None, ClassifierKind::Nn)];
        cfg.repeats = 4;
        let report = run_experiment(&cfg).unwrap();
        let cell = &report.cells[0];
        let rates = cell.rates();
        assert_eq!(rates.len(), 4);
        assert_eq!(cell.mean_rate().unwrap(), rates.iter().sum::<f64>() / 4.0);
        assert!(cell.stddev().unwrap() >= 0.0);
        let seeds: Vec<u64> = cell.outcomes.iter().map(|o| o.seed).collect();
        assert_eq!(seeds, vec![0, 1, 2, 3]);
    }

    #[test]
    fn stage_failures_are_recorded_not_fabricated() {
        let mut cfg = blobs_cfg();
        // Three classes allow at most two KDDA features.
        cfg.m_features = 5;
        let report = run_experiment(&cfg).unwrap();
        let cell = &report.cells[0];
        assert_eq!(cell.completed(), 0);
        assert_eq!(cell.mean_rate(), None);
        for o in &cell.outcomes {
            assert!(
                o.result.as_ref().unwrap_err().contains("at most C - 1 = 2"),
                "{o:?}"
            );
        }
        assert_eq!(report.failed_repeats(), 3);
    }

    #[test]
    fn k_train_too_large_is_a_config_error() {
        let mut cfg = blobs_cfg();
        cfg.k_train = vec![12];
        assert!(matches!(run_experiment(&cfg), Err(Error::InvalidConfig(_))));
    }

    #[test]
    fn median_distance() {
        let xs = vec![vec![0.0], vec![1.0], vec![3.0]];
        // Squared distances 1, 9, 4.
        assert_eq!(median_squared_distance(&xs), 4.0);
        assert_eq!(median_squared_distance(&[vec![2.0], vec![2.0]]), 1.0);
    }
}
