use crate::dataset::{split_per_class, Dataset, SplitSpec};
use crate::error::{Error, Result};
use crate::multiclass::Classifier;

use super::config::{Bounds, ExperimentConfig};
use super::experiment::{fit_pipeline, resolve_svm_params};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridPoint {
    pub x: f64,
    pub y: f64,
    pub class: usize,
}

/// `n` evenly spaced values from `lo` to `hi` inclusive; the midpoint when
/// `n == 1`.
pub fn axis(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![0.5 * (lo + hi)],
        _ => (0..n)
            .map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64)
            .collect(),
    }
}

/// Predicts every point of a `resolution × resolution` grid over `bounds`
/// in a 2-D feature space. Rows are ordered by `y`, then `x`.
pub fn boundary_grid(
    classifier: &dyn Classifier,
    bounds: Bounds,
    resolution: usize,
) -> Result<Vec<GridPoint>> {
    let [x0, x1, y0, y1] = bounds;
    let xs = axis(x0, x1, resolution);
    let ys = axis(y0, y1, resolution);
    let mut out = Vec::with_capacity(xs.len() * ys.len());
    for &y in &ys {
        for &x in &xs {
            out.push(GridPoint {
                x,
                y,
                class: classifier.predict(&[x, y])?,
            });
        }
    }
    Ok(out)
}

/// Bounding box of 2-D points, padded by 10% of each side (or 1 when flat).
pub fn padded_bounds(points: &[Vec<f64>]) -> Bounds {
    let mut b = [
        f64::INFINITY,
        f64::NEG_INFINITY,
        f64::INFINITY,
        f64::NEG_INFINITY,
    ];
    for p in points {
        b[0] = b[0].min(p[0]);
        b[1] = b[1].max(p[0]);
        b[2] = b[2].min(p[1]);
        b[3] = b[3].max(p[1]);
    }
    let pad = |lo: f64, hi: f64| if hi > lo { 0.1 * (hi - lo) } else { 1.0 };
    let (px, py) = (pad(b[0], b[1]), pad(b[2], b[3]));
    [b[0] - px, b[1] + px, b[2] - py, b[3] + py]
}

#[derive(Debug, Clone)]
pub struct BoundaryOutput {
    pub bounds: Bounds,
    pub grid: Vec<GridPoint>,
    /// Training samples in feature space.
    pub train: Vec<GridPoint>,
}

/// Fits the first configured method on the repeat-0 split of the first
/// `k_train` and predicts a grid over its 2-D feature space.
pub fn emit_boundary_grid(ds: &Dataset, cfg: &ExperimentConfig) -> Result<BoundaryOutput> {
    cfg.validate()?;
    let (method, k_train) = (cfg.methods[0], cfg.k_train[0]);
    let (train, _) = split_per_class(ds, SplitSpec::new(k_train, cfg.seed, 0))?;
    let svm = resolve_svm_params(ds, k_train, &method, cfg)?;
    let pipeline = fit_pipeline(&train, &method, cfg, svm)?;
    let m = pipeline.train_features[0].len();
    if m != 2 {
        return Err(Error::InvalidConfig(format!(
            "boundary grid needs M = 2 features, `{method}` produced {m}"
        )));
    }
    let bounds = cfg
        .boundary
        .bounds
        .unwrap_or_else(|| padded_bounds(&pipeline.train_features));
    let grid = boundary_grid(
        pipeline.classifier.as_ref(),
        bounds,
        cfg.boundary.resolution,
    )?;
    let train_points = pipeline
        .train_features
        .iter()
        .zip(train.labels())
        .map(|(f, &class)| GridPoint {
            x: f[0],
            y: f[1],
            class,
        })
        .collect();
    Ok(BoundaryOutput {
        bounds,
        grid,
        train: train_points,
    })
}
