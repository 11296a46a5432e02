//! Seeded synthetic datasets for tests and demonstrations.

use std::f64::consts::TAU;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use crate::error::{Error, Result};

use super::Dataset;

fn normal(stddev: f64) -> Result<Option<Normal<f64>>> {
    if !(stddev.is_finite() && stddev >= 0.0) {
        return Err(Error::InvalidConfig(format!(
            "noise must be >= 0, got {stddev}"
        )));
    }
    Ok((stddev > 0.0).then(|| Normal::new(0.0, stddev).expect("valid stddev")))
}

/// Concentric rings in 2-D: class `c` lies on the circle of radius `c`, with
/// uniformly random angle and Gaussian radial noise of standard deviation
/// `noise`.
pub fn make_rings(classes: usize, per_class: usize, noise: f64, seed: u64) -> Result<Dataset> {
    if classes < 2 || per_class < 1 {
        return Err(Error::InvalidConfig(format!(
            "rings need >= 2 classes and >= 1 sample per class, got {classes}x{per_class}"
        )));
    }
    let radial = normal(noise)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut samples = Vec::with_capacity(classes * per_class);
    let mut labels = Vec::with_capacity(classes * per_class);
    let mut names = Vec::with_capacity(classes * per_class);
    for c in 1..=classes {
        for j in 0..per_class {
            let angle = rng.random::<f64>() * TAU;
            let r = c as f64 + radial.as_ref().map_or(0.0, |n| n.sample(&mut rng));
            samples.push(vec![r * angle.cos(), r * angle.sin()]);
            labels.push(c);
            names.push(format!("ring{c}/{j}"));
        }
    }
    Dataset::new(samples, labels, names)
}

/// Isotropic Gaussian blobs in `dim` dimensions. Class `c` is centred at
/// `separation · e_{c−1}` for `c ≤ dim` and at `−separation · e_{c−1−dim}`
/// beyond that, so at most `2·dim` classes are available.
pub fn make_blobs(
    classes: usize,
    per_class: usize,
    dim: usize,
    separation: f64,
    spread: f64,
    seed: u64,
) -> Result<Dataset> {
    if classes < 2 || per_class < 1 || dim < 1 || classes > 2 * dim {
        return Err(Error::InvalidConfig(format!(
            "blobs need 2 <= classes <= 2*dim and per_class >= 1, got {classes} classes, dim {dim}"
        )));
    }
    if !separation.is_finite() {
        return Err(Error::InvalidConfig("separation must be finite".into()));
    }
    let noise = normal(spread)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut samples = Vec::with_capacity(classes * per_class);
    let mut labels = Vec::with_capacity(classes * per_class);
    let mut names = Vec::with_capacity(classes * per_class);
    for c in 1..=classes {
        let (axis, sign) = if c <= dim {
            (c - 1, 1.0)
        } else {
            (c - 1 - dim, -1.0)
        };
        for j in 0..per_class {
            let x: Vec<f64> = (0..dim)
                .map(|d| {
                    let center = if d == axis { sign * separation } else { 0.0 };
                    center + noise.as_ref().map_or(0.0, |n| n.sample(&mut rng))
                })
                .collect();
            samples.push(x);
            labels.push(c);
            names.push(format!("blob{c}/{j}"));
        }
    }
    Dataset::new(samples, labels, names)
}
