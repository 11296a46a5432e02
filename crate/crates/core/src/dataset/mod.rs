//! Labeled sample collections: PGM image directories, per-class random
//! splits and synthetic generators.
//!
//! # Directory layout
//!
//! An image dataset is a directory with one subdirectory per class. Classes
//! are numbered `1..=C` in lexicographic order of the subdirectory names, and
//! the `.pgm`/`.pnm` files inside each class directory are read in
//! lexicographic order. Other files and hidden entries are ignored.

mod pgm;
mod split;
mod synthetic;

use std::path::{Path, PathBuf};

pub use pgm::{parse_pgm, read_pgm, PgmFormat, PgmImage};
pub use split::{split_indices, split_per_class, SplitSpec};
pub use synthetic::{make_blobs, make_rings};

use crate::error::{Error, Result};
use crate::extractors::ClassIndex;
use crate::kernels::check_samples;

#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    samples: Vec<Vec<f64>>,
    labels: Vec<usize>,
    names: Vec<String>,
    /// `(width, height)` for image-derived data.
    image_size: Option<(usize, usize)>,
}

impl Dataset {
    /// Builds a dataset, validating uniform dimension and contiguous labels
    /// `1..=C` with every class nonempty.
    pub fn new(samples: Vec<Vec<f64>>, labels: Vec<usize>, names: Vec<String>) -> Result<Self> {
        check_samples(&samples)?;
        if labels.len() != samples.len() || names.len() != samples.len() {
            return Err(Error::InvalidInput(format!(
                "{} samples, {} labels, {} names",
                samples.len(),
                labels.len(),
                names.len()
            )));
        }
        ClassIndex::new(&labels)?;
        Ok(Self {
            samples,
            labels,
            names,
            image_size: None,
        })
    }

    pub fn with_image_size(mut self, width: usize, height: usize) -> Result<Self> {
        if width * height != self.dim() {
            return Err(Error::InvalidInput(format!(
                "{width}x{height} images do not match dimension {}",
                self.dim()
            )));
        }
        self.image_size = Some((width, height));
        Ok(self)
    }

    pub fn samples(&self) -> &[Vec<f64>] {
        &self.samples
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn image_size(&self) -> Option<(usize, usize)> {
        self.image_size
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.samples[0].len()
    }

    pub fn num_classes(&self) -> usize {
        self.labels.iter().copied().max().unwrap_or(0)
    }

    pub fn class_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.num_classes()];
        for &l in &self.labels {
            sizes[l - 1] += 1;
        }
        sizes
    }

    pub fn class_index(&self) -> ClassIndex {
        ClassIndex::new(&self.labels).expect("validated on construction")
    }

    /// Multiplies every sample value by `factor`.
    pub fn scaled(mut self, factor: f64) -> Self {
        if factor != 1.0 {
            for s in &mut self.samples {
                s.iter_mut().for_each(|v| *v *= factor);
            }
        }
        self
    }

    /// Samples at `indices`, in the given order.
    pub fn subset(&self, indices: &[usize]) -> Result<Dataset> {
        let ds = Dataset::new(
            indices.iter().map(|&i| self.samples[i].clone()).collect(),
            indices.iter().map(|&i| self.labels[i]).collect(),
            indices.iter().map(|&i| self.names[i].clone()).collect(),
        )?;
        Ok(Dataset {
            image_size: self.image_size,
            ..ds
        })
    }
}

fn sorted_entries(dir: &Path) -> Result<Vec<PathBuf>> {
    let mut entries = Vec::new();
    for entry in std::fs::read_dir(dir).map_err(|e| Error::io(dir, e))? {
        let entry = entry.map_err(|e| Error::io(dir, e))?;
        if entry.file_name().to_string_lossy().starts_with('.') {
            continue;
        }
        entries.push(entry.path());
    }
    entries.sort();
    Ok(entries)
}

fn is_pgm_file(path: &Path) -> bool {
    path.is_file()
        && path
            .extension()
            .and_then(|e| e.to_str())
            .is_some_and(|e| e.eq_ignore_ascii_case("pgm") || e.eq_ignore_ascii_case("pnm"))
}

/// Loads a directory-per-class PGM dataset. Every image must be exactly
/// `expected_width × expected_height`; pixel values are scaled to `[0, 1]`.
pub fn load_image_dir(
    path: &Path,
    expected_width: usize,
    expected_height: usize,
) -> Result<Dataset> {
    let class_dirs: Vec<PathBuf> = sorted_entries(path)?
        .into_iter()
        .filter(|p| p.is_dir())
        .collect();
    if class_dirs.is_empty() {
        return Err(Error::InvalidInput(format!(
            "{}: no class subdirectories",
            path.display()
        )));
    }

    let mut samples = Vec::new();
    let mut labels = Vec::new();
    let mut names = Vec::new();
    for (class, dir) in class_dirs.iter().enumerate() {
        let files: Vec<PathBuf> = sorted_entries(dir)?
            .into_iter()
            .filter(|p| is_pgm_file(p))
            .collect();
        if files.is_empty() {
            return Err(Error::InvalidInput(format!(
                "{}: class directory contains no PGM images",
                dir.display()
            )));
        }
        for file in files {
            let img = read_pgm(&file)?;
            if (img.width, img.height) != (expected_width, expected_height) {
                return Err(Error::file(
                    &file,
                    format!(
                        "image is {}x{}, expected {expected_width}x{expected_height}",
                        img.width, img.height
                    ),
                ));
            }
            samples.push(img.to_unit_vector());
            labels.push(class + 1);
            let rel = file.strip_prefix(path).unwrap_or(&file);
            names.push(rel.to_string_lossy().into_owned());
        }
    }
    Dataset::new(samples, labels, names)?.with_image_size(expected_width, expected_height)
}
