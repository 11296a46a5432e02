use crate::error::{Error, Result};

/// Per-sample class ids in `1..=C` plus per-class counts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassIndex {
    labels: Vec<usize>,
    class_sizes: Vec<usize>,
}

impl ClassIndex {
    /// Validates that labels form the contiguous range `1..=C` with every
    /// class present.
    pub fn new(labels: &[usize]) -> Result<Self> {
        if labels.is_empty() {
            return Err(Error::InvalidInput("no labels".into()));
        }
        if let Some(&bad) = labels.iter().find(|&&c| c == 0) {
            return Err(Error::InvalidInput(format!(
                "class ids start at 1, got {bad}"
            )));
        }
        let classes = *labels.iter().max().expect("nonempty");
        let mut class_sizes = vec![0usize; classes];
        for &c in labels {
            class_sizes[c - 1] += 1;
        }
        if let Some(empty) = class_sizes.iter().position(|&n| n == 0) {
            return Err(Error::InvalidInput(format!(
                "class {} has no samples",
                empty + 1
            )));
        }
        Ok(Self {
            labels: labels.to_vec(),
            class_sizes,
        })
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    /// `C_i` for class `i + 1`.
    pub fn class_sizes(&self) -> &[usize] {
        &self.class_sizes
    }

    /// Total sample count `L`.
    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    /// Number of classes `C`.
    pub fn num_classes(&self) -> usize {
        self.class_sizes.len()
    }

    /// Zero-based class slot of sample `i`.
    #[inline]
    pub(crate) fn slot(&self, i: usize) -> usize {
        self.labels[i] - 1
    }
}
