use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

use super::Dataset;

/// Per-class train/test partition request.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SplitSpec {
    /// Training samples drawn from every class.
    pub k_train: usize,
    pub seed: u64,
    /// Repeat index; the partition for repeat `r` is drawn with seed
    /// `seed + r`.
    pub repeat: u64,
}

impl SplitSpec {
    pub fn new(k_train: usize, seed: u64, repeat: u64) -> Self {
        Self {
            k_train,
            seed,
            repeat,
        }
    }

    pub fn effective_seed(&self) -> u64 {
        self.seed.wrapping_add(self.repeat)
    }
}

/// Random per-class partition into `k_train` training samples per class and
/// the remainder for testing.
///
/// The generator is ChaCha8 seeded with [`SplitSpec::effective_seed`] via
/// `seed_from_u64`; classes are visited in order `1..=C` and each class's
/// sample indices (in dataset order) are Fisher–Yates shuffled from that one
/// stream, the first `k_train` going to training. Both halves keep dataset
/// order.
pub fn split_per_class(ds: &Dataset, spec: SplitSpec) -> Result<(Dataset, Dataset)> {
    let (train, test) = split_indices(ds, spec)?;
    Ok((ds.subset(&train)?, ds.subset(&test)?))
}

/// The partition drawn by [`split_per_class`], as ascending index lists
/// `(train, test)`.
pub fn split_indices(ds: &Dataset, spec: SplitSpec) -> Result<(Vec<usize>, Vec<usize>)> {
    let sizes = ds.class_sizes();
    if spec.k_train == 0 {
        return Err(Error::InvalidConfig("k_train must be at least 1".into()));
    }
    if let Some((class, &size)) = sizes.iter().enumerate().find(|(_, &n)| spec.k_train >= n) {
        return Err(Error::InvalidConfig(format!(
            "k_train = {} leaves no test sample for class {} ({size} samples)",
            spec.k_train,
            class + 1
        )));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(spec.effective_seed());
    let mut per_class: Vec<Vec<usize>> = vec![Vec::new(); sizes.len()];
    for (i, &l) in ds.labels().iter().enumerate() {
        per_class[l - 1].push(i);
    }
    let mut in_train = vec![false; ds.len()];
    for members in &mut per_class {
        members.shuffle(&mut rng);
        for &i in &members[..spec.k_train] {
            in_train[i] = true;
        }
    }
    let train = (0..ds.len()).filter(|&i| in_train[i]).collect();
    let test = (0..ds.len()).filter(|&i| !in_train[i]).collect();
    Ok((train, test))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dataset(classes: usize, per_class: usize) -> Dataset {
        let mut samples = Vec::new();
        let mut labels = Vec::new();
        let mut names = Vec::new();
        for c in 1..=classes {
            for j in 0..per_class {
                samples.push(vec![c as f64, j as f64]);
                labels.push(c);
                names.push(format!("{c}/{j}"));
            }
        }
        Dataset::new(samples, labels, names).unwrap()
    }

    #[test]
    fn counts_per_class() {
        let ds = dataset(3, 10);
        let (train, test) = split_per_class(&ds, SplitSpec::new(5, 1, 0)).unwrap();
        assert_eq!(train.len(), 15);
        assert_eq!(test.len(), 15);
        assert_eq!(train.class_sizes(), vec![5, 5, 5]);
    }

    #[test]
    fn twenty_classes_k4() {
        let ds = dataset(20, 10);
        let (train, test) = split_per_class(&ds, SplitSpec::new(4, 9, 2)).unwrap();
        assert_eq!((train.len(), test.len()), (80, 120));
    }

    #[test]
    fn deterministic_and_seed_sensitive() {
        let ds = dataset(4, 8);
        let a = split_per_class(&ds, SplitSpec::new(3, 42, 0)).unwrap();
        let b = split_per_class(&ds, SplitSpec::new(3, 42, 0)).unwrap();
        assert_eq!(a, b);
        // seed + repeat is what matters.
        let c = split_per_class(&ds, SplitSpec::new(3, 41, 1)).unwrap();
        assert_eq!(a, c);
        let d = split_per_class(&ds, SplitSpec::new(3, 43, 0)).unwrap();
        assert_ne!(a.0.names(), d.0.names());
    }

    #[test]
    fn frozen_partition() {
        // Pins the generator and shuffle algorithm; a change here breaks
        // reproducibility of published splits.
        let ds = dataset(2, 5);
        let (train, _) = split_per_class(&ds, SplitSpec::new(2, 7, 0)).unwrap();
        let names: Vec<&str> = train.names().iter().map(String::as_str).collect();
        assert_eq!(names, FROZEN_SEED7);
    }

    const FROZEN_SEED7: [&str; 4] = ["1/0", "1/3", "2/1", "2/2"];

    #[test]
    fn k_train_must_leave_a_test_sample() {
        let ds = dataset(2, 4);
        let err = split_per_class(&ds, SplitSpec::new(4, 0, 0)).unwrap_err();
        assert!(matches!(&err, Error::InvalidConfig(m) if m.contains("class 1")));
        assert!(split_per_class(&ds, SplitSpec::new(0, 0, 0)).is_err());
    }
}
