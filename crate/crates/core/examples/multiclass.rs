//! One-vs-rest, pairwise-coupled and nearest-neighbour classifiers on blobs.

use kdda::dataset::{make_blobs, split_per_class, SplitSpec};
use kdda::multiclass::{nn_train, ovr_train, pairwise_train, Classifier};
use kdda::{KernelSpec, SvmTrainConfig};

fn main() -> kdda::Result<()> {
    let data = make_blobs(4, 20, 2, 2.5, 1.0, 11)?;
    let (train, test) = split_per_class(&data, SplitSpec::new(8, 0, 0))?;
    let cfg = SvmTrainConfig::new(KernelSpec::rbf(2.0)?, 10.0);

    let ovr = ovr_train(train.samples(), train.labels(), &cfg)?;
    let pairwise = pairwise_train(train.samples(), train.labels(), &cfg)?;
    let nn = nn_train(train.samples(), train.labels())?;
    let models: [(&str, &dyn Classifier); 3] =
        [("svm-ovr", &ovr), ("svm-pairwise", &pairwise), ("nn", &nn)];

    for (name, model) in models {
        let predicted = model.predict_many(test.samples())?;
        let hits = predicted
            .iter()
            .zip(test.labels())
            .filter(|(p, l)| p == l)
            .count();
        println!("{name:<13} {hits}/{} correct", test.len());
    }

    let z = &test.samples()[0];
    println!("pairwise probabilities at {z:.3?}:");
    for row in pairwise.probabilities(z)? {
        println!("  {row:.3?}");
    }
    Ok(())
}
