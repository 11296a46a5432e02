//! Save fitted models to text and load them back bit for bit.

use kdda::dataset::make_blobs;
use kdda::extractors::kdda_fit;
use kdda::multiclass::{ovr_train, Classifier, OvrModel};
use kdda::{persist, KddaModel, KernelSpec, SvmTrainConfig};

fn main() -> kdda::Result<()> {
    let data = make_blobs(3, 10, 3, 4.0, 1.0, 5)?;
    let kdda = kdda_fit(
        data.samples(),
        &data.class_index(),
        KernelSpec::rbf(10.0)?,
        0,
    )?;
    let features = kdda.transform_many(data.samples())?;
    let svm = ovr_train(
        &features,
        data.labels(),
        &SvmTrainConfig::new(KernelSpec::rbf(1.0)?, 10.0),
    )?;

    let dir = std::env::temp_dir();
    let (kdda_path, svm_path) = (dir.join("demo.kdda"), dir.join("demo.ovr"));
    persist::save(&kdda, &kdda_path)?;
    persist::save(&svm, &svm_path)?;

    let kdda2: KddaModel = persist::load(&kdda_path)?;
    let svm2: OvrModel = persist::load(&svm_path)?;
    let text = persist::to_string(&kdda);
    println!("{}", text.lines().take(4).collect::<Vec<_>>().join("\n"));
    println!("...");

    let z = &data.samples()[0];
    let (a, b) = (kdda.transform(z)?, kdda2.transform(z)?);
    println!("features identical after reload: {}", a == b);
    println!(
        "predictions identical after reload: {}",
        svm.predict_many(&features)? == svm2.predict_many(&features)?
    );
    Ok(())
}
