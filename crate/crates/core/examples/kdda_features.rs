//! Fit KDDA on three Gaussian blobs and inspect the whitening diagnostics.

use kdda::dataset::make_blobs;
use kdda::extractors::kdda_fit;
use kdda::KernelSpec;

fn main() -> kdda::Result<()> {
    let data = make_blobs(3, 15, 4, 3.0, 1.0, 7)?;
    let model = kdda_fit(
        data.samples(),
        &data.class_index(),
        KernelSpec::rbf(8.0)?,
        0,
    )?;
    let d = model.diagnostics();
    println!(
        "features: {} (C - 1 = {})",
        model.m_features(),
        data.num_classes() - 1
    );
    println!("within-class eigenvalues: {:.4?}", d.within_eigenvalues);
    println!(
        "whitened between-class scatter:\n{:.6?}",
        d.between_whitened
    );
    println!("whitened total scatter:\n{:.6?}", d.total_scatter);

    for (x, label) in data.samples().iter().zip(data.labels()).step_by(15) {
        println!("class {label}: {:+.4?}", model.transform(x)?);
    }
    Ok(())
}
