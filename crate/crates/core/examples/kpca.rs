//! Kernel PCA on concentric rings: the spectrum and leading projections.

use kdda::dataset::make_rings;
use kdda::extractors::kpca_fit;
use kdda::KernelSpec;

fn main() -> kdda::Result<()> {
    let data = make_rings(3, 20, 0.05, 3)?;
    let model = kpca_fit(data.samples(), KernelSpec::rbf(1.0)?, 5)?;
    println!("leading eigenvalues: {:.4?}", model.eigenvalues());
    println!("component variances: {:.4?}", model.component_variances());
    for (x, label) in data.samples().iter().zip(data.labels()).step_by(10) {
        println!("class {label}: {:+.4?}", model.transform(x)?);
    }
    Ok(())
}
