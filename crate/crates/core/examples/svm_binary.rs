//! Train a binary RBF SVM with SMO and audit the KKT conditions.

use kdda::svm::{svm_train, SvmTrainConfig};
use kdda::KernelSpec;

fn main() -> kdda::Result<()> {
    // XOR: not linearly separable.
    let xs = vec![
        vec![0.0, 0.0],
        vec![1.0, 1.0],
        vec![0.0, 1.0],
        vec![1.0, 0.0],
    ];
    let ys = vec![1.0, 1.0, -1.0, -1.0];
    let cfg = SvmTrainConfig::new(KernelSpec::rbf(0.5)?, 10.0);
    let model = svm_train(&xs, &ys, &cfg)?;

    let stats = model.stats();
    println!(
        "status: {:?} after {} iterations",
        model.status(),
        stats.iterations
    );
    println!("dual objective: {:.6}", stats.dual_objective);
    println!("alphas: {:.4?}  bias: {:+.4}", model.alphas(), model.bias());
    for (x, y) in xs.iter().zip(&ys) {
        println!("f({x:?}) = {:+.4} (label {y:+})", model.decision(x)?);
    }

    let audit = model.audit(&xs, &ys, cfg.kkt_tol)?;
    println!(
        "KKT audit: {} (max violation {:.2e}, |sum a y| = {:.2e})",
        if audit.passed() { "pass" } else { "fail" },
        audit.max_violation,
        audit.equality_residual
    );
    Ok(())
}
