//! Gram matrices for each supported kernel.

use kdda::kernels::{gram_matrix, kernel_vector};
use kdda::numerics::{sym_eig, DEFAULT_EIG_TOL};
use kdda::KernelSpec;

fn main() -> kdda::Result<()> {
    let xs = vec![
        vec![0.0, 0.0],
        vec![1.0, 0.0],
        vec![0.0, 1.0],
        vec![1.0, 1.0],
    ];
    let kernels = [
        KernelSpec::Linear,
        KernelSpec::polynomial(2)?,
        KernelSpec::rbf(0.5)?,
        KernelSpec::sigmoid(-1.0)?,
    ];
    for k in &kernels {
        let g = gram_matrix(k, &xs)?;
        let e = sym_eig(&g, DEFAULT_EIG_TOL)?;
        println!(
            "{k:<12} symmetric: {}  smallest eigenvalue: {:+.4}",
            g.is_symmetric(1e-12),
            e.eigenvalues.last().unwrap()
        );
    }

    let z = [0.5, 0.5];
    println!(
        "rbf:0.5 k(x_i, z) = {:.4?}",
        kernel_vector(&kernels[2], &xs, &z)?
    );
    Ok(())
}
