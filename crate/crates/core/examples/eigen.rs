//! Symmetric eigendecomposition of a small matrix.

use kdda::numerics::{sym_eig, Matrix, DEFAULT_EIG_TOL};

fn main() -> kdda::Result<()> {
    let a = Matrix::from_rows(&[[4.0, 1.0, 0.5], [1.0, 3.0, 0.0], [0.5, 0.0, 1.0]])?;
    let e = sym_eig(&a, DEFAULT_EIG_TOL)?;
    println!("eigenvalues (descending): {:.6?}", e.eigenvalues);
    for j in 0..e.eigenvalues.len() {
        println!("v{j} = {:.6?}", e.eigenvector(j));
    }

    let v = &e.eigenvectors;
    let back = v.scale_columns(&e.eigenvalues).matmul(&v.transpose())?;
    println!("reconstruction error: {:.2e}", back.sub(&a)?.max_abs());
    println!(
        "trace {:.6} = sum {:.6}",
        a.trace(),
        e.eigenvalues.iter().sum::<f64>()
    );
    Ok(())
}
