//! Kernel direct discriminant analysis.
//!
//! Every feature-space quantity is expressed through expansion coefficients
//! over the mapped training samples, so only the Gram matrix `K` is needed.
//! With `E` the one-hot label matrix and `C_i` the class sizes:
//!
//! 1. `W = (E·diag(1/C_i) − (1/L)·1·1ᵀ)·diag(√(C_i/L))` expands the weighted
//!    class-mean deviations, so the between-class scatter is `Φ W Wᵀ Φᵀ` and its
//!    nonzero spectrum is that of the `C×C` matrix `Sb = Wᵀ K W`.
//! 2. Eigenpairs of `Sb` above `1e-10·λ_max` are kept (at most `C − 1`). The
//!    basis `Q = W·E_m·Λ_b⁻¹` whitens the between-class scatter:
//!    `Qᵀ K W Wᵀ K Q = I`.
//! 3. The within-class scatter in that basis is
//!    `Sw = (1/L)·Qᵀ K (I − G) K Q` with `G` the block class-averaging
//!    operator. Its eigenvectors `P` are ordered by ascending eigenvalue and
//!    round-off negatives are clamped to zero.
//! 4. The `M` directions with the smallest within-class eigenvalues are kept
//!    and scaled by `(1 + λ_w)^(-1/2)`, which normalises between-plus-within
//!    scatter to the identity. Zero within-class eigenvalues are never
//!    divided by, so directions from the null space of the within-class
//!    scatter are retained.
//!
//! The kernel matrix is never inverted or pseudo-inverted.

use crate::error::{Error, Result};
use crate::kernels::{check_samples, gram_matrix, KernelRows, KernelSpec};
use crate::numerics::{sym_eig, Matrix, DEFAULT_EIG_TOL};

use super::ClassIndex;

/// Relative threshold for keeping between-class eigenpairs.
pub const BETWEEN_EIG_TOL: f64 = DEFAULT_EIG_TOL;

/// Quantities recorded while fitting, used for auditing the projection.
#[derive(Debug, Clone, PartialEq)]
pub struct KddaDiagnostics {
    /// Full spectrum of `Sb = Wᵀ K W`, descending (length `C`).
    pub between_spectrum: Vec<f64>,
    /// Number of between-class eigenpairs retained.
    pub between_rank: usize,
    /// Within-class eigenvalues of the selected directions, ascending.
    pub within_eigenvalues: Vec<f64>,
    /// Between-class scatter in the selected whitened basis (before the final
    /// scaling). Equals the identity up to round-off.
    pub between_whitened: Matrix,
    /// Between-plus-within scatter of the final directions; identity up to
    /// round-off.
    pub total_scatter: Matrix,
    /// Feature count asked for (after resolving the `0 → C − 1` default).
    pub requested_features: usize,
    /// Projections of the training samples, `L×M`.
    pub train_projections: Matrix,
}

/// Fitted KDDA projection: `y = coeffsᵀ · k(z)`.
#[derive(Debug, Clone, PartialEq)]
pub struct KddaModel {
    pub(crate) train_samples: Vec<Vec<f64>>,
    pub(crate) kernel: KernelSpec,
    pub(crate) coeffs: Matrix,
    pub(crate) diagnostics: KddaDiagnostics,
}

impl KddaModel {
    /// Number of discriminant features `M`.
    pub fn m_features(&self) -> usize {
        self.coeffs.cols()
    }

    pub fn kernel(&self) -> &KernelSpec {
        &self.kernel
    }

    pub fn train_samples(&self) -> &[Vec<f64>] {
        &self.train_samples
    }

    /// Expansion coefficients, `L×M`.
    pub fn coeffs(&self) -> &Matrix {
        &self.coeffs
    }

    pub fn diagnostics(&self) -> &KddaDiagnostics {
        &self.diagnostics
    }

    /// True when fewer features than requested could be extracted because the
    /// between-class scatter has lower rank.
    pub fn is_clamped(&self) -> bool {
        self.m_features() < self.diagnostics.requested_features
    }

    pub fn input_dim(&self) -> usize {
        self.train_samples[0].len()
    }

    pub fn transform(&self, z: &[f64]) -> Result<Vec<f64>> {
        kdda_transform(self, z)
    }

    pub fn transform_many(&self, zs: &[Vec<f64>]) -> Result<Vec<Vec<f64>>> {
        let rows = KernelRows::new(self.kernel, &self.train_samples);
        zs.iter()
            .map(|z| {
                let k = rows.row(z)?;
                self.coeffs.t_mul_vec(&k)
            })
            .collect()
    }
}

/// Fits a KDDA projection with `m_features` discriminant directions
/// (`0` selects the maximum, `C − 1`).
pub fn kdda_fit(
    samples: &[Vec<f64>],
    labels: &ClassIndex,
    kernel: KernelSpec,
    m_features: usize,
) -> Result<KddaModel> {
    kernel.require_mercer()?;
    check_samples(samples)?;
    let l = samples.len();
    if labels.len() != l {
        return Err(Error::InvalidInput(format!(
            "{l} samples but {} labels",
            labels.len()
        )));
    }
    let c = labels.num_classes();
    if c < 2 {
        return Err(Error::InvalidInput(
            "discriminant analysis needs at least two classes".into(),
        ));
    }
    let requested = if m_features == 0 { c - 1 } else { m_features };
    if requested > c - 1 {
        return Err(Error::InvalidConfig(format!(
            "requested {requested} features but at most C - 1 = {} exist",
            c - 1
        )));
    }

    let k = gram_matrix(&kernel, samples)?;
    let w = between_expansion(labels);
    let kw = k.matmul(&w)?;
    let mut sb = w.t_matmul(&kw)?;
    sb.symmetrize();
    let between = sym_eig(&sb, BETWEEN_EIG_TOL)?;

    let lambda_max = between.eigenvalues[0];
    let scale = k.max_abs().max(f64::MIN_POSITIVE);
    if lambda_max.is_nan() || lambda_max <= f64::EPSILON * scale {
        return Err(Error::InvalidInput(
            "class means coincide in feature space; between-class scatter is zero".into(),
        ));
    }
    let retained: Vec<usize> = (0..c)
        .filter(|&j| between.eigenvalues[j] > BETWEEN_EIG_TOL * lambda_max)
        .collect();
    let m = retained.len();
    let inv_lambda: Vec<f64> = retained
        .iter()
        .map(|&j| 1.0 / between.eigenvalues[j])
        .collect();
    let e_m = between.eigenvectors.select_columns(&retained);
    let q = w.matmul(&e_m)?.scale_columns(&inv_lambda);
    let kq = kw.matmul(&e_m)?.scale_columns(&inv_lambda);

    let centered = subtract_class_means(&kq, labels);
    let mut sw = centered.t_matmul(&centered)?.scale(1.0 / l as f64);
    sw.symmetrize();
    let within = sym_eig(&sw, DEFAULT_EIG_TOL)?;

    let m_out = requested.min(m);
    // Ascending order: reverse of the eigensolver's descending output.
    let chosen: Vec<usize> = (0..m).rev().take(m_out).collect();
    let within_eigenvalues: Vec<f64> = chosen
        .iter()
        .map(|&j| within.eigenvalues[j].max(0.0))
        .collect();
    let p_m = within.eigenvectors.select_columns(&chosen);
    let scaling: Vec<f64> = within_eigenvalues
        .iter()
        .map(|lw| (1.0 + lw).sqrt().recip())
        .collect();

    let qp = q.matmul(&p_m)?;
    let coeffs = qp.scale_columns(&scaling);
    coeffs.ensure_finite("KDDA coefficients")?;

    // Diagnostics, all through K.
    let kqp = kq.matmul(&p_m)?;
    let bw = kqp.t_matmul(&w)?;
    let between_whitened = bw.matmul(&bw.transpose())?;
    let train_projections = kqp.scale_columns(&scaling);
    let bt = train_projections.t_matmul(&w)?;
    let within_final = subtract_class_means(&train_projections, labels);
    let total_scatter = bt
        .matmul(&bt.transpose())?
        .add(&within_final.t_matmul(&within_final)?.scale(1.0 / l as f64))?;

    Ok(KddaModel {
        train_samples: samples.to_vec(),
        kernel,
        coeffs,
        diagnostics: KddaDiagnostics {
            between_spectrum: between.eigenvalues,
            between_rank: m,
            within_eigenvalues,
            between_whitened,
            total_scatter,
            requested_features: requested,
            train_projections,
        },
    })
}

/// Projects `z` onto the discriminant directions.
pub fn kdda_transform(model: &KddaModel, z: &[f64]) -> Result<Vec<f64>> {
    if z.len() != model.input_dim() {
        return Err(Error::InvalidInput(format!(
            "sample has dimension {}, model expects {}",
            z.len(),
            model.input_dim()
        )));
    }
    let k = KernelRows::new(model.kernel, &model.train_samples).row(z)?;
    model.coeffs.t_mul_vec(&k)
}

/// `L×C` coefficients of the weighted class-mean deviations
/// `√(C_i/L)·(φ̄_i − φ̄)`.
fn between_expansion(labels: &ClassIndex) -> Matrix {
    let l = labels.len() as f64;
    let sizes = labels.class_sizes();
    Matrix::from_fn(labels.len(), sizes.len(), |row, class| {
        let ci = sizes[class] as f64;
        let member = if labels.slot(row) == class {
            1.0 / ci
        } else {
            0.0
        };
        (member - 1.0 / l) * (ci / l).sqrt()
    })
}

/// `(I − G)·X`: removes the per-class mean of each column.
fn subtract_class_means(x: &Matrix, labels: &ClassIndex) -> Matrix {
    let sizes = labels.class_sizes();
    let mut means = vec![vec![0.0; x.cols()]; sizes.len()];
    for i in 0..x.rows() {
        for (m, &v) in means[labels.slot(i)].iter_mut().zip(x.row(i)) {
            *m += v;
        }
    }
    for (mean, &n) in means.iter_mut().zip(sizes) {
        mean.iter_mut().for_each(|m| *m /= n as f64);
    }
    Matrix::from_fn(x.rows(), x.cols(), |i, j| {
        x[(i, j)] - means[labels.slot(i)][j]
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn blobs() -> (Vec<Vec<f64>>, ClassIndex) {
        let samples = vec![
            vec![0.0, 0.1],
            vec![0.2, -0.1],
            vec![-0.1, 0.0],
            vec![3.0, 3.1],
            vec![3.2, 2.9],
            vec![2.9, 3.0],
            vec![0.1, 3.0],
            vec![-0.2, 3.2],
            vec![0.0, 2.8],
        ];
        let labels = ClassIndex::new(&[1, 1, 1, 2, 2, 2, 3, 3, 3]).unwrap();
        (samples, labels)
    }

    #[test]
    fn rejects_too_many_features() {
        let (x, y) = blobs();
        assert!(matches!(
            kdda_fit(&x, &y, KernelSpec::Linear, 3),
            Err(Error::InvalidConfig(_))
        ));
    }

    #[test]
    fn rejects_sigmoid_kernel() {
        let (x, y) = blobs();
        assert!(matches!(
            kdda_fit(&x, &y, KernelSpec::Sigmoid { offset: 0.0 }, 1),
            Err(Error::UnsupportedKernel(_))
        ));
    }

    #[test]
    fn rejects_single_class_and_length_mismatch() {
        let (x, _) = blobs();
        let one = ClassIndex::new(&[1; 9]).unwrap();
        assert!(matches!(
            kdda_fit(&x, &one, KernelSpec::Linear, 0),
            Err(Error::InvalidInput(_))
        ));
        let short = ClassIndex::new(&[1, 2]).unwrap();
        assert!(kdda_fit(&x, &short, KernelSpec::Linear, 0).is_err());
    }

    #[test]
    fn coincident_class_means_are_rejected() {
        let x = vec![vec![1.0], vec![-1.0], vec![2.0], vec![-2.0]];
        let y = ClassIndex::new(&[1, 1, 2, 2]).unwrap();
        assert!(matches!(
            kdda_fit(&x, &y, KernelSpec::Linear, 1),
            Err(Error::InvalidInput(_))
        ));
    }

    #[test]
    fn zero_selects_c_minus_one() {
        let (x, y) = blobs();
        let model = kdda_fit(&x, &y, KernelSpec::rbf(2.0).unwrap(), 0).unwrap();
        assert_eq!(model.m_features(), 2);
        assert!(!model.is_clamped());
    }

    #[test]
    fn between_rank_at_most_c_minus_one() {
        let (x, y) = blobs();
        for kernel in [
            KernelSpec::Linear,
            KernelSpec::rbf(0.5).unwrap(),
            KernelSpec::polynomial(3).unwrap(),
        ] {
            let model = kdda_fit(&x, &y, kernel, 0).unwrap();
            let d = model.diagnostics();
            assert_eq!(d.between_spectrum.len(), 3);
            assert!(d.between_rank <= 2);
            // The constant direction is annihilated exactly.
            assert!(d.between_spectrum[2].abs() <= 1e-10 * d.between_spectrum[0]);
        }
    }

    #[test]
    fn whitening_and_total_scatter_are_identity() {
        let (x, y) = blobs();
        let model = kdda_fit(&x, &y, KernelSpec::rbf(1.5).unwrap(), 2).unwrap();
        let d = model.diagnostics();
        let eye = Matrix::identity(2);
        assert!(d.between_whitened.sub(&eye).unwrap().frobenius_norm() < 1e-6);
        assert!(d.total_scatter.sub(&eye).unwrap().frobenius_norm() < 1e-6);
    }

    #[test]
    fn one_sample_per_class_uses_unit_scaling() {
        let x = vec![vec![0.0, 0.0], vec![1.0, 0.0], vec![0.0, 2.0]];
        let y = ClassIndex::new(&[1, 2, 3]).unwrap();
        let model = kdda_fit(&x, &y, KernelSpec::rbf(1.0).unwrap(), 0).unwrap();
        let d = model.diagnostics();
        assert_eq!(model.m_features(), 2);
        for &lw in &d.within_eigenvalues {
            assert!(lw.abs() < 1e-12, "within eigenvalue {lw}");
            assert!(((1.0 + lw).sqrt().recip() - 1.0).abs() < 1e-12);
        }
        // Final scaling is the identity, so the total scatter equals the
        // whitened between-class scatter.
        assert!(d.total_scatter.sub(&d.between_whitened).unwrap().max_abs() < 1e-9);
    }

    #[test]
    fn training_transforms_match_fit_projections() {
        let (x, y) = blobs();
        let model = kdda_fit(&x, &y, KernelSpec::rbf(0.8).unwrap(), 2).unwrap();
        let batch = model.transform_many(&x).unwrap();
        for (i, z) in x.iter().enumerate() {
            let t = kdda_transform(&model, z).unwrap();
            assert_eq!(t, batch[i]);
            for (a, b) in t.iter().zip(model.diagnostics().train_projections.row(i)) {
                assert!((a - b).abs() < 1e-9 * (1.0 + b.abs()));
            }
        }
        assert!(matches!(
            kdda_transform(&model, &[1.0]),
            Err(Error::InvalidInput(_))
        ));
    }

    #[test]
    fn collinear_means_clamp_feature_count() {
        // Three class means on a line in 2-D: between-class rank 1 for linear.
        let x = vec![
            vec![0.0, 0.1],
            vec![0.0, -0.1],
            vec![1.0, 0.2],
            vec![1.0, -0.2],
            vec![2.0, 0.1],
            vec![2.0, -0.1],
        ];
        let y = ClassIndex::new(&[1, 1, 2, 2, 3, 3]).unwrap();
        let model = kdda_fit(&x, &y, KernelSpec::Linear, 2).unwrap();
        assert_eq!(model.m_features(), 1);
        assert!(model.is_clamped());
    }
}
