//! Kernel principal component analysis, the unsupervised baseline.

use crate::error::{Error, Result};
use crate::kernels::{check_samples, gram_matrix, KernelRows, KernelSpec};
use crate::numerics::{sym_eig, Matrix};

/// Eigenvalues of the centered Gram matrix at or below
/// `KPCA_EIG_TOL · max|K|` are treated as zero. Centering cancels terms of
/// size `max|K|`, so the threshold is tied to that scale rather than to the
/// (possibly round-off sized) largest centered eigenvalue.
pub const KPCA_EIG_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub struct KpcaModel {
    pub(crate) train_samples: Vec<Vec<f64>>,
    pub(crate) kernel: KernelSpec,
    /// `L×M` coefficients (eigenvector columns scaled by `λ^(-1/2)`); `None`
    /// when the centered Gram matrix has no positive eigenvalue.
    pub(crate) coeffs: Option<Matrix>,
    /// Retained eigenvalues of the centered Gram matrix, descending.
    pub(crate) eigenvalues: Vec<f64>,
    /// Row means of the training Gram matrix.
    pub(crate) row_means: Vec<f64>,
    pub(crate) grand_mean: f64,
    pub(crate) requested_features: usize,
}

impl KpcaModel {
    pub fn m_features(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn kernel(&self) -> &KernelSpec {
        &self.kernel
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    /// Training variance captured by each component, `λ / L`.
    pub fn component_variances(&self) -> Vec<f64> {
        let l = self.train_samples.len() as f64;
        self.eigenvalues.iter().map(|v| v / l).collect()
    }

    pub fn coeffs(&self) -> Option<&Matrix> {
        self.coeffs.as_ref()
    }

    /// True when `M` was reduced to the number of positive eigenvalues.
    pub fn is_clamped(&self) -> bool {
        self.m_features() < self.requested_features
    }

    /// True when centering annihilated the data (no positive eigenvalue).
    pub fn is_degenerate(&self) -> bool {
        self.coeffs.is_none()
    }

    pub fn input_dim(&self) -> usize {
        self.train_samples[0].len()
    }

    pub fn transform(&self, z: &[f64]) -> Result<Vec<f64>> {
        kpca_transform(self, z)
    }

    pub fn transform_many(&self, zs: &[Vec<f64>]) -> Result<Vec<Vec<f64>>> {
        let rows = KernelRows::new(self.kernel, &self.train_samples);
        zs.iter().map(|z| self.project(rows.row(z)?)).collect()
    }

    fn project(&self, mut k: Vec<f64>) -> Result<Vec<f64>> {
        let Some(coeffs) = &self.coeffs else {
            return Ok(Vec::new());
        };
        let mean = k.iter().sum::<f64>() / k.len() as f64;
        for (ki, rm) in k.iter_mut().zip(&self.row_means) {
            *ki += self.grand_mean - mean - rm;
        }
        coeffs.t_mul_vec(&k)
    }
}

/// Fits kernel PCA with up to `m_features` components.
pub fn kpca_fit(samples: &[Vec<f64>], kernel: KernelSpec, m_features: usize) -> Result<KpcaModel> {
    kernel.require_mercer()?;
    check_samples(samples)?;
    let l = samples.len();
    if m_features == 0 || m_features > l {
        return Err(Error::InvalidConfig(format!(
            "KPCA needs 1 <= M <= L = {l}, got M = {m_features}"
        )));
    }

    let k = gram_matrix(&kernel, samples)?;
    let row_means: Vec<f64> = (0..l)
        .map(|i| k.row(i).iter().sum::<f64>() / l as f64)
        .collect();
    let grand_mean = row_means.iter().sum::<f64>() / l as f64;
    let mut kc = Matrix::from_fn(l, l, |i, j| {
        k[(i, j)] - row_means[i] - row_means[j] + grand_mean
    });
    kc.symmetrize();

    let eig = sym_eig(&kc, KPCA_EIG_TOL)?;
    let threshold = KPCA_EIG_TOL * k.max_abs();
    let positive = eig
        .eigenvalues
        .iter()
        .take_while(|&&v| v > threshold)
        .count();
    let m = m_features.min(positive);

    let eigenvalues: Vec<f64> = eig.eigenvalues[..m].to_vec();
    let coeffs = (m > 0).then(|| {
        let cols: Vec<usize> = (0..m).collect();
        let inv_sqrt: Vec<f64> = eigenvalues.iter().map(|v| v.sqrt().recip()).collect();
        eig.eigenvectors
            .select_columns(&cols)
            .scale_columns(&inv_sqrt)
    });

    Ok(KpcaModel {
        train_samples: samples.to_vec(),
        kernel,
        coeffs,
        eigenvalues,
        row_means,
        grand_mean,
        requested_features: m_features,
    })
}

/// Projects `z` onto the retained principal directions of the centered
/// feature space. A degenerate model yields an empty vector.
pub fn kpca_transform(model: &KpcaModel, z: &[f64]) -> Result<Vec<f64>> {
    if z.len() != model.input_dim() {
        return Err(Error::InvalidInput(format!(
            "sample has dimension {}, model expects {}",
            z.len(),
            model.input_dim()
        )));
    }
    let k = KernelRows::new(model.kernel, &model.train_samples).row(z)?;
    model.project(k)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn points() -> Vec<Vec<f64>> {
        vec![
            vec![2.0, 0.0],
            vec![0.0, 1.0],
            vec![-2.0, 0.1],
            vec![0.1, -1.0],
            vec![1.0, 0.5],
        ]
    }

    #[test]
    fn constant_data_is_degenerate() {
        let x = vec![vec![0.3, -1.0]; 6];
        for kernel in [KernelSpec::Linear, KernelSpec::rbf(1.0).unwrap()] {
            let model = kpca_fit(&x, kernel, 2).unwrap();
            assert_eq!(model.m_features(), 0);
            assert!(model.is_degenerate());
            assert!(model.is_clamped());
            assert!(kpca_transform(&model, &[1.0, 1.0]).unwrap().is_empty());
        }
    }

    #[test]
    fn invalid_requests() {
        let x = points();
        assert!(matches!(
            kpca_fit(&x, KernelSpec::Linear, 0),
            Err(Error::InvalidConfig(_))
        ));
        assert!(matches!(
            kpca_fit(&x, KernelSpec::Linear, 6),
            Err(Error::InvalidConfig(_))
        ));
        assert!(matches!(
            kpca_fit(&[], KernelSpec::Linear, 1),
            Err(Error::InvalidInput(_))
        ));
        assert!(matches!(
            kpca_fit(&x, KernelSpec::Sigmoid { offset: 1.0 }, 1),
            Err(Error::UnsupportedKernel(_))
        ));
    }

    #[test]
    fn linear_kernel_clamps_to_input_rank() {
        let model = kpca_fit(&points(), KernelSpec::Linear, 4).unwrap();
        assert_eq!(model.m_features(), 2);
        assert!(model.is_clamped());
    }

    #[test]
    fn training_projections_are_centered() {
        let x = points();
        let model = kpca_fit(&x, KernelSpec::rbf(1.0).unwrap(), 3).unwrap();
        let proj = model.transform_many(&x).unwrap();
        for c in 0..model.m_features() {
            let mean: f64 = proj.iter().map(|p| p[c]).sum::<f64>() / x.len() as f64;
            assert!(mean.abs() < 1e-8, "component {c} mean {mean}");
        }
        let ev = model.eigenvalues();
        assert!(ev.windows(2).all(|w| w[0] >= w[1]));
        assert_eq!(kpca_transform(&model, &x[2]).unwrap(), proj[2]);
    }

    #[test]
    fn dimension_mismatch() {
        let model = kpca_fit(&points(), KernelSpec::Linear, 1).unwrap();
        assert!(matches!(
            kpca_transform(&model, &[1.0]),
            Err(Error::InvalidInput(_))
        ));
    }
}
