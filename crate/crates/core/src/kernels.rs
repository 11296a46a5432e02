//! Kernel functions, Gram matrices and cross-kernel vectors.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::numerics::{dot, Matrix};

/// Kernel family together with the hyperparameters that family uses.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum KernelSpec {
    /// `⟨x, y⟩`
    Linear,
    /// `(⟨x, y⟩ + 1)^degree`
    Polynomial { degree: u32 },
    /// `exp(−‖x − y‖² / (2σ²))`
    Rbf { sigma2: f64 },
    /// `tanh(⟨x, y⟩ + offset)`; not positive semi-definite in general.
    Sigmoid { offset: f64 },
}

impl KernelSpec {
    pub fn rbf(sigma2: f64) -> Result<Self> {
        let k = KernelSpec::Rbf { sigma2 };
        k.validate()?;
        Ok(k)
    }

    pub fn polynomial(degree: u32) -> Result<Self> {
        let k = KernelSpec::Polynomial { degree };
        k.validate()?;
        Ok(k)
    }

    pub fn sigmoid(offset: f64) -> Result<Self> {
        let k = KernelSpec::Sigmoid { offset };
        k.validate()?;
        Ok(k)
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            KernelSpec::Linear => Ok(()),
            KernelSpec::Polynomial { degree } if degree >= 1 => Ok(()),
            KernelSpec::Polynomial { degree } => Err(Error::InvalidConfig(format!(
                "polynomial degree must be >= 1, got {degree}"
            ))),
            KernelSpec::Rbf { sigma2 } if sigma2.is_finite() && sigma2 > 0.0 => Ok(()),
            KernelSpec::Rbf { sigma2 } => Err(Error::InvalidConfig(format!(
                "rbf sigma2 must be positive and finite, got {sigma2}"
            ))),
            KernelSpec::Sigmoid { offset } if offset.is_finite() => Ok(()),
            KernelSpec::Sigmoid { offset } => Err(Error::InvalidConfig(format!(
                "sigmoid offset must be finite, got {offset}"
            ))),
        }
    }

    /// Whether the family always yields positive semi-definite Gram matrices.
    pub fn is_mercer(&self) -> bool {
        !matches!(self, KernelSpec::Sigmoid { .. })
    }

    /// Rejects kernels that do not define a valid inner-product space.
    pub(crate) fn require_mercer(&self) -> Result<()> {
        self.validate()?;
        if self.is_mercer() {
            Ok(())
        } else {
            Err(Error::UnsupportedKernel(self.to_string()))
        }
    }

    pub fn family(&self) -> &'static str {
        match self {
            KernelSpec::Linear => "linear",
            KernelSpec::Polynomial { .. } => "poly",
            KernelSpec::Rbf { .. } => "rbf",
            KernelSpec::Sigmoid { .. } => "sigmoid",
        }
    }

    /// Kernel value given precomputed `‖x‖²`, `‖y‖²` and `⟨x, y⟩`.
    #[inline]
    fn combine(&self, xx: f64, yy: f64, xy: f64) -> f64 {
        match *self {
            KernelSpec::Linear => xy,
            KernelSpec::Polynomial { degree } => (xy + 1.0).powi(degree as i32),
            KernelSpec::Rbf { sigma2 } => {
                let d2 = (xx + yy - 2.0 * xy).max(0.0);
                (-d2 / (2.0 * sigma2)).exp()
            }
            KernelSpec::Sigmoid { offset } => (xy + offset).tanh(),
        }
    }

    fn needs_norms(&self) -> bool {
        matches!(self, KernelSpec::Rbf { .. })
    }
}

impl fmt::Display for KernelSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            KernelSpec::Linear => write!(f, "linear"),
            KernelSpec::Polynomial { degree } => write!(f, "poly:{degree}"),
            KernelSpec::Rbf { sigma2 } => write!(f, "rbf:{sigma2:e}"),
            KernelSpec::Sigmoid { offset } => write!(f, "sigmoid:{offset}"),
        }
    }
}

/// Parses `linear`, `poly:<degree>`, `rbf:<sigma2>` or `sigmoid:<offset>`.
impl FromStr for KernelSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (family, param) = match s.split_once(':') {
            Some((f, p)) => (f.trim(), Some(p.trim())),
            None => (s, None),
        };
        let bad = |what: &str| Error::InvalidConfig(format!("kernel `{s}`: {what}"));
        let param_f64 = |p: Option<&str>| -> Result<f64> {
            p.ok_or_else(|| bad("missing parameter"))?
                .parse::<f64>()
                .map_err(|_| bad("parameter is not a number"))
        };
        let spec = match family.to_ascii_lowercase().as_str() {
            "linear" => KernelSpec::Linear,
            "poly" | "polynomial" => KernelSpec::Polynomial {
                degree: param
                    .ok_or_else(|| bad("missing degree"))?
                    .parse()
                    .map_err(|_| bad("degree is not a positive integer"))?,
            },
            "rbf" | "gaussian" => KernelSpec::Rbf {
                sigma2: param_f64(param)?,
            },
            "sigmoid" => KernelSpec::Sigmoid {
                offset: param_f64(param)?,
            },
            _ => return Err(bad("unknown kernel family")),
        };
        spec.validate()?;
        Ok(spec)
    }
}

fn check_dims(x: &[f64], y: &[f64]) -> Result<()> {
    if x.len() != y.len() {
        return Err(Error::InvalidInput(format!(
            "dimension mismatch: {} vs {}",
            x.len(),
            y.len()
        )));
    }
    if x.is_empty() {
        return Err(Error::InvalidInput("zero-dimensional vectors".into()));
    }
    Ok(())
}

/// Evaluates `k(x, y)`.
pub fn eval(spec: &KernelSpec, x: &[f64], y: &[f64]) -> Result<f64> {
    check_dims(x, y)?;
    Ok(eval_unchecked(spec, x, y))
}

#[inline]
pub(crate) fn eval_unchecked(spec: &KernelSpec, x: &[f64], y: &[f64]) -> f64 {
    if spec.needs_norms() {
        spec.combine(dot(x, x), dot(y, y), dot(x, y))
    } else {
        spec.combine(0.0, 0.0, dot(x, y))
    }
}

/// Checks that `samples` is nonempty, of uniform positive dimension and finite.
/// Returns the dimension.
pub(crate) fn check_samples(samples: &[Vec<f64>]) -> Result<usize> {
    let first = samples
        .first()
        .ok_or_else(|| Error::InvalidInput("empty sample list".into()))?;
    let dim = first.len();
    if dim == 0 {
        return Err(Error::InvalidInput("zero-dimensional samples".into()));
    }
    for (i, s) in samples.iter().enumerate() {
        if s.len() != dim {
            return Err(Error::InvalidInput(format!(
                "sample {i} has dimension {}, expected {dim}",
                s.len()
            )));
        }
        if s.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidInput(format!(
                "sample {i} has non-finite values"
            )));
        }
    }
    Ok(dim)
}

fn squared_norms(spec: &KernelSpec, samples: &[Vec<f64>]) -> Vec<f64> {
    if spec.needs_norms() {
        samples.iter().map(|s| dot(s, s)).collect()
    } else {
        vec![0.0; samples.len()]
    }
}

/// `L×L` matrix of pairwise kernel values. Exactly symmetric; the rbf
/// diagonal is exactly one.
pub fn gram_matrix(spec: &KernelSpec, samples: &[Vec<f64>]) -> Result<Matrix> {
    spec.validate()?;
    check_samples(samples)?;
    let l = samples.len();
    let norms = squared_norms(spec, samples);
    let mut k = Matrix::zeros(l, l);
    for i in 0..l {
        for j in i..l {
            let v = if i == j && spec.needs_norms() {
                1.0
            } else {
                spec.combine(norms[i], norms[j], dot(&samples[i], &samples[j]))
            };
            k[(i, j)] = v;
            k[(j, i)] = v;
        }
    }
    k.ensure_finite("gram matrix")?;
    Ok(k)
}

/// Vector of `k(z_i, z)` over the training samples `z_i`.
pub fn kernel_vector(spec: &KernelSpec, train: &[Vec<f64>], z: &[f64]) -> Result<Vec<f64>> {
    let first = train
        .first()
        .ok_or_else(|| Error::InvalidInput("empty training set".into()))?;
    check_dims(first, z)?;
    Ok(train.iter().map(|t| eval_unchecked(spec, t, z)).collect())
}

/// Cross-kernel vectors for many queries against cached training norms.
pub(crate) struct KernelRows<'a> {
    spec: KernelSpec,
    train: &'a [Vec<f64>],
    norms: Vec<f64>,
}

impl<'a> KernelRows<'a> {
    pub(crate) fn new(spec: KernelSpec, train: &'a [Vec<f64>]) -> Self {
        let norms = squared_norms(&spec, train);
        Self { spec, train, norms }
    }

    pub(crate) fn row(&self, z: &[f64]) -> Result<Vec<f64>> {
        let first = self
            .train
            .first()
            .ok_or_else(|| Error::InvalidInput("empty training set".into()))?;
        check_dims(first, z)?;
        let zz = if self.spec.needs_norms() {
            dot(z, z)
        } else {
            0.0
        };
        Ok(self
            .train
            .iter()
            .zip(&self.norms)
            .map(|(t, &tt)| self.spec.combine(tt, zz, dot(t, z)))
            .collect())
    }
}
