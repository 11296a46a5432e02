//! Bit-exact text container for fitted models.
//!
//! A container is a line-oriented UTF-8 file:
//!
//! ```text
//! kdda-model 1 <kind>
//! <field> <payload...>
//! ...
//! end
//! ```
//!
//! Every real number is written as the 16 hex digits of its IEEE-754 bit
//! pattern, so a save/load round trip reproduces each value exactly
//! (including signed zeros and NaN payloads). Vector lists are written as a
//! `<count> <dim>` header followed by one line per vector. Fields are read
//! back in the order they were written; any mismatch is a format error that
//! names the line.

use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};
use crate::extractors::{KddaDiagnostics, KddaModel, KpcaModel};
use crate::kernels::KernelSpec;
use crate::multiclass::{DecisionStats, NnModel, OvrModel, PairModel, PairwiseModel};
use crate::numerics::Matrix;
use crate::svm::{SvmModel, TrainStats, TrainStatus};

const MAGIC: &str = "kdda-model";
const VERSION: u32 = 1;

/// A model type that can be stored in a container.
pub trait Persist: Sized {
    /// Tag written in the header line.
    const KIND: &'static str;

    fn write_fields(&self, w: &mut Writer);

    fn read_fields(r: &mut Reader<'_>) -> Result<Self>;
}

/// Serialises `model` into a container string.
pub fn to_string<T: Persist>(model: &T) -> String {
    let mut w = Writer::default();
    writeln!(w.out, "{MAGIC} {VERSION} {}", T::KIND).unwrap();
    model.write_fields(&mut w);
    w.out.push_str("end\n");
    w.out
}

/// Parses a container produced by [`to_string`].
pub fn from_str<T: Persist>(text: &str) -> Result<T> {
    let mut r = Reader::new(text);
    let header = r.next_line()?;
    let parts: Vec<&str> = header.split_whitespace().collect();
    match parts.as_slice() {
        [MAGIC, v, kind] => {
            if *v != VERSION.to_string() {
                return Err(r.error(format!("unsupported container version {v}")));
            }
            if *kind != T::KIND {
                return Err(r.error(format!("container holds `{kind}`, expected `{}`", T::KIND)));
            }
        }
        _ => return Err(r.error(format!("not a {MAGIC} container"))),
    }
    let model = T::read_fields(&mut r)?;
    if r.next_line()? != "end" {
        return Err(r.error("expected `end`".into()));
    }
    Ok(model)
}

pub fn save<T: Persist>(model: &T, path: &Path) -> Result<()> {
    std::fs::write(path, to_string(model)).map_err(|e| Error::io(path, e))
}

pub fn load<T: Persist>(path: &Path) -> Result<T> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    from_str(&text).map_err(|e| match e {
        Error::Format(m) => Error::file(path, m),
        other => other,
    })
}

fn hex(v: f64) -> String {
    format!("{:016x}", v.to_bits())
}

#[derive(Default)]
pub struct Writer {
    out: String,
}

impl Writer {
    pub fn real(&mut self, name: &str, v: f64) {
        writeln!(self.out, "{name} {}", hex(v)).unwrap();
    }

    pub fn int(&mut self, name: &str, v: usize) {
        writeln!(self.out, "{name} {v}").unwrap();
    }

    pub fn text(&mut self, name: &str, v: &str) {
        writeln!(self.out, "{name} {v}").unwrap();
    }

    pub fn reals(&mut self, name: &str, vs: &[f64]) {
        write!(self.out, "{name} {}", vs.len()).unwrap();
        for &v in vs {
            write!(self.out, " {}", hex(v)).unwrap();
        }
        self.out.push('\n');
    }

    pub fn ints(&mut self, name: &str, vs: &[usize]) {
        write!(self.out, "{name} {}", vs.len()).unwrap();
        for v in vs {
            write!(self.out, " {v}").unwrap();
        }
        self.out.push('\n');
    }

    pub fn vectors(&mut self, name: &str, vs: &[Vec<f64>], dim: usize) {
        writeln!(self.out, "{name} {} {dim}", vs.len()).unwrap();
        for v in vs {
            let line: Vec<String> = v.iter().map(|&x| hex(x)).collect();
            writeln!(self.out, "{}", line.join(" ")).unwrap();
        }
    }

    pub fn matrix(&mut self, name: &str, m: &Matrix) {
        writeln!(self.out, "{name} {} {}", m.rows(), m.cols()).unwrap();
        for i in 0..m.rows() {
            let line: Vec<String> = m.row(i).iter().map(|&x| hex(x)).collect();
            writeln!(self.out, "{}", line.join(" ")).unwrap();
        }
    }

    pub fn kernel(&mut self, name: &str, k: &KernelSpec) {
        match *k {
            KernelSpec::Linear => writeln!(self.out, "{name} linear"),
            KernelSpec::Polynomial { degree } => writeln!(self.out, "{name} poly {degree}"),
            KernelSpec::Rbf { sigma2 } => writeln!(self.out, "{name} rbf {}", hex(sigma2)),
            KernelSpec::Sigmoid { offset } => writeln!(self.out, "{name} sigmoid {}", hex(offset)),
        }
        .unwrap();
    }
}

pub struct Reader<'a> {
    lines: std::str::Lines<'a>,
    line_no: usize,
}

impl<'a> Reader<'a> {
    fn new(text: &'a str) -> Self {
        Self {
            lines: text.lines(),
            line_no: 0,
        }
    }

    fn error(&self, msg: String) -> Error {
        Error::Format(format!("line {}: {msg}", self.line_no))
    }

    fn next_line(&mut self) -> Result<&'a str> {
        self.line_no += 1;
        self.lines
            .next()
            .map(str::trim_end)
            .ok_or_else(|| self.error("unexpected end of container".into()))
    }

    /// Payload tokens of the next line, which must start with `name`.
    fn field(&mut self, name: &str) -> Result<Vec<&'a str>> {
        let line = self.next_line()?;
        let mut tokens = line.split_whitespace();
        match tokens.next() {
            Some(t) if t == name => Ok(tokens.collect()),
            Some(t) => Err(self.error(format!("expected field `{name}`, found `{t}`"))),
            None => Err(self.error(format!("expected field `{name}`, found blank line"))),
        }
    }

    fn parse_real(&self, token: &str) -> Result<f64> {
        if token.len() != 16 {
            return Err(self.error(format!("`{token}` is not a 16-digit hex real")));
        }
        u64::from_str_radix(token, 16)
            .map(f64::from_bits)
            .map_err(|_| self.error(format!("`{token}` is not a 16-digit hex real")))
    }

    fn parse_int(&self, token: &str) -> Result<usize> {
        token
            .parse()
            .map_err(|_| self.error(format!("`{token}` is not an unsigned integer")))
    }

    fn single<'t>(&self, name: &str, tokens: &[&'t str]) -> Result<&'t str> {
        match tokens {
            [t] => Ok(t),
            _ => Err(self.error(format!("field `{name}` takes exactly one value"))),
        }
    }

    pub fn real(&mut self, name: &str) -> Result<f64> {
        let t = self.field(name)?;
        let t = self.single(name, &t)?;
        self.parse_real(t)
    }

    pub fn int(&mut self, name: &str) -> Result<usize> {
        let t = self.field(name)?;
        let t = self.single(name, &t)?;
        self.parse_int(t)
    }

    pub fn text(&mut self, name: &str) -> Result<&'a str> {
        let t = self.field(name)?;
        self.single(name, &t)
    }

    fn counted(&mut self, name: &str) -> Result<Vec<&'a str>> {
        let t = self.field(name)?;
        let (count, rest) = t
            .split_first()
            .ok_or_else(|| self.error(format!("field `{name}` is missing its length")))?;
        let count = self.parse_int(count)?;
        if rest.len() != count {
            return Err(self.error(format!(
                "field `{name}` declares {count} values but has {}",
                rest.len()
            )));
        }
        Ok(rest.to_vec())
    }

    pub fn reals(&mut self, name: &str) -> Result<Vec<f64>> {
        let tokens = self.counted(name)?;
        tokens.iter().map(|t| self.parse_real(t)).collect()
    }

    pub fn ints(&mut self, name: &str) -> Result<Vec<usize>> {
        let tokens = self.counted(name)?;
        tokens.iter().map(|t| self.parse_int(t)).collect()
    }

    fn shape(&mut self, name: &str) -> Result<(usize, usize)> {
        let t = self.field(name)?;
        match t.as_slice() {
            [a, b] => Ok((self.parse_int(a)?, self.parse_int(b)?)),
            _ => Err(self.error(format!("field `{name}` needs two sizes"))),
        }
    }

    fn row(&mut self, width: usize) -> Result<Vec<f64>> {
        let line = self.next_line()?;
        let values: Vec<f64> = line
            .split_whitespace()
            .map(|t| self.parse_real(t))
            .collect::<Result<_>>()?;
        if values.len() != width {
            return Err(self.error(format!("expected {width} values, found {}", values.len())));
        }
        Ok(values)
    }

    /// Returns the vectors and their declared dimension.
    pub fn vectors(&mut self, name: &str) -> Result<(Vec<Vec<f64>>, usize)> {
        let (count, dim) = self.shape(name)?;
        let vs = (0..count).map(|_| self.row(dim)).collect::<Result<_>>()?;
        Ok((vs, dim))
    }

    pub fn matrix(&mut self, name: &str) -> Result<Matrix> {
        let (rows, cols) = self.shape(name)?;
        let mut data = Vec::with_capacity(rows * cols);
        for _ in 0..rows {
            data.extend(self.row(cols)?);
        }
        Matrix::new(rows, cols, data).map_err(|e| self.error(e.to_string()))
    }

    pub fn kernel(&mut self, name: &str) -> Result<KernelSpec> {
        let t = self.field(name)?;
        let spec = match t.as_slice() {
            ["linear"] => KernelSpec::Linear,
            ["poly", d] => KernelSpec::Polynomial {
                degree: self.parse_int(d)? as u32,
            },
            ["rbf", s] => KernelSpec::Rbf {
                sigma2: self.parse_real(s)?,
            },
            ["sigmoid", a] => KernelSpec::Sigmoid {
                offset: self.parse_real(a)?,
            },
            _ => return Err(self.error(format!("bad kernel in field `{name}`"))),
        };
        spec.validate().map_err(|e| self.error(e.to_string()))?;
        Ok(spec)
    }
}

impl Persist for KddaModel {
    const KIND: &'static str = "kdda";

    fn write_fields(&self, w: &mut Writer) {
        let d = &self.diagnostics;
        w.kernel("kernel", &self.kernel);
        w.vectors("train", &self.train_samples, self.input_dim());
        w.matrix("coeffs", &self.coeffs);
        w.reals("between_spectrum", &d.between_spectrum);
        w.int("between_rank", d.between_rank);
        w.reals("within_eigenvalues", &d.within_eigenvalues);
        w.matrix("between_whitened", &d.between_whitened);
        w.matrix("total_scatter", &d.total_scatter);
        w.int("requested_features", d.requested_features);
        w.matrix("train_projections", &d.train_projections);
    }

    fn read_fields(r: &mut Reader<'_>) -> Result<Self> {
        let kernel = r.kernel("kernel")?;
        let (train_samples, _) = r.vectors("train")?;
        let coeffs = r.matrix("coeffs")?;
        let diagnostics = KddaDiagnostics {
            between_spectrum: r.reals("between_spectrum")?,
            between_rank: r.int("between_rank")?,
            within_eigenvalues: r.reals("within_eigenvalues")?,
            between_whitened: r.matrix("between_whitened")?,
            total_scatter: r.matrix("total_scatter")?,
            requested_features: r.int("requested_features")?,
            train_projections: r.matrix("train_projections")?,
        };
        if coeffs.rows() != train_samples.len() || train_samples.is_empty() {
            return Err(r.error("coefficient rows do not match the training set".into()));
        }
        Ok(KddaModel {
            train_samples,
            kernel,
            coeffs,
            diagnostics,
        })
    }
}

impl Persist for KpcaModel {
    const KIND: &'static str = "kpca";

    fn write_fields(&self, w: &mut Writer) {
        w.kernel("kernel", &self.kernel);
        w.vectors("train", &self.train_samples, self.input_dim());
        match &self.coeffs {
            Some(c) => {
                w.int("has_coeffs", 1);
                w.matrix("coeffs", c);
            }
            None => w.int("has_coeffs", 0),
        }
        w.reals("eigenvalues", &self.eigenvalues);
        w.reals("row_means", &self.row_means);
        w.real("grand_mean", self.grand_mean);
        w.int("requested_features", self.requested_features);
    }

    fn read_fields(r: &mut Reader<'_>) -> Result<Self> {
        let kernel = r.kernel("kernel")?;
        let (train_samples, _) = r.vectors("train")?;
        let coeffs = match r.int("has_coeffs")? {
            0 => None,
            1 => Some(r.matrix("coeffs")?),
            _ => return Err(r.error("`has_coeffs` must be 0 or 1".into())),
        };
        let eigenvalues = r.reals("eigenvalues")?;
        let row_means = r.reals("row_means")?;
        if train_samples.is_empty() || row_means.len() != train_samples.len() {
            return Err(r.error("row means do not match the training set".into()));
        }
        Ok(KpcaModel {
            train_samples,
            kernel,
            coeffs,
            eigenvalues,
            row_means,
            grand_mean: r.real("grand_mean")?,
            requested_features: r.int("requested_features")?,
        })
    }
}

impl Persist for SvmModel {
    const KIND: &'static str = "svm";

    fn write_fields(&self, w: &mut Writer) {
        w.kernel("kernel", &self.kernel);
        w.real("c_cost", self.c_cost);
        w.int("dim", self.dim);
        w.vectors("support_vectors", &self.support_vectors, self.dim);
        w.ints("support_indices", &self.support_indices);
        w.reals("dual_coeffs", &self.dual_coeffs);
        w.real("bias", self.bias);
        w.text(
            "status",
            match self.status {
                TrainStatus::Converged => "converged",
                TrainStatus::NotConverged => "not-converged",
            },
        );
        w.int("iterations", self.stats.iterations);
        w.real("dual_objective", self.stats.dual_objective);
        w.real("max_violation", self.stats.max_violation);
    }

    fn read_fields(r: &mut Reader<'_>) -> Result<Self> {
        let kernel = r.kernel("kernel")?;
        let c_cost = r.real("c_cost")?;
        let dim = r.int("dim")?;
        let (support_vectors, sv_dim) = r.vectors("support_vectors")?;
        let support_indices = r.ints("support_indices")?;
        let dual_coeffs = r.reals("dual_coeffs")?;
        if sv_dim != dim
            || support_indices.len() != support_vectors.len()
            || dual_coeffs.len() != support_vectors.len()
        {
            return Err(r.error("support vector fields disagree in size".into()));
        }
        let bias = r.real("bias")?;
        let status = match r.text("status")? {
            "converged" => TrainStatus::Converged,
            "not-converged" => TrainStatus::NotConverged,
            other => return Err(r.error(format!("unknown status `{other}`"))),
        };
        let stats = TrainStats {
            iterations: r.int("iterations")?,
            dual_objective: r.real("dual_objective")?,
            max_violation: r.real("max_violation")?,
        };
        Ok(SvmModel {
            support_vectors,
            support_indices,
            dual_coeffs,
            bias,
            kernel,
            c_cost,
            dim,
            status,
            stats,
        })
    }
}

impl Persist for OvrModel {
    const KIND: &'static str = "ovr";

    fn write_fields(&self, w: &mut Writer) {
        w.int("dim", self.dim);
        w.int("classes", self.models.len());
        for m in &self.models {
            m.write_fields(w);
        }
    }

    fn read_fields(r: &mut Reader<'_>) -> Result<Self> {
        let dim = r.int("dim")?;
        let classes = r.int("classes")?;
        let models = (0..classes)
            .map(|_| SvmModel::read_fields(r))
            .collect::<Result<_>>()?;
        Ok(OvrModel { models, dim })
    }
}

impl Persist for PairwiseModel {
    const KIND: &'static str = "pairwise";

    fn write_fields(&self, w: &mut Writer) {
        w.int("dim", self.dim);
        w.int("classes", self.classes);
        w.int("pairs", self.pairs.len());
        for p in &self.pairs {
            w.ints("pair", &[p.first, p.second]);
            w.reals("first_stats", &[p.first_stats.mean, p.first_stats.stddev]);
            w.reals(
                "second_stats",
                &[p.second_stats.mean, p.second_stats.stddev],
            );
            p.model.write_fields(w);
        }
    }

    fn read_fields(r: &mut Reader<'_>) -> Result<Self> {
        let dim = r.int("dim")?;
        let classes = r.int("classes")?;
        let count = r.int("pairs")?;
        let mut pairs = Vec::with_capacity(count);
        for _ in 0..count {
            let ids = r.ints("pair")?;
            let a = r.reals("first_stats")?;
            let b = r.reals("second_stats")?;
            let (&[first, second], &[m1, s1], &[m2, s2]) =
                (ids.as_slice(), a.as_slice(), b.as_slice())
            else {
                return Err(r.error("malformed pair record".into()));
            };
            pairs.push(PairModel {
                first,
                second,
                first_stats: DecisionStats {
                    mean: m1,
                    stddev: s1,
                },
                second_stats: DecisionStats {
                    mean: m2,
                    stddev: s2,
                },
                model: SvmModel::read_fields(r)?,
            });
        }
        Ok(PairwiseModel {
            pairs,
            classes,
            dim,
        })
    }
}

impl Persist for NnModel {
    const KIND: &'static str = "nn";

    fn write_fields(&self, w: &mut Writer) {
        w.int("classes", self.classes);
        w.vectors("samples", &self.samples, self.samples[0].len());
        w.ints("labels", &self.labels);
    }

    fn read_fields(r: &mut Reader<'_>) -> Result<Self> {
        let classes = r.int("classes")?;
        let (samples, _) = r.vectors("samples")?;
        let labels = r.ints("labels")?;
        if samples.is_empty() || labels.len() != samples.len() {
            return Err(r.error("sample and label counts differ".into()));
        }
        Ok(NnModel {
            samples,
            labels,
            classes,
        })
    }
}
