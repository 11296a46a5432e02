use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use crate::dataset::{load_image_dir, make_blobs, make_rings, Dataset};
use crate::error::{Error, Result};
use crate::kernels::KernelSpec;

#[derive(Debug, Clone, PartialEq)]
pub enum DataSource {
    /// Directory-per-class PGM images of a fixed size.
    Images {
        dir: PathBuf,
        width: usize,
        height: usize,
    },
    Rings {
        classes: usize,
        per_class: usize,
        noise: f64,
        seed: u64,
    },
    Blobs {
        classes: usize,
        per_class: usize,
        dim: usize,
        separation: f64,
        spread: f64,
        seed: u64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExtractorKind {
    Kdda,
    Kpca,
    /// Classify the raw input vectors.
    None,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ClassifierKind {
    SvmOvr,
    SvmPairwise,
    Nn,
}

impl ClassifierKind {
    pub fn uses_svm(self) -> bool {
        !matches!(self, ClassifierKind::Nn)
    }
}

/// An extractor + classifier pipeline, written `kdda+svm-ovr`. The extractor
/// kernel can be overridden per method with `@`, e.g. `kdda@linear+nn`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Method {
    pub extractor: ExtractorKind,
    pub extractor_kernel: Option<KernelSpec>,
    pub classifier: ClassifierKind,
}

impl Method {
    pub fn new(extractor: ExtractorKind, classifier: ClassifierKind) -> Self {
        Self {
            extractor,
            extractor_kernel: None,
            classifier,
        }
    }

    pub fn with_kernel(mut self, kernel: KernelSpec) -> Self {
        self.extractor_kernel = Some(kernel);
        self
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let e = match self.extractor {
            ExtractorKind::Kdda => "kdda",
            ExtractorKind::Kpca => "kpca",
            ExtractorKind::None => "none",
        };
        let c = match self.classifier {
            ClassifierKind::SvmOvr => "svm-ovr",
            ClassifierKind::SvmPairwise => "svm-pairwise",
            ClassifierKind::Nn => "nn",
        };
        match &self.extractor_kernel {
            Some(k) => write!(f, "{e}@{k}+{c}"),
            None => write!(f, "{e}+{c}"),
        }
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = |why: &str| Error::InvalidConfig(format!("method `{s}`: {why}"));
        let (ext, cls) = s
            .trim()
            .rsplit_once('+')
            .ok_or_else(|| bad("expected <extractor>+<classifier>"))?;
        let (ext, kernel) = match ext.split_once('@') {
            Some((e, k)) => (e, Some(k.parse::<KernelSpec>()?)),
            None => (ext, None),
        };
        let extractor = match ext.trim() {
            "kdda" => ExtractorKind::Kdda,
            "kpca" => ExtractorKind::Kpca,
            "none" => ExtractorKind::None,
            _ => return Err(bad("extractor must be kdda, kpca or none")),
        };
        if extractor == ExtractorKind::None && kernel.is_some() {
            return Err(bad("extractor `none` takes no kernel"));
        }
        let classifier = match cls.trim() {
            "svm-ovr" => ClassifierKind::SvmOvr,
            "svm-pairwise" => ClassifierKind::SvmPairwise,
            "nn" => ClassifierKind::Nn,
            _ => return Err(bad("classifier must be svm-ovr, svm-pairwise or nn")),
        };
        Ok(Method {
            extractor,
            extractor_kernel: kernel,
            classifier,
        })
    }
}

/// How the SVM kernel is chosen for each (k_train, method) cell.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SvmKernelChoice {
    Fixed(KernelSpec),
    /// RBF with σ² picked by a coarse grid search on calibration splits.
    Auto,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CostChoice {
    Fixed(f64),
    /// Picked from a coarse grid on calibration splits.
    Auto,
}

/// `[x_min, x_max, y_min, y_max]`.
pub type Bounds = [f64; 4];

#[derive(Debug, Clone, PartialEq)]
pub struct BoundaryConfig {
    /// Grid points per axis.
    pub resolution: usize,
    /// Defaults to the training features' bounding box padded by 10%.
    pub bounds: Option<Bounds>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub source: DataSource,
    /// Factor applied to every loaded sample value (images load in `[0, 1]`).
    pub pixel_scale: f64,
    pub methods: Vec<Method>,
    pub extractor_kernel: KernelSpec,
    pub svm_kernel: SvmKernelChoice,
    pub c_cost: CostChoice,
    pub kkt_tol: f64,
    pub max_passes: usize,
    /// KDDA feature count; `0` means `C − 1`.
    pub m_features: usize,
    /// KPCA feature count; `0` keeps every positive-variance component.
    pub kpca_m_features: usize,
    pub k_train: Vec<usize>,
    pub repeats: usize,
    pub seed: u64,
    pub sweep_sigma2: Vec<f64>,
    pub sweep_m: Vec<usize>,
    pub boundary: BoundaryConfig,
}

impl ExperimentConfig {
    /// Configuration with the default protocol: one-vs-rest SVM on KDDA
    /// features, σ²_KDDA = 5·10⁶, automatic SVM σ², `C = 10`, 10 repeats.
    pub fn new(source: DataSource, k_train: Vec<usize>) -> Self {
        Self {
            source,
            pixel_scale: 1.0,
            methods: vec![Method::new(ExtractorKind::Kdda, ClassifierKind::SvmOvr)],
            extractor_kernel: KernelSpec::Rbf { sigma2: 5e6 },
            svm_kernel: SvmKernelChoice::Auto,
            c_cost: CostChoice::Fixed(10.0),
            kkt_tol: 1e-3,
            max_passes: 1000,
            m_features: 0,
            kpca_m_features: 0,
            k_train,
            repeats: 10,
            seed: 0,
            sweep_sigma2: Vec::new(),
            sweep_m: Vec::new(),
            boundary: BoundaryConfig {
                resolution: 100,
                bounds: None,
            },
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidConfig(m));
        if self.repeats == 0 {
            return bad("repeats must be at least 1".into());
        }
        if self.k_train.is_empty() || self.k_train.contains(&0) {
            return bad("k_train needs at least one positive value".into());
        }
        if self.methods.is_empty() {
            return bad("no methods configured".into());
        }
        if !(self.pixel_scale.is_finite() && self.pixel_scale > 0.0) {
            return bad(format!(
                "pixel_scale must be positive, got {}",
                self.pixel_scale
            ));
        }
        if !(self.kkt_tol.is_finite() && self.kkt_tol > 0.0) {
            return bad(format!("kkt_tol must be positive, got {}", self.kkt_tol));
        }
        if self.max_passes == 0 {
            return bad("max_passes must be at least 1".into());
        }
        if let CostChoice::Fixed(c) = self.c_cost {
            if !(c.is_finite() && c > 0.0) {
                return bad(format!("c_cost must be positive, got {c}"));
            }
        }
        if let SvmKernelChoice::Fixed(k) = self.svm_kernel {
            k.validate()?;
        }
        self.extractor_kernel.validate()?;
        if self.boundary.resolution == 0 {
            return bad("boundary.resolution must be at least 1".into());
        }
        if let Some([x0, x1, y0, y1]) = self.boundary.bounds {
            if !(x0 < x1 && y0 < y1) || [x0, x1, y0, y1].iter().any(|v| !v.is_finite()) {
                return bad("boundary.bounds must be finite with min < max".into());
            }
        }
        Ok(())
    }

    /// Loads or generates the dataset, applying `pixel_scale`.
    pub fn load_dataset(&self) -> Result<Dataset> {
        let ds = match &self.source {
            DataSource::Images { dir, width, height } => load_image_dir(dir, *width, *height)?,
            DataSource::Rings {
                classes,
                per_class,
                noise,
                seed,
            } => make_rings(*classes, *per_class, *noise, *seed)?,
            DataSource::Blobs {
                classes,
                per_class,
                dim,
                separation,
                spread,
                seed,
            } => make_blobs(*classes, *per_class, *dim, *separation, *spread, *seed)?,
        };
        Ok(ds.scaled(self.pixel_scale))
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let mut cfg = parse(&text).map_err(|e| match e {
            Error::InvalidConfig(m) => Error::file(path, m),
            other => other,
        })?;
        // Relative image directories are resolved against the config file.
        if let DataSource::Images { dir, .. } = &mut cfg.source {
            if dir.is_relative() {
                if let Some(parent) = path.parent() {
                    *dir = parent.join(&*dir);
                }
            }
        }
        Ok(cfg)
    }
}

impl FromStr for ExperimentConfig {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse(s)
    }
}

const KEYS: &[&str] = &[
    "dataset",
    "image_width",
    "image_height",
    "pixel_scale",
    "synthetic.classes",
    "synthetic.per_class",
    "synthetic.noise",
    "synthetic.dim",
    "synthetic.separation",
    "synthetic.spread",
    "synthetic.seed",
    "methods",
    "extractor_kernel",
    "svm_kernel",
    "c_cost",
    "kkt_tol",
    "max_passes",
    "m_features",
    "kpca_m_features",
    "k_train",
    "repeats",
    "seed",
    "sweep.sigma2",
    "sweep.m",
    "boundary.resolution",
    "boundary.bounds",
];

struct Entries {
    map: BTreeMap<String, (usize, String)>,
}

impl Entries {
    fn raw(&self, key: &str) -> Option<&(usize, String)> {
        self.map.get(key)
    }

    fn get<T: FromStr>(&self, key: &str) -> Result<Option<T>> {
        match self.raw(key) {
            None => Ok(None),
            Some((line, v)) => v.parse().map(Some).map_err(|_| {
                Error::InvalidConfig(format!("line {line}: `{key}` has invalid value `{v}`"))
            }),
        }
    }

    fn or<T: FromStr>(&self, key: &str, default: T) -> Result<T> {
        Ok(self.get(key)?.unwrap_or(default))
    }

    fn list<T: FromStr>(&self, key: &str) -> Result<Option<Vec<T>>>
    where
        T::Err: fmt::Display,
    {
        let Some((line, v)) = self.raw(key) else {
            return Ok(None);
        };
        v.split(',')
            .map(str::trim)
            .filter(|t| !t.is_empty())
            .map(|t| {
                t.parse().map_err(|e| {
                    Error::InvalidConfig(format!("line {line}: `{key}` entry `{t}`: {e}"))
                })
            })
            .collect::<Result<Vec<T>>>()
            .map(Some)
    }

    fn required<T: FromStr>(&self, key: &str, context: &str) -> Result<T> {
        self.get(key)?
            .ok_or_else(|| Error::InvalidConfig(format!("`{key}` is required for {context}")))
    }
}

fn parse(text: &str) -> Result<ExperimentConfig> {
    let mut map = BTreeMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| {
            Error::InvalidConfig(format!("line {line_no}: expected `key = value`"))
        })?;
        let key = key.trim();
        if !KEYS.contains(&key) {
            return Err(Error::InvalidConfig(format!(
                "line {line_no}: unknown key `{key}`"
            )));
        }
        if map
            .insert(key.to_string(), (line_no, value.trim().to_string()))
            .is_some()
        {
            return Err(Error::InvalidConfig(format!(
                "line {line_no}: duplicate key `{key}`"
            )));
        }
    }
    let e = Entries { map };

    let dataset: String = e.required("dataset", "every experiment")?;
    let synthetic_seed = e.or("synthetic.seed", 1u64)?;
    let source = match dataset.split_once(':') {
        Some(("images", dir)) => DataSource::Images {
            dir: PathBuf::from(dir.trim()),
            width: e.required("image_width", "image datasets")?,
            height: e.required("image_height", "image datasets")?,
        },
        None if dataset == "rings" => DataSource::Rings {
            classes: e.or("synthetic.classes", 4)?,
            per_class: e.or("synthetic.per_class", 50)?,
            noise: e.or("synthetic.noise", 0.05)?,
            seed: synthetic_seed,
        },
        None if dataset == "blobs" => DataSource::Blobs {
            classes: e.or("synthetic.classes", 3)?,
            per_class: e.or("synthetic.per_class", 20)?,
            dim: e.or("synthetic.dim", 2)?,
            separation: e.or("synthetic.separation", 5.0)?,
            spread: e.or("synthetic.spread", 0.5)?,
            seed: synthetic_seed,
        },
        _ => {
            return Err(Error::InvalidConfig(format!(
                "dataset `{dataset}`: expected images:<dir>, rings or blobs"
            )))
        }
    };

    let k_train = e
        .list("k_train")?
        .ok_or_else(|| Error::InvalidConfig("`k_train` is required".into()))?;
    let mut cfg = ExperimentConfig::new(source, k_train);
    cfg.pixel_scale = e.or("pixel_scale", 1.0)?;
    if let Some(methods) = e.list("methods")? {
        cfg.methods = methods;
    }
    cfg.extractor_kernel = e.or("extractor_kernel", cfg.extractor_kernel)?;
    cfg.svm_kernel = match e.raw("svm_kernel").map(|(_, v)| v.as_str()) {
        None | Some("auto") => SvmKernelChoice::Auto,
        Some(v) => SvmKernelChoice::Fixed(v.parse()?),
    };
    cfg.c_cost = match e.raw("c_cost").map(|(_, v)| v.as_str()) {
        None => cfg.c_cost,
        Some("auto") => CostChoice::Auto,
        Some(_) => CostChoice::Fixed(e.required("c_cost", "")?),
    };
    cfg.kkt_tol = e.or("kkt_tol", cfg.kkt_tol)?;
    cfg.max_passes = e.or("max_passes", cfg.max_passes)?;
    cfg.m_features = e.or("m_features", 0)?;
    cfg.kpca_m_features = e.or("kpca_m_features", 0)?;
    cfg.repeats = e.or("repeats", cfg.repeats)?;
    cfg.seed = e.or("seed", 0)?;
    cfg.sweep_sigma2 = e.list("sweep.sigma2")?.unwrap_or_default();
    cfg.sweep_m = e.list("sweep.m")?.unwrap_or_default();
    cfg.boundary.resolution = e.or("boundary.resolution", cfg.boundary.resolution)?;
    if let Some(b) = e.list::<f64>("boundary.bounds")? {
        let bounds: Bounds = b.try_into().map_err(|_| {
            Error::InvalidConfig("boundary.bounds needs x_min, x_max, y_min, y_max".into())
        })?;
        cfg.boundary.bounds = Some(bounds);
    }
    cfg.validate()?;
    Ok(cfg)
}
