//! Acceptance checks, one line per criterion.
//!
//! Runs as a plain binary so the verdict lines are always printed. A failed
//! criterion is reported as FAIL; set `KDDA_ACCEPTANCE_STRICT=1` to also make
//! the process exit nonzero. The UMIST check runs only when
//! `KDDA_UMIST_DIR` points at a directory-per-subject PGM tree.

mod common;

use std::path::PathBuf;
use std::time::{Duration, Instant};

use common::{
    brute_force_dual, dlda_oracle, max_rel_error_up_to_sign, pca_oracle, random_binary_problem,
    random_fixture,
};
use kdda::dataset::{make_rings, split_indices, SplitSpec};
use kdda::extractors::{kdda_fit, kpca_fit};
use kdda::harness::{run_experiment, DataSource, ExperimentConfig, Report};
use kdda::kernels::gram_matrix;
use kdda::numerics::{sym_eig, Matrix, DEFAULT_EIG_TOL};
use kdda::svm::{svm_train, svm_train_observed, SmoIterate, SvmTrainConfig};
use kdda::{ClassIndex, Error, KernelSpec};

enum Verdict {
    Pass,
    Fail,
    Skip,
}

struct Line {
    name: &'static str,
    verdict: Verdict,
    detail: String,
}

fn check(name: &'static str, ok: bool, detail: String) -> Line {
    let verdict = if ok { Verdict::Pass } else { Verdict::Fail };
    Line {
        name,
        verdict,
        detail,
    }
}

fn secs(d: Duration) -> f64 {
    d.as_secs_f64()
}

fn kdda_oracle() -> Line {
    let start = Instant::now();
    let mut worst = 0.0f64;
    for seed in 0..24 {
        let fx = random_fixture(seed);
        let index = ClassIndex::new(&fx.labels).unwrap();
        for m in [0, 1] {
            let model = kdda_fit(&fx.train, &index, KernelSpec::Linear, m).unwrap();
            let err = max_rel_error_up_to_sign(
                &model.transform_many(&fx.queries).unwrap(),
                &dlda_oracle(&fx, m),
            );
            worst = worst.max(err);
        }
    }
    let t = start.elapsed();
    check(
        "linear KDDA equals direct LDA",
        worst <= 1e-6 && t < Duration::from_secs(10),
        format!(
            "24 fixtures, max rel error {worst:.2e} (tol 1e-6), {:.2}s (limit 10s)",
            secs(t)
        ),
    )
}

fn kpca_oracle() -> Line {
    let start = Instant::now();
    let mut worst = 0.0f64;
    for seed in 0..24 {
        let fx = random_fixture(seed);
        let m = fx.train[0].len().min(fx.train.len() - 1).min(3);
        let model = kpca_fit(&fx.train, KernelSpec::Linear, m).unwrap();
        let err = max_rel_error_up_to_sign(
            &model.transform_many(&fx.queries).unwrap(),
            &pca_oracle(&fx.train, &fx.queries, m),
        );
        worst = worst.max(err);
    }
    let t = start.elapsed();
    check(
        "linear KPCA equals PCA",
        worst <= 1e-6,
        format!(
            "24 fixtures, max rel error {worst:.2e} (tol 1e-6), {:.2}s",
            secs(t)
        ),
    )
}

fn smo_oracle() -> Line {
    let start = Instant::now();
    let (mut worst, mut audits_failed) = (0.0f64, 0);
    for seed in 0..24 {
        let p = random_binary_problem(seed);
        let model = svm_train(&p.samples, &p.labels, &p.cfg).unwrap();
        let exact = brute_force_dual(&p.samples, &p.labels, p.cfg.kernel, p.cfg.c_cost);
        let rel = (model.stats().dual_objective - exact).abs() / exact.abs().max(f64::MIN_POSITIVE);
        worst = worst.max(rel);
        if !model.is_converged() || !model.audit(&p.samples, &p.labels, 1e-3).unwrap().passed() {
            audits_failed += 1;
        }
    }
    let t = start.elapsed();
    check(
        "SMO reaches the exact dual optimum",
        worst <= 1e-3 && audits_failed == 0 && t < Duration::from_secs(30),
        format!(
            "24 problems, max rel dual gap {worst:.2e} (tol 1e-3), {audits_failed} KKT audits failed, {:.2}s (limit 30s)",
            secs(t)
        ),
    )
}

fn rate(report: &Report, k: usize, method: &str) -> f64 {
    report
        .cell(k, method)
        .and_then(|c| c.mean_rate())
        .unwrap_or(f64::NAN)
}

fn rings_margin() -> Line {
    let mut cfg = ExperimentConfig::new(
        DataSource::Rings {
            classes: 4,
            per_class: 50,
            noise: 0.05,
            seed: 1,
        },
        vec![25],
    );
    cfg.extractor_kernel = KernelSpec::Rbf { sigma2: 4.0 };
    cfg.methods = vec![
        "kdda+svm-ovr".parse().unwrap(),
        "kdda@linear+nn".parse().unwrap(),
    ];
    cfg.repeats = 10;
    let report = run_experiment(&cfg).unwrap();
    let kernel = rate(&report, 25, "kdda+svm-ovr");
    let linear = rate(&report, 25, "kdda@linear+nn");
    let margin = kernel - linear;
    check(
        "rings: kernel KDDA+SVM beats linear LDA+NN by 10pp",
        margin >= 0.10 && report.failed_repeats() == 0,
        format!(
            "k=25, 10 repeats: kdda+svm {:.1}%, lda+nn {:.1}%, margin {:+.1}pp",
            100.0 * kernel,
            100.0 * linear,
            100.0 * margin
        ),
    )
}

fn umist() -> Line {
    let name = "UMIST recognition rates";
    let Some(dir) = std::env::var_os("KDDA_UMIST_DIR").map(PathBuf::from) else {
        return Line {
            name,
            verdict: Verdict::Skip,
            detail: "set KDDA_UMIST_DIR to a directory-per-subject PGM tree to run".into(),
        };
    };
    let ks = vec![2, 4, 5, 6, 8];
    let mut cfg = ExperimentConfig::new(
        DataSource::Images {
            dir,
            width: 92,
            height: 112,
        },
        ks.clone(),
    );
    cfg.pixel_scale = 255.0;
    cfg.extractor_kernel = KernelSpec::Rbf { sigma2: 5e6 };
    cfg.methods = ["kdda+svm-ovr", "kdda+nn", "kpca+nn"]
        .iter()
        .map(|m| m.parse().unwrap())
        .collect();
    cfg.repeats = 10;
    let report = match run_experiment(&cfg) {
        Ok(r) => r,
        Err(e) => return check(name, false, format!("experiment failed: {e}")),
    };
    let curve: Vec<f64> = [2, 4, 6, 8]
        .iter()
        .map(|&k| rate(&report, k, "kdda+svm-ovr"))
        .collect();
    let monotone = curve.windows(2).all(|w| w[1] >= w[0]);
    let (svm, nn, pca) = (
        rate(&report, 6, "kdda+svm-ovr"),
        rate(&report, 6, "kdda+nn"),
        rate(&report, 6, "kpca+nn"),
    );
    let ordered = svm >= nn && nn >= pca;
    let at5 = rate(&report, 5, "kdda+svm-ovr");
    let near = (100.0 * at5 - 90.4).abs() <= 4.0;
    check(
        name,
        monotone && ordered && near && report.failed_repeats() == 0,
        format!(
            "kdda+svm k=2,4,6,8: {:.1?}% (nondecreasing: {monotone}); k=6 svm {:.1}% nn {:.1}% kpca {:.1}% (ordered: {ordered}); k=5 {:.1}% vs 90.4±4",
            curve.iter().map(|r| 100.0 * r).collect::<Vec<_>>(),
            100.0 * svm,
            100.0 * nn,
            100.0 * pca,
            100.0 * at5
        ),
    )
}

/// A condensed pass over the structural invariants, with a time budget.
fn invariants() -> Line {
    let start = Instant::now();
    let mut failures = Vec::new();

    for seed in 0..40u64 {
        let fx = random_fixture(seed);
        let kernel = KernelSpec::Rbf {
            sigma2: 1.0 + seed as f64,
        };

        let g = gram_matrix(&kernel, &fx.train).unwrap();
        let e = sym_eig(&g, DEFAULT_EIG_TOL).unwrap();
        let vtv = e.eigenvectors.t_matmul(&e.eigenvectors).unwrap();
        if vtv.sub(&Matrix::identity(g.rows())).unwrap().max_abs() >= 1e-8 {
            failures.push(format!("eigenvectors not orthonormal (seed {seed})"));
        }
        if (e.eigenvalues.iter().sum::<f64>() - g.trace()).abs() > 1e-8 * g.trace() {
            failures.push(format!("eigenvalue sum != trace (seed {seed})"));
        }
        if *e.eigenvalues.last().unwrap() < -1e-8 * e.eigenvalues[0] {
            failures.push(format!("gram not PSD (seed {seed})"));
        }

        let index = ClassIndex::new(&fx.labels).unwrap();
        let d = kdda_fit(&fx.train, &index, kernel, 0)
            .unwrap()
            .diagnostics()
            .clone();
        let id = Matrix::identity(d.between_whitened.rows());
        if d.between_whitened.sub(&id).unwrap().frobenius_norm() > 1e-6 {
            failures.push(format!("between-class scatter not whitened (seed {seed})"));
        }

        let p = random_binary_problem(seed);
        let c = p.cfg.c_cost;
        let mut infeasible = false;
        let mut observe = |it: &SmoIterate<'_>| {
            let eq: f64 = it.alphas.iter().zip(&p.labels).map(|(a, y)| a * y).sum();
            infeasible |=
                it.alphas.iter().any(|&a| a < 0.0 || a > c) || eq.abs() > 1e-9 * c.max(1.0);
        };
        svm_train_observed(&p.samples, &p.labels, &p.cfg, Some(&mut observe)).unwrap();
        if infeasible {
            failures.push(format!("SMO iterate left the feasible set (seed {seed})"));
        }
    }

    let rings = make_rings(3, 12, 0.05, 9).unwrap();
    for repeat in 0..20 {
        let (train, test) = split_indices(&rings, SplitSpec::new(4, 0, repeat)).unwrap();
        let mut all: Vec<usize> = train.iter().chain(&test).copied().collect();
        all.sort_unstable();
        if all != (0..rings.len()).collect::<Vec<_>>() {
            failures.push(format!("split {repeat} is not a partition"));
        }
    }

    let t = start.elapsed();
    let ok = failures.is_empty() && t < Duration::from_secs(60);
    let detail = if failures.is_empty() {
        format!(
            "eigen, gram, whitening, SMO feasibility and split checks clean, {:.2}s (limit 60s)",
            secs(t)
        )
    } else {
        format!(
            "{} violations, first: {}; {:.2}s",
            failures.len(),
            failures[0],
            secs(t)
        )
    };
    check("structural invariants", ok, detail)
}

fn degenerate_inputs() -> Line {
    let mut problems = Vec::new();

    let train = vec![vec![0.0, 0.0], vec![1.0, 0.0], vec![0.0, 2.0]];
    let index = ClassIndex::new(&[1, 2, 3]).unwrap();
    match kdda_fit(&train, &index, KernelSpec::Rbf { sigma2: 1.0 }, 0) {
        Ok(model) => {
            let d = model.diagnostics();
            let id = Matrix::identity(d.total_scatter.rows());
            if d.total_scatter.sub(&id).unwrap().frobenius_norm() > 1e-6 {
                problems.push("one sample per class: scaling is not unit".to_string());
            }
        }
        Err(e) => problems.push(format!("one sample per class rejected: {e}")),
    }

    let xs = vec![vec![0.0], vec![1.0]];
    if !matches!(
        svm_train(&xs, &[1.0, 1.0], &SvmTrainConfig::default()),
        Err(Error::InvalidInput(_))
    ) {
        problems.push("single-class SVM accepted".to_string());
    }

    match kdda_fit(&train, &index, KernelSpec::Linear, 3) {
        Err(Error::InvalidConfig(msg)) if msg.contains("C - 1") => {}
        other => problems.push(format!("M > C - 1 not rejected: {:?}", other.map(|_| ()))),
    }

    let detail = if problems.is_empty() {
        "one-sample classes, single-class SVM and M > C - 1 handled".to_string()
    } else {
        problems.join("; ")
    };
    check("degenerate inputs", problems.is_empty(), detail)
}

fn main() {
    let criteria: [fn() -> Line; 7] = [
        kdda_oracle,
        kpca_oracle,
        smo_oracle,
        rings_margin,
        umist,
        invariants,
        degenerate_inputs,
    ];
    let mut failed = 0;
    for (i, criterion) in criteria.iter().enumerate() {
        let line = criterion();
        let tag = match line.verdict {
            Verdict::Pass => "PASS",
            Verdict::Fail => {
                failed += 1;
                "FAIL"
            }
            Verdict::Skip => "SKIP",
        };
        println!("[{tag}] {}. {}: {}", i + 1, line.name, line.detail);
    }
    println!("acceptance: {failed} of {} criteria failed", criteria.len());
    let strict = std::env::var("KDDA_ACCEPTANCE_STRICT").is_ok_and(|v| v == "1");
    if failed > 0 && strict {
        std::process::exit(1);
    }
}
