//! Independent reference implementations used by the integration tests.
//!
//! Everything here works on explicit input-space vectors with nalgebra's
//! eigensolver, sharing no code with the library beyond the data types.

#![allow(dead_code)]

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use kdda::svm::SvmTrainConfig;
use kdda::KernelSpec;

/// A labelled fixture with a held-out query set.
#[derive(Debug, Clone)]
pub struct Fixture {
    pub train: Vec<Vec<f64>>,
    pub labels: Vec<usize>,
    pub queries: Vec<Vec<f64>>,
}

/// Random Gaussian classes with random means. `L − C ≥ dim` keeps the
/// within-class scatter full rank, so its eigenvectors are unique almost
/// surely and the oracle comparison is well posed.
pub fn random_fixture(seed: u64) -> Fixture {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let classes = rng.random_range(2..=4usize);
    let dim = rng.random_range(classes.max(2)..=10usize);
    let mut sizes = vec![1usize; classes];
    let budget = rng.random_range((dim + classes).max(2 * classes)..=40);
    for _ in classes..budget {
        sizes[rng.random_range(0..classes)] += 1;
    }
    let mut train = Vec::new();
    let mut labels = Vec::new();
    for (c, &n) in sizes.iter().enumerate() {
        let mean: Vec<f64> = (0..dim).map(|_| rng.random_range(-3.0..3.0)).collect();
        for _ in 0..n {
            train.push(
                mean.iter()
                    .map(|m| m + rng.random_range(-1.0..1.0))
                    .collect(),
            );
            labels.push(c + 1);
        }
    }
    let queries = (0..5)
        .map(|_| (0..dim).map(|_| rng.random_range(-4.0..4.0)).collect())
        .collect();
    Fixture {
        train,
        labels,
        queries,
    }
}

fn to_matrix(rows: &[Vec<f64>]) -> DMatrix<f64> {
    DMatrix::from_fn(rows.len(), rows[0].len(), |i, j| rows[i][j])
}

fn mean(rows: &[&Vec<f64>]) -> DVector<f64> {
    let dim = rows[0].len();
    let mut m = DVector::zeros(dim);
    for r in rows {
        m += DVector::from_column_slice(r);
    }
    m / rows.len() as f64
}

/// Eigenpairs sorted by eigenvalue, descending.
fn sorted_eigen(a: DMatrix<f64>) -> (Vec<f64>, DMatrix<f64>) {
    let eig = SymmetricEigen::new(a);
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[j].total_cmp(&eig.eigenvalues[i]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = DMatrix::from_fn(eig.eigenvectors.nrows(), order.len(), |r, c| {
        eig.eigenvectors[(r, order[c])]
    });
    (values, vectors)
}

/// Direct LDA computed in input space:
///
/// 1. `Sb = Σ_c (C_c/L)(m_c − m)(m_c − m)ᵀ`; keep its eigenvectors `U` with
///    eigenvalue above `1e-10·λ_max` and whiten, `H = U Λ_b^(−1/2)`.
/// 2. `Sw = (1/L) Σ (x − m_c)(x − m_c)ᵀ`; diagonalise `Hᵀ Sw H = P Λ_w Pᵀ`
///    and keep the `m` smallest-eigenvalue directions.
/// 3. `Γ = H P_m (I + Λ_w)^(−1/2)` and `y = Γᵀ z`.
///
/// Returns one projected vector per query. `m = 0` keeps every retained
/// direction.
pub fn dlda_oracle(fx: &Fixture, m: usize) -> Vec<Vec<f64>> {
    let classes = *fx.labels.iter().max().unwrap();
    let l = fx.train.len() as f64;
    let dim = fx.train[0].len();
    let all: Vec<&Vec<f64>> = fx.train.iter().collect();
    let global = mean(&all);
    let members: Vec<Vec<&Vec<f64>>> = (1..=classes)
        .map(|c| {
            fx.train
                .iter()
                .zip(&fx.labels)
                .filter(|(_, &y)| y == c)
                .map(|(x, _)| x)
                .collect()
        })
        .collect();
    let means: Vec<DVector<f64>> = members.iter().map(|m| mean(m)).collect();

    let mut sb = DMatrix::zeros(dim, dim);
    for (mc, xs) in means.iter().zip(&members) {
        let d = mc - &global;
        sb += (xs.len() as f64 / l) * &d * d.transpose();
    }
    let mut sw = DMatrix::zeros(dim, dim);
    for (x, &y) in fx.train.iter().zip(&fx.labels) {
        let d = DVector::from_column_slice(x) - &means[y - 1];
        sw += &d * d.transpose() / l;
    }

    let (lb, ub) = sorted_eigen(sb);
    let keep = lb.iter().take_while(|&&v| v > 1e-10 * lb[0]).count();
    let h = DMatrix::from_fn(dim, keep, |r, c| ub[(r, c)] / lb[c].sqrt());

    let (lw_desc, pw_desc) = sorted_eigen(h.transpose() * &sw * &h);
    let m = if m == 0 { keep } else { m.min(keep) };
    // Smallest within-class eigenvalues first.
    let gamma = DMatrix::from_fn(dim, m, |r, c| {
        let k = keep - 1 - c;
        let lw = lw_desc[k].max(0.0);
        (&h * pw_desc.column(k))[r] / (1.0 + lw).sqrt()
    });
    fx.queries
        .iter()
        .map(|z| {
            (gamma.transpose() * DVector::from_column_slice(z))
                .iter()
                .copied()
                .collect()
        })
        .collect()
}

/// Explicit PCA: unit eigenvectors of the centred scatter `Σ (x − m)(x − m)ᵀ`
/// (descending), projections `vᵀ(z − m)` for the first `m` components.
pub fn pca_oracle(train: &[Vec<f64>], queries: &[Vec<f64>], m: usize) -> Vec<Vec<f64>> {
    let x = to_matrix(train);
    let all: Vec<&Vec<f64>> = train.iter().collect();
    let mu = mean(&all);
    let centred = DMatrix::from_fn(x.nrows(), x.ncols(), |i, j| x[(i, j)] - mu[j]);
    let (_, v) = sorted_eigen(centred.transpose() * &centred);
    queries
        .iter()
        .map(|z| {
            let d = DVector::from_column_slice(z) - &mu;
            (0..m).map(|c| v.column(c).dot(&d)).collect()
        })
        .collect()
}

/// Compares projected vectors component by component, allowing each
/// component an independent sign flip. Returns the worst relative error
/// `‖a_c − s·b_c‖ / ‖b_c‖` over components `c`.
pub fn max_rel_error_up_to_sign(actual: &[Vec<f64>], expected: &[Vec<f64>]) -> f64 {
    assert_eq!(actual.len(), expected.len());
    let m = expected[0].len();
    assert_eq!(actual[0].len(), m, "feature counts differ");
    let mut worst = 0.0f64;
    for c in 0..m {
        let a: Vec<f64> = actual.iter().map(|v| v[c]).collect();
        let b: Vec<f64> = expected.iter().map(|v| v[c]).collect();
        let norm_b = b.iter().map(|x| x * x).sum::<f64>().sqrt();
        let err = |s: f64| {
            a.iter()
                .zip(&b)
                .map(|(x, y)| (x - s * y).powi(2))
                .sum::<f64>()
                .sqrt()
        };
        worst = worst.max(err(1.0).min(err(-1.0)) / norm_b.max(f64::MIN_POSITIVE));
    }
    worst
}

/// A small binary problem for the QP oracle.
#[derive(Debug, Clone)]
pub struct BinaryProblem {
    pub samples: Vec<Vec<f64>>,
    pub labels: Vec<f64>,
    pub cfg: SvmTrainConfig,
}

/// Up to six distinct points in the plane with both labels present and an
/// RBF kernel (strictly positive definite Gram matrix).
pub fn random_binary_problem(seed: u64) -> BinaryProblem {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.random_range(2..=6usize);
    let samples: Vec<Vec<f64>> = (0..n)
        .map(|_| vec![rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0)])
        .collect();
    let mut labels: Vec<f64> = (0..n)
        .map(|_| if rng.random_bool(0.5) { 1.0 } else { -1.0 })
        .collect();
    labels[0] = 1.0;
    labels[1] = -1.0;
    let sigma2 = rng.random_range(0.2..4.0);
    let c = [0.1, 1.0, 10.0][rng.random_range(0..3)];
    BinaryProblem {
        samples,
        labels,
        cfg: SvmTrainConfig::new(KernelSpec::Rbf { sigma2 }, c),
    }
}

/// Exact optimum of the SVM dual by enumerating every assignment of each
/// variable to `{0, C, free}`. For each assignment the free variables and the
/// equality multiplier solve the stationarity system
///
/// ```text
/// [Q_FF  y_F] [α_F]   [1 − Q_FU α_U]
/// [y_Fᵀ   0 ] [ ν ] = [  −y_Uᵀ α_U ]
/// ```
///
/// and the best feasible candidate is the global maximum (the true optimum
/// is one of the candidates, and every candidate is feasible).
pub fn brute_force_dual(samples: &[Vec<f64>], labels: &[f64], kernel: KernelSpec, c: f64) -> f64 {
    let n = samples.len();
    let q = DMatrix::from_fn(n, n, |i, j| {
        labels[i] * labels[j] * kdda::kernels::eval(&kernel, &samples[i], &samples[j]).unwrap()
    });
    let objective = |a: &DVector<f64>| a.sum() - 0.5 * (a.transpose() * &q * a)[(0, 0)];
    let mut best = f64::NEG_INFINITY;
    for code in 0..3usize.pow(n as u32) {
        // 0 → lower bound, 1 → upper bound, 2 → free.
        let state: Vec<usize> = (0..n).map(|i| code / 3usize.pow(i as u32) % 3).collect();
        let free: Vec<usize> = (0..n).filter(|&i| state[i] == 2).collect();
        let mut alpha = DVector::from_fn(n, |i, _| if state[i] == 1 { c } else { 0.0 });
        if free.is_empty() {
            let residual: f64 = (0..n).map(|i| labels[i] * alpha[i]).sum();
            if residual.abs() < 1e-12 {
                best = best.max(objective(&alpha));
            }
            continue;
        }
        let f = free.len();
        let mut system = DMatrix::zeros(f + 1, f + 1);
        let mut rhs = DVector::zeros(f + 1);
        for (a, &i) in free.iter().enumerate() {
            for (b, &j) in free.iter().enumerate() {
                system[(a, b)] = q[(i, j)];
            }
            system[(a, f)] = labels[i];
            system[(f, a)] = labels[i];
            rhs[a] = 1.0
                - (0..n)
                    .filter(|&j| state[j] == 1)
                    .map(|j| q[(i, j)] * c)
                    .sum::<f64>();
        }
        rhs[f] = -(0..n)
            .filter(|&j| state[j] == 1)
            .map(|j| labels[j] * c)
            .sum::<f64>();
        let Some(sol) = system.lu().solve(&rhs) else {
            continue;
        };
        if free
            .iter()
            .enumerate()
            .all(|(a, _)| sol[a] >= -1e-10 && sol[a] <= c + 1e-10)
        {
            for (a, &i) in free.iter().enumerate() {
                alpha[i] = sol[a].clamp(0.0, c);
            }
            best = best.max(objective(&alpha));
        }
    }
    best
}
