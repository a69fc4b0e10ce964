//! Dense symmetric eigensolves and a Lanczos extremal solver with full
//! reorthogonalization.

use nalgebra::{DMatrix, SymmetricEigen};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::sparse::SparseOperator;

/// Eigenpairs of a real symmetric matrix, eigenvalues ascending.
pub fn symmetric_eigen(matrix: DMatrix<f64>) -> (Vec<f64>, DMatrix<f64>) {
    let n = matrix.nrows();
    if n == 0 {
        return (Vec::new(), DMatrix::zeros(0, 0));
    }
    let eig = SymmetricEigen::new(matrix);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = DMatrix::from_fn(n, n, |r, c| eig.eigenvectors[(r, order[c])]);
    (values, vectors)
}

pub fn symmetric_eigenvalues(matrix: DMatrix<f64>) -> Vec<f64> {
    if matrix.nrows() == 0 {
        return Vec::new();
    }
    let mut values: Vec<f64> = SymmetricEigen::new(matrix).eigenvalues.iter().copied().collect();
    values.sort_by(f64::total_cmp);
    values
}

/// Partition a sorted list into runs whose consecutive gaps are at most
/// `tol`. Returns half-open index ranges.
pub fn group_sorted(values: &[f64], tol: f64) -> Vec<std::ops::Range<usize>> {
    let mut groups = Vec::new();
    let mut start = 0;
    for i in 1..=values.len() {
        if i == values.len() || values[i] - values[i - 1] > tol {
            if i > start {
                groups.push(start..i);
            }
            start = i;
        }
    }
    groups
}

#[derive(Debug, Clone, Copy)]
pub struct LanczosOptions {
    pub tolerance: f64,
    pub max_iter: usize,
    pub seed: u64,
}

impl Default for LanczosOptions {
    fn default() -> Self {
        LanczosOptions {
            tolerance: 1e-9,
            max_iter: 400,
            seed: 0x5eed,
        }
    }
}

#[derive(Debug, Clone)]
pub struct ExtremalPair {
    pub value: f64,
    pub vector: Vec<f64>,
    pub residual: f64,
    pub iterations: usize,
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn axpy(alpha: f64, x: &[f64], y: &mut [f64]) {
    y.iter_mut().zip(x).for_each(|(yi, xi)| *yi += alpha * xi);
}

fn orthogonalize(v: &mut [f64], basis: &[Vec<f64>]) {
    // two passes of classical Gram-Schmidt
    for _ in 0..2 {
        for b in basis {
            let c = dot(v, b);
            axpy(-c, b, v);
        }
    }
}

/// Smallest eigenpair of a symmetric operator restricted to the orthogonal
/// complement of `deflate` (an orthonormal set, possibly empty).
///
/// Every Lanczos vector is reorthogonalized against all previous ones and
/// against the deflation set, so degenerate multiplets do not spawn ghost
/// copies. Convergence is judged on the true residual `‖Ax − θx‖`.
pub fn lanczos_lowest(
    op: &SparseOperator,
    deflate: &[Vec<f64>],
    options: LanczosOptions,
) -> Result<ExtremalPair> {
    let n = op.dim();
    if n == 0 {
        return Err(Error::Numerical("empty operator".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(options.seed);
    let mut v: Vec<f64> = (0..n).map(|_| rng.gen::<f64>() - 0.5).collect();
    orthogonalize(&mut v, deflate);
    let norm = dot(&v, &v).sqrt();
    if norm < 1e-300 {
        return Err(Error::Numerical("deflation space spans the whole operator".into()));
    }
    v.iter_mut().for_each(|x| *x /= norm);

    let max_iter = options.max_iter.min(n.saturating_sub(deflate.len())).max(1);
    let mut basis: Vec<Vec<f64>> = vec![v];
    let mut alpha: Vec<f64> = Vec::new();
    let mut beta: Vec<f64> = Vec::new();
    let mut best = ExtremalPair {
        value: f64::NAN,
        vector: Vec::new(),
        residual: f64::INFINITY,
        iterations: 0,
    };
    let mut w = vec![0.0; n];

    for iter in 0..max_iter {
        op.mul_vec_into(&basis[iter], &mut w);
        let a = dot(&w, &basis[iter]);
        alpha.push(a);
        orthogonalize(&mut w, deflate);
        orthogonalize(&mut w, &basis);
        let b = dot(&w, &w).sqrt();

        let m = alpha.len();
        let t = DMatrix::from_fn(m, m, |r, c| {
            if r == c {
                alpha[r]
            } else if r + 1 == c {
                beta[r]
            } else if c + 1 == r {
                beta[c]
            } else {
                0.0
            }
        });
        let (theta, s) = symmetric_eigen(t);
        // cheap estimate b·|s_m| first, true residual when it looks converged
        let estimate = b * s[(m - 1, 0)].abs();
        let breakdown = b < 1e-12 * (1.0 + a.abs());
        if estimate <= options.tolerance || breakdown || iter + 1 == max_iter {
            let mut x = vec![0.0; n];
            for (j, q) in basis.iter().enumerate() {
                axpy(s[(j, 0)], q, &mut x);
            }
            let xn = dot(&x, &x).sqrt();
            x.iter_mut().for_each(|xi| *xi /= xn);
            let ax = op.mul_vec(&x);
            let mut r = ax.clone();
            orthogonalize(&mut r, deflate);
            axpy(-theta[0], &x, &mut r);
            let residual = dot(&r, &r).sqrt();
            best = ExtremalPair {
                value: theta[0],
                vector: x,
                residual,
                iterations: iter + 1,
            };
            if residual <= options.tolerance * theta[0].abs().max(1.0) {
                return Ok(best);
            }
            if breakdown {
                break;
            }
        }
        beta.push(b);
        basis.push(w.iter().map(|x| x / b).collect());
    }
    Err(Error::NonConvergence {
        estimate: best.value,
        residual: best.residual,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path_laplacian(n: usize) -> SparseOperator {
        let mut t = Vec::new();
        for i in 0..n - 1 {
            t.extend([(i, i, 1.0), (i + 1, i + 1, 1.0), (i, i + 1, -1.0), (i + 1, i, -1.0)]);
        }
        SparseOperator::from_triplets(n, &t)
    }

    #[test]
    fn dense_eigen_sorted() {
        let m = DMatrix::from_row_slice(2, 2, &[2.0, 1.0, 1.0, 2.0]);
        let (vals, vecs) = symmetric_eigen(m.clone());
        assert!((vals[0] - 1.0).abs() < 1e-14 && (vals[1] - 3.0).abs() < 1e-14);
        let r = &m * vecs.column(0) - vecs.column(0) * vals[0];
        assert!(r.norm() < 1e-14);
    }

    #[test]
    fn grouping() {
        let g = group_sorted(&[0.0, 1e-10, 1.0, 2.0, 2.0 + 5e-9], 1e-8);
        assert_eq!(g, vec![0..2, 2..3, 3..5]);
    }

    #[test]
    fn lanczos_with_deflation_finds_gap() {
        let n = 30;
        let op = path_laplacian(n);
        let ground = lanczos_lowest(&op, &[], LanczosOptions::default()).unwrap();
        assert!(ground.value.abs() < 1e-9);
        let uniform = vec![1.0 / (n as f64).sqrt(); n];
        let gap = lanczos_lowest(&op, &[uniform], LanczosOptions::default()).unwrap();
        let exact = 2.0 * (1.0 - (std::f64::consts::PI / n as f64).cos());
        assert!((gap.value - exact).abs() < 1e-9, "{} vs {}", gap.value, exact);
    }

    #[test]
    fn lanczos_reports_non_convergence() {
        let op = path_laplacian(200);
        let opts = LanczosOptions {
            tolerance: 1e-14,
            max_iter: 3,
            seed: 1,
        };
        match lanczos_lowest(&op, &[], opts) {
            Err(Error::NonConvergence { residual, .. }) => assert!(residual > 1e-14),
            other => panic!("expected non-convergence, got {other:?}"),
        }
    }
}
