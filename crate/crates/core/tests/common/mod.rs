//! Reference implementations that share no code with the library: spin
//! Hamiltonians from Kronecker products of single-site matrices, and a
//! cyclic Jacobi eigenvalue solver.

#![allow(dead_code, clippy::excessive_precision, clippy::needless_range_loop)]

pub type Dense = Vec<Vec<f64>>;

pub fn zeros(n: usize) -> Dense {
    vec![vec![0.0; n]; n]
}

/// Single-site `(S³, S⁺)` in the basis `m = S, S−1, …, −S`.
pub fn site_matrices(two_s: u32) -> (Dense, Dense) {
    let d = two_s as usize + 1;
    let s = two_s as f64 / 2.0;
    let mut sz = zeros(d);
    let mut sp = zeros(d);
    for i in 0..d {
        let m = s - i as f64;
        sz[i][i] = m;
        if i > 0 {
            // ⟨m+1|S⁺|m⟩ = √(S(S+1) − m(m+1))
            sp[i - 1][i] = (s * (s + 1.0) - m * (m + 1.0)).sqrt();
        }
    }
    (sz, sp)
}

fn transpose(a: &Dense) -> Dense {
    let n = a.len();
    (0..n).map(|i| (0..n).map(|j| a[j][i]).collect()).collect()
}

fn kron(a: &Dense, b: &Dense) -> Dense {
    let (na, nb) = (a.len(), b.len());
    let mut out = zeros(na * nb);
    for i in 0..na {
        for j in 0..na {
            if a[i][j] == 0.0 {
                continue;
            }
            for k in 0..nb {
                for l in 0..nb {
                    out[i * nb + k][j * nb + l] = a[i][j] * b[k][l];
                }
            }
        }
    }
    out
}

fn identity(n: usize) -> Dense {
    let mut m = zeros(n);
    (0..n).for_each(|i| m[i][i] = 1.0);
    m
}

/// `op` on `site` of an `n`-site chain of `d`-dimensional spins.
pub fn embed(op: &Dense, site: usize, n: usize) -> Dense {
    let d = op.len();
    let mut out = identity(1);
    for k in 0..n {
        out = if k == site { kron(&out, op) } else { kron(&out, &identity(d)) };
    }
    out
}

pub fn matmul(a: &Dense, b: &Dense) -> Dense {
    let n = a.len();
    let mut c = zeros(n);
    for i in 0..n {
        for k in 0..n {
            if a[i][k] == 0.0 {
                continue;
            }
            for j in 0..n {
                c[i][j] += a[i][k] * b[k][j];
            }
        }
    }
    c
}

pub fn axpy(alpha: f64, x: &Dense, y: &mut Dense) {
    for (yr, xr) in y.iter_mut().zip(x) {
        for (a, b) in yr.iter_mut().zip(xr) {
            *a += alpha * b;
        }
    }
}

/// `S_x·S_y = S³S³ + ½(S⁺S⁻ + S⁻S⁺)` on the full tensor space.
pub fn spin_dot(two_s: u32, n: usize, x: usize, y: usize) -> Dense {
    let (sz, sp) = site_matrices(two_s);
    let sm = transpose(&sp);
    let mut out = matmul(&embed(&sz, x, n), &embed(&sz, y, n));
    axpy(0.5, &matmul(&embed(&sp, x, n), &embed(&sm, y, n)), &mut out);
    axpy(0.5, &matmul(&embed(&sm, x, n), &embed(&sp, y, n)), &mut out);
    out
}

/// `Σ_bonds (S² − S_x·S_y)` on the full space.
pub fn heisenberg(two_s: u32, n: usize, bonds: &[(usize, usize)]) -> Dense {
    let s = two_s as f64 / 2.0;
    let dim = (two_s as usize + 1).pow(n as u32);
    let mut h = zeros(dim);
    for &(x, y) in bonds {
        axpy(-1.0, &spin_dot(two_s, n, x, y), &mut h);
        for (i, row) in h.iter_mut().enumerate() {
            row[i] += s * s;
        }
    }
    h
}

/// `(Σ_x S_x)²` on the full space.
pub fn total_spin_squared(two_s: u32, n: usize) -> Dense {
    let dim = (two_s as usize + 1).pow(n as u32);
    let mut out = zeros(dim);
    for x in 0..n {
        for y in 0..n {
            axpy(1.0, &spin_dot(two_s, n, x, y), &mut out);
        }
    }
    out
}

/// Eigenvalues of a symmetric matrix by cyclic Jacobi rotations, ascending.
pub fn jacobi_eigenvalues(mut a: Dense) -> Vec<f64> {
    let n = a.len();
    for _sweep in 0..100 {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[i][j] * a[i][j])
            .sum();
        let scale: f64 = (0..n).map(|i| a[i][i] * a[i][i]).sum::<f64>().max(1.0);
        if off <= 1e-30 * scale {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                if a[p][q].abs() < 1e-300 {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a[k][p];
                    let akq = a[k][q];
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[p][k];
                    let aqk = a[q][k];
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
            }
        }
    }
    let mut ev: Vec<f64> = (0..n).map(|i| a[i][i]).collect();
    ev.sort_by(f64::total_cmp);
    ev
}

pub fn max_diff(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

/// `ln(1 − e^{−t ε(k)})` integrated over the Brillouin zone, evaluated
/// independently from Bessel functions; frozen at high precision.
pub const SPIN_WAVE_INTEGRAL: [(f64, f64); 6] = [
    (0.5, -0.12736846644691043),
    (1.0, -0.037675369922556413),
    (2.0, -0.011682633208424651),
    (10.0, -0.00096780224835286754),
    (100.0, -3.0161807937769802e-5),
    (1e4, -3.0114703752950609e-8),
];

/// `−ζ(5/2)/(8π^{3/2})` evaluated in extended precision.
pub const C0_REFERENCE: f64 = -0.030114229487159399;
