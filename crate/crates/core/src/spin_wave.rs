//! One-magnon states, the lattice dispersion, and the free energy of the
//! non-interacting magnon gas on finite grids and in infinite volume,
//! together with its low-temperature constant `C_0 = −ζ(5/2)/(8π^{3/2})`.
//!
//! Under periodic boundaries the one-magnon eigenstates are plane waves
//! with energy `S ε(k)`. Under free boundaries they are products of
//! cosines (Neumann modes) with quantum numbers `π n_i / ℓ`; plane waves are
//! not eigenstates there and [`spin_wave_state`] refuses such lattices.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact_diag::full_spectrum;
use crate::lattice::{momentum_grid, Boundary, Lattice};
use crate::quadrature::{adaptive_1d, adaptive_3d, pairwise_sum, Cube, GaussRule};
use crate::sparse::SparseOperator;
use crate::spin_hilbert::{build_hamiltonian, SpinSector, SpinValue};

/// `ε(k) = 2 Σ_i (1 − cos k_i)`, evaluated as `4 Σ sin²(k_i/2)`.
pub fn dispersion(k: &[f64]) -> f64 {
    k.iter().map(|&ki| 4.0 * (0.5 * ki).sin().powi(2)).sum()
}

/// `ln(1 − e^{−x})` without cancellation for small `x`.
fn log_one_minus_exp(x: f64) -> f64 {
    if x > std::f64::consts::LN_2 {
        (-(-x).exp()).ln_1p()
    } else {
        (-(-x).exp_m1()).ln()
    }
}

fn check_one_magnon(sector: &SpinSector) -> Result<()> {
    let top = sector.spin().twice() as i64 * sector.lattice().num_sites() as i64;
    if sector.total_sz2() != Some(top - 2) {
        return Err(Error::InvalidSector(
            "one-magnon states live in the sector S3_T = S N - 1".into(),
        ));
    }
    Ok(())
}

/// Basis index of the state with the spin at `site` lowered by one.
pub fn lowered_index(sector: &SpinSector, site: usize) -> usize {
    let two_s = sector.spin().twice() as u64;
    let mut digits = vec![two_s; sector.lattice().num_sites()];
    digits[site] = two_s - 1;
    sector
        .index_of_digits(&digits)
        .expect("one-magnon sector contains every single lowered spin")
}

/// Normalized plane-wave magnon `N^{-1/2} Σ_x e^{−ik·x} |x lowered⟩` for the
/// momentum with integer label `label` (`k = 2π label / L`).
///
/// `S⁻_x` acting on the polarized state gives `√(2S) |x lowered⟩`; that
/// factor is divided out so the family is orthonormal for every `S`.
pub fn spin_wave_state(sector: &SpinSector, label: [usize; 3]) -> Result<Vec<Complex64>> {
    let lattice = sector.lattice();
    if lattice.boundary() != Boundary::Periodic {
        return Err(Error::Config(
            "plane waves are eigenstates only under periodic boundaries; use neumann_modes".into(),
        ));
    }
    check_one_magnon(sector)?;
    let side = lattice.side() as f64;
    let norm = 1.0 / (lattice.num_sites() as f64).sqrt();
    let mut state = vec![Complex64::new(0.0, 0.0); sector.dim()];
    for site in 0..lattice.num_sites() {
        let phase: f64 = lattice
            .coordinates(site)
            .iter()
            .zip(&label)
            .map(|(&x, &n)| 2.0 * PI * (n * x) as f64 / side)
            .sum();
        state[lowered_index(sector, site)] = Complex64::from_polar(norm, -phase);
    }
    Ok(state)
}

pub fn apply_complex(op: &SparseOperator, v: &[Complex64]) -> Vec<Complex64> {
    let re: Vec<f64> = v.iter().map(|z| z.re).collect();
    let im: Vec<f64> = v.iter().map(|z| z.im).collect();
    op.mul_vec(&re)
        .into_iter()
        .zip(op.mul_vec(&im))
        .map(|(a, b)| Complex64::new(a, b))
        .collect()
}

pub fn inner(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

#[derive(Debug, Clone, Serialize)]
pub struct MagnonMode {
    pub label: [usize; 3],
    pub energy: f64,
    pub residual: f64,
}

/// Plane-wave magnons of a periodic box with their energies `S ε(k)` and
/// residuals `‖Hv − S ε(k) v‖`.
pub fn periodic_modes(sector: &SpinSector) -> Result<Vec<MagnonMode>> {
    let h = build_hamiltonian(sector);
    let grid = momentum_grid(sector.lattice());
    let s = sector.spin().value();
    (0..grid.len())
        .map(|i| {
            let label = grid.labels()[i];
            let v = spin_wave_state(sector, label)?;
            let energy = s * dispersion(&grid.momentum(i));
            let hv = apply_complex(&h, &v);
            let residual = hv
                .iter()
                .zip(&v)
                .map(|(a, b)| (a - b * energy).norm_sqr())
                .sum::<f64>()
                .sqrt();
            Ok(MagnonMode {
                label,
                energy,
                residual,
            })
        })
        .collect()
}

#[derive(Debug, Clone, Serialize)]
pub struct NeumannMode {
    pub quantum_numbers: [usize; 3],
    pub energy: f64,
    pub vector: Vec<f64>,
    pub residual: f64,
}

pub const MAGNON_TOLERANCE: f64 = 1e-10;

/// Free-boundary one-magnon eigenpairs `ψ_n(x) = Π_i cos(π n_i (x_i + ½)/ℓ)`
/// with energies `2S Σ_i (1 − cos(π n_i/ℓ))`, each verified by its residual
/// and the whole set against a direct diagonalization of the block.
pub fn neumann_modes(sector: &SpinSector) -> Result<Vec<NeumannMode>> {
    let lattice = sector.lattice();
    if lattice.boundary() != Boundary::Free {
        return Err(Error::Config("Neumann modes need a free-boundary lattice".into()));
    }
    check_one_magnon(sector)?;
    let h = build_hamiltonian(sector);
    let side = lattice.side() as f64;
    let s = sector.spin().value();
    let grid = momentum_grid(lattice);
    let mut modes = Vec::with_capacity(grid.len());
    for &label in grid.labels() {
        let mut vector = vec![0.0; sector.dim()];
        for site in 0..lattice.num_sites() {
            let amp: f64 = lattice
                .coordinates(site)
                .iter()
                .zip(&label)
                .map(|(&x, &n)| (PI * n as f64 * (x as f64 + 0.5) / side).cos())
                .product();
            vector[lowered_index(sector, site)] = amp;
        }
        let norm = vector.iter().map(|v| v * v).sum::<f64>().sqrt();
        vector.iter_mut().for_each(|v| *v /= norm);
        let energy = s * label[..lattice.dim()]
            .iter()
            .map(|&n| 2.0 * (1.0 - (PI * n as f64 / side).cos()))
            .sum::<f64>();
        let hv = h.mul_vec(&vector);
        let residual = hv
            .iter()
            .zip(&vector)
            .map(|(a, b)| (a - energy * b).powi(2))
            .sum::<f64>()
            .sqrt();
        if residual > MAGNON_TOLERANCE {
            return Err(Error::Numerical(format!(
                "Neumann mode {label:?} has residual {residual:e}"
            )));
        }
        modes.push(NeumannMode {
            quantum_numbers: label,
            energy,
            vector,
            residual,
        });
    }
    let mut analytic: Vec<f64> = modes.iter().map(|m| m.energy).collect();
    analytic.sort_by(f64::total_cmp);
    let direct = full_spectrum(&h, false)?.eigenvalues;
    let worst = analytic
        .iter()
        .zip(&direct)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    if worst > MAGNON_TOLERANCE {
        return Err(Error::Numerical(format!(
            "Neumann energies deviate from the one-magnon block by {worst:e}"
        )));
    }
    Ok(modes)
}

/// Max entry of `H|_{one magnon} − S·(graph Laplacian)`.
pub fn one_magnon_laplacian_deviation(lattice: &Lattice, spin: SpinValue) -> Result<f64> {
    let sector = SpinSector::one_magnon(lattice, spin)?;
    let h = build_hamiltonian(&sector).to_dense();
    let lap = lattice.graph_laplacian();
    let s = spin.value();
    let n = lattice.num_sites();
    let idx: Vec<usize> = (0..n).map(|x| lowered_index(&sector, x)).collect();
    let mut worst: f64 = 0.0;
    for x in 0..n {
        for y in 0..n {
            worst = worst.max((h[(idx[x], idx[y])] - s * lap[x][y]).abs());
        }
    }
    Ok(worst)
}

/// `S` times the graph Laplacian as a sparse operator on sites: the
/// one-magnon block of `H` in the basis `S⁻_x|top⟩/√(2S)`, without building
/// the spin basis (so it works on lattices with more than 64 sites).
pub fn one_magnon_block(lattice: &Lattice, spin: SpinValue) -> SparseOperator {
    let s = spin.value();
    let mut triplets = Vec::with_capacity(4 * lattice.bonds().len());
    for &(x, y) in lattice.bonds() {
        triplets.extend([(x, x, s), (y, y, s), (x, y, -s), (y, x, -s)]);
    }
    SparseOperator::from_triplets(lattice.num_sites(), &triplets)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum F0Mode {
    FiniteGrid { side: usize, dim: usize },
    Quadrature { order: usize, cells: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SpinWaveFreeEnergy {
    pub beta: f64,
    pub spin: SpinValue,
    pub value: f64,
    /// absolute error bound (zero for finite grids)
    pub error_bound: f64,
    pub mode: F0Mode,
    /// For finite grids: the zero mode's contribution if its occupation is
    /// capped at the hard-core capacity `2SN`, i.e. `−ln(2SN+1)/(βN)`.
    pub excluded_zero_mode: Option<f64>,
}

/// `(β L^d)^{-1} Σ_{k ≠ 0} ln(1 − e^{−β S ε(k)})` over the momentum grid.
pub fn f0_finite(lattice: &Lattice, spin: SpinValue, beta: f64) -> Result<SpinWaveFreeEnergy> {
    if beta.is_nan() || beta <= 0.0 {
        return Err(Error::Config(format!("beta must be positive, got {beta}")));
    }
    let grid = momentum_grid(lattice);
    let t = beta * spin.value();
    let terms: Vec<f64> = (0..grid.len())
        .into_par_iter()
        .filter(|&i| !grid.is_zero(i))
        .map(|i| log_one_minus_exp(t * dispersion(&grid.momentum(i))))
        .collect();
    let n = lattice.num_sites() as f64;
    let capacity = spin.twice() as f64 * n;
    Ok(SpinWaveFreeEnergy {
        beta,
        spin,
        value: pairwise_sum(&terms) / (beta * n),
        error_bound: 0.0,
        mode: F0Mode::FiniteGrid {
            side: lattice.side(),
            dim: lattice.dim(),
        },
        excluded_zero_mode: Some(-(capacity + 1.0).ln() / (beta * n)),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QuadratureOptions {
    /// Gauss-Legendre points per axis and cell
    pub order: usize,
    /// relative error target
    pub tolerance: f64,
    /// budget of live cells
    pub max_cells: usize,
}

impl Default for QuadratureOptions {
    fn default() -> Self {
        QuadratureOptions {
            order: 6,
            tolerance: 1e-9,
            max_cells: 40_000,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegralEstimate {
    pub value: f64,
    pub error: f64,
    pub cells: usize,
}

/// Bound on `(2π)^{-3} |∫_{[−a,a]^3} ln(1 − e^{−tε(k)}) dk|`, valid when
/// `3 t a² ≤ 1`.
///
/// On that cube `x = tε ≤ 1`, where `1 − e^{−x} ≥ x/2`, and
/// `ε(k) ≥ (4/π²)|k|²`, so the integrand is bounded by `ln(2/(c t |k|²))`
/// with `c = 4/π²`; integrating that over the circumscribed ball of radius
/// `R = √3 a` gives `(4πR³/3)(ln(2/(c t R²)) + 2/3)`.
fn inner_box_bound(t: f64, a: f64) -> f64 {
    let c = 4.0 / (PI * PI);
    let r = 3f64.sqrt() * a;
    let ball = 4.0 * PI * r.powi(3) / 3.0 * ((2.0 / (c * t * r * r)).ln() + 2.0 / 3.0);
    ball / (2.0 * PI).powi(3)
}

/// `g(t) = (2π)^{-3} ∫_{[−π,π]^3} ln(1 − e^{−t ε(k)}) dk` for `t = βS`.
///
/// The cube is folded onto `[0, π]^3` (the integrand is even in every
/// component) and cut into geometric shells around the logarithmic
/// singularity at the origin: shell `j` is `[0, a_j]^3 \ [0, a_j/2]^3` with
/// `a_j = π 2^{-j}`, i.e. seven cubes of side `a_j/2`. The innermost box is
/// dropped and its contribution is charged to the error via
/// [`inner_box_bound`]. The shells are then refined adaptively.
pub fn spin_wave_integral(t: f64, options: &QuadratureOptions) -> Result<IntegralEstimate> {
    if !(t > 0.0 && t.is_finite()) {
        return Err(Error::Config(format!("beta*S must be positive and finite, got {t}")));
    }
    let rule = GaussRule::new(options.order);
    let octants = 8.0 / (2.0 * PI).powi(3);
    let f = |k: [f64; 3]| octants * log_one_minus_exp(t * dispersion(&k));

    let mut cubes = Vec::new();
    let mut a = PI;
    let mut shell_sum = 0.0;
    loop {
        let h = 0.5 * a;
        for b in 1..8u32 {
            let cube = Cube {
                lo: [
                    h * (b & 1) as f64,
                    h * ((b >> 1) & 1) as f64,
                    h * ((b >> 2) & 1) as f64,
                ],
                side: h,
            };
            shell_sum += rule.integrate_cube(&f, cube.lo, cube.side);
            cubes.push(cube);
        }
        a = h;
        if 3.0 * t * a * a <= 1.0 && inner_box_bound(t, a) <= 1e-3 * options.tolerance * shell_sum.abs() {
            break;
        }
        if a < 1e-150 {
            return Err(Error::Numerical("could not isolate the k = 0 singularity".into()));
        }
    }
    let excluded = inner_box_bound(t, a);
    let out = adaptive_3d(&f, cubes, excluded, &rule, options.tolerance, options.max_cells);
    let relative = out.error / out.value.abs();
    if !out.converged || relative > options.tolerance {
        return Err(Error::ToleranceUnachievable {
            requested: options.tolerance,
            achieved: relative,
        });
    }
    Ok(IntegralEstimate {
        value: out.value,
        error: out.error,
        cells: out.cells,
    })
}

/// Infinite-volume magnon free energy `g(βS)/β`.
pub fn f0_limit(beta: f64, spin: SpinValue, options: &QuadratureOptions) -> Result<SpinWaveFreeEnergy> {
    if beta.is_nan() || beta <= 0.0 {
        return Err(Error::Config(format!("beta must be positive, got {beta}")));
    }
    let g = spin_wave_integral(beta * spin.value(), options)?;
    Ok(SpinWaveFreeEnergy {
        beta,
        spin,
        value: g.value / beta,
        error_bound: g.error / beta,
        mode: F0Mode::Quadrature {
            order: options.order,
            cells: g.cells,
        },
        excluded_zero_mode: None,
    })
}

/// `ζ(5/2)` from `terms` direct terms plus an Euler-Maclaurin tail; the
/// second value bounds the truncation error.
pub fn zeta_five_halves(terms: u64) -> (f64, f64) {
    let s = 2.5;
    let n = terms.max(1) as f64;
    let partial: f64 = (1..=terms.max(1)).rev().map(|k| (k as f64).powf(-s)).sum();
    let tail = n.powf(1.0 - s) / (s - 1.0) - 0.5 * n.powf(-s) + s * n.powf(-s - 1.0) / 12.0;
    let next = s * (s + 1.0) * (s + 2.0) * n.powf(-s - 3.0) / 720.0;
    (partial + tail, next + 4.0 * f64::EPSILON * partial)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct C0Estimate {
    pub quadrature: f64,
    pub quadrature_error: f64,
    pub closed_form: f64,
    pub closed_form_error: f64,
}

impl C0Estimate {
    pub fn value(&self) -> f64 {
        self.closed_form
    }
}

/// The closed form `−ζ(5/2)/(8π^{3/2})`.
pub fn c0_closed_form() -> f64 {
    -zeta_five_halves(2_000).0 / (8.0 * PI.powf(1.5))
}

/// Evaluates `C_0` twice and insists the routes agree within `tolerance`:
/// by radial quadrature of `(2π)^{-3} ∫_{R³} ln(1 − e^{−k²}) dk` with an
/// analytic tail bound, and from the `ζ(5/2)` series.
pub fn c0_constant(tolerance: f64) -> Result<C0Estimate> {
    if tolerance.is_nan() || tolerance < 1e-10 {
        return Err(Error::Config(format!("tolerance must be >= 1e-10, got {tolerance}")));
    }
    // (2π)^{-3} 4π ∫_0^∞ r² ln(1 − e^{−r²}) dr
    let prefactor = 1.0 / (2.0 * PI * PI);
    let radius: f64 = 7.0;
    // ∫_R^∞ r² e^{−r²} dr ≤ e^{−R²}(R/2 + 1/(4R)) and |ln(1−u)| ≤ u/(1−u)
    let tail = prefactor * (-radius * radius).exp() * (radius / 2.0 + 1.0 / (4.0 * radius))
        / (1.0 - (-radius * radius).exp());
    let mut intervals = Vec::new();
    let mut hi = radius;
    for _ in 0..30 {
        intervals.push((0.5 * hi, hi));
        hi *= 0.5;
    }
    intervals.push((0.0, hi));
    intervals.reverse();
    let rule = GaussRule::new(8);
    let f = |r: f64| prefactor * r * r * log_one_minus_exp(r * r);
    let out = adaptive_1d(&f, &intervals, &rule, 0.0, 1e-3 * tolerance, 100_000);
    let quadrature_error = out.error + tail;

    let (zeta, zeta_err) = zeta_five_halves(2_000);
    let scale = 8.0 * PI.powf(1.5);
    let estimate = C0Estimate {
        quadrature: out.value,
        quadrature_error,
        closed_form: -zeta / scale,
        closed_form_error: zeta_err / scale,
    };
    if (estimate.quadrature - estimate.closed_form).abs() > tolerance
        || quadrature_error > tolerance
        || estimate.closed_form_error > tolerance
    {
        return Err(Error::C0Disagreement {
            quadrature: estimate.quadrature,
            closed_form: estimate.closed_form,
        });
    }
    Ok(estimate)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ScalingRow {
    pub beta: f64,
    pub spin: f64,
    pub f0: f64,
    /// `S^{3/2} β^{5/2} f_0(β, S)`
    pub rescaled: f64,
    /// `|rescaled − C_0| / |C_0|`
    pub deviation: f64,
}

pub fn scaling_check(spin: SpinValue, betas: &[f64], options: &QuadratureOptions) -> Result<Vec<ScalingRow>> {
    if betas.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::Config("beta grid must be strictly increasing".into()));
    }
    let c0 = c0_closed_form();
    let s = spin.value();
    betas
        .par_iter()
        .map(|&beta| {
            let f0 = f0_limit(beta, spin, options)?;
            let rescaled = (s * beta).powf(1.5) * beta * f0.value;
            Ok(ScalingRow {
                beta,
                spin: s,
                f0: f0.value,
                rescaled,
                deviation: ((rescaled - c0) / c0).abs(),
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spin_hilbert::build_sector;

    #[test]
    fn dispersion_values() {
        assert_eq!(dispersion(&[0.0, 0.0, 0.0]), 0.0);
        assert!((dispersion(&[PI, PI, PI]) - 12.0).abs() < 1e-14);
        assert!((dispersion(&[PI / 2.0, 0.0, 0.0]) - 2.0).abs() < 1e-14);
        assert!((dispersion(&[0.3, -1.1]) - dispersion(&[-0.3, 1.1])).abs() < 1e-15);
    }

    #[test]
    fn ring_magnons() {
        let ring = Lattice::new(1, 4, Boundary::Periodic).unwrap();
        let sector = SpinSector::one_magnon(&ring, SpinValue::HALF).unwrap();
        let modes = periodic_modes(&sector).unwrap();
        let energies: Vec<f64> = modes.iter().map(|m| m.energy).collect();
        assert!((energies[0]).abs() < 1e-15);
        assert!((energies[2] - 2.0).abs() < 1e-14);
        assert!(modes.iter().all(|m| m.residual < 1e-10));
        let states: Vec<_> = (0..4).map(|n| spin_wave_state(&sector, [n, 0, 0]).unwrap()).collect();
        for (i, a) in states.iter().enumerate() {
            for (j, b) in states.iter().enumerate() {
                let expected = if i == j { 1.0 } else { 0.0 };
                assert!((inner(a, b) - expected).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn plane_waves_rejected_on_free_lattice() {
        let chain = Lattice::new(1, 4, Boundary::Free).unwrap();
        let sector = SpinSector::one_magnon(&chain, SpinValue::HALF).unwrap();
        assert!(spin_wave_state(&sector, [1, 0, 0]).is_err());
        let ring = Lattice::new(1, 4, Boundary::Periodic).unwrap();
        let wrong = build_sector(&ring, SpinValue::HALF, Some(0)).unwrap();
        assert!(spin_wave_state(&wrong, [1, 0, 0]).is_err());
    }

    #[test]
    fn neumann_examples() {
        let energies = |dim, side, spin| {
            let l = Lattice::new(dim, side, Boundary::Free).unwrap();
            let sec = SpinSector::one_magnon(&l, spin).unwrap();
            let mut e: Vec<f64> = neumann_modes(&sec).unwrap().iter().map(|m| m.energy).collect();
            e.sort_by(f64::total_cmp);
            e
        };
        let close = |a: Vec<f64>, b: &[f64]| a.iter().zip(b).all(|(x, y)| (x - y).abs() < 1e-12);
        assert!(close(energies(1, 2, SpinValue::HALF), &[0.0, 1.0]));
        assert!(close(
            energies(3, 2, SpinValue::HALF),
            &[0.0, 1.0, 1.0, 1.0, 2.0, 2.0, 2.0, 3.0]
        ));
        assert!(close(energies(1, 3, SpinValue::ONE), &[0.0, 1.0, 3.0]));
    }

    #[test]
    fn laplacian_identity() {
        for (dim, side, bc) in [(1, 5, Boundary::Free), (2, 3, Boundary::Periodic), (3, 2, Boundary::Free)] {
            let l = Lattice::new(dim, side, bc).unwrap();
            for spin in [SpinValue::HALF, SpinValue::ONE, SpinValue::from_twice(3).unwrap()] {
                assert!(one_magnon_laplacian_deviation(&l, spin).unwrap() < 1e-12);
            }
        }
    }

    #[test]
    fn one_magnon_block_matches_sector() {
        for (dim, side, bc) in [(1, 4, Boundary::Periodic), (2, 3, Boundary::Free)] {
            let l = Lattice::new(dim, side, bc).unwrap();
            for spin in [SpinValue::HALF, SpinValue::ONE] {
                let sector = SpinSector::one_magnon(&l, spin).unwrap();
                let h = build_hamiltonian(&sector);
                let block = one_magnon_block(&l, spin);
                for x in 0..l.num_sites() {
                    for y in 0..l.num_sites() {
                        let hv = h.get(lowered_index(&sector, x), lowered_index(&sector, y));
                        assert!((hv - block.get(x, y)).abs() < 1e-14);
                    }
                }
            }
        }
    }

    #[test]
    fn f0_finite_ring() {
        let ring = Lattice::new(1, 4, Boundary::Periodic).unwrap();
        let f = f0_finite(&ring, SpinValue::HALF, 1.0).unwrap();
        let expected = 0.25 * (2.0 * (1.0 - (-1f64).exp()).ln() + (1.0 - (-2f64).exp()).ln());
        assert!((f.value - expected).abs() < 1e-15);
        assert!(f.value < 0.0);
        let cold = f0_finite(&ring, SpinValue::HALF, 200.0).unwrap();
        assert!(cold.value < 0.0 && cold.value > -1e-80);
    }

    #[test]
    fn zeta_series() {
        let (z, err) = zeta_five_halves(2_000);
        // ζ(5/2) = 1.341487257250917179756769693...
        assert!((z - 1.341_487_257_250_917).abs() < 1e-13);
        assert!(err < 1e-14);
    }

    #[test]
    fn c0_rejects_tiny_tolerance() {
        assert!(c0_constant(1e-12).is_err());
    }

    #[test]
    fn integral_reports_unreachable_tolerance() {
        let opts = QuadratureOptions {
            order: 2,
            tolerance: 1e-13,
            max_cells: 50,
        };
        assert!(matches!(
            spin_wave_integral(1.0, &opts),
            Err(Error::ToleranceUnachievable { .. })
        ));
    }

    #[test]
    fn scaling_grid_must_increase() {
        assert!(scaling_check(SpinValue::HALF, &[2.0, 1.0], &QuadratureOptions::default()).is_err());
    }
}
