//! Finite-size checks of the spectral and thermodynamic bounds: sector
//! minima against the spin deficit, the one-magnon gap, the Gibbs
//! variational upper bound with a hard-core-projected magnon trial state,
//! and the two-point chain `S² − ⟨S_x·S_y⟩_β ≤ C |x−y|² e(β)`.

use std::f64::consts::LN_2;

use nalgebra::DMatrix;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact_diag::{diagonalize_sectors, SectorDiagonalization, GROUND_TOLERANCE};
use crate::quadrature::pairwise_sum;
use crate::holstein_primakoff::{build_h0, FockBasis};
use crate::lattice::{Boundary, Lattice};
use crate::linalg::{lanczos_lowest, symmetric_eigen, symmetric_eigenvalues, LanczosOptions};
use crate::spin_hilbert::{
    build_hamiltonian, build_sector, build_total_spin_squared, decompose_by_total_spin, SpinSector, SpinValue,
};
use crate::spin_wave::{c0_closed_form, f0_finite, f0_limit, one_magnon_block, QuadratureOptions};

/// Slack allowed in the variational inequality.
pub const VARIATIONAL_SLACK: f64 = 1e-12;
/// Relative change of the compressed trace when `n_max` grows by one.
pub const TRUNCATION_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Clone, Copy, Serialize)]
pub struct SectorMinimum {
    pub twice_s_t: u64,
    pub s_t: f64,
    pub e_min: f64,
    /// `S N − S_T`
    pub deficit: f64,
    /// `E_min ℓ² / (S D)`, absent for `D = 0`
    pub ratio: Option<f64>,
    /// `|E_min|` difference to the copy one `S³_T` step lower, if any
    pub cross_check: Option<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct SectorMinimaTable {
    pub side: usize,
    pub spin: SpinValue,
    /// ordered by decreasing `S_T`
    pub rows: Vec<SectorMinimum>,
    pub empirical_c: f64,
    /// `E_min` never increases with `S_T`
    pub monotone: bool,
    pub max_cross_check: f64,
}

/// Lowest energy in every total-spin sector, computed inside the copy with
/// `S³_T = S_T` and cross-checked in the copy with `S³_T = S_T − 1`.
pub fn proposition1_table(lattice: &Lattice, spin: SpinValue) -> Result<SectorMinimaTable> {
    let n = lattice.num_sites() as u64;
    let top = spin.twice() as u64 * n;
    // sectors with S³_T ≥ 0, i.e. total_sz2 = top, top − 2, …
    let labels: Vec<u64> = (0..=top).rev().step_by(2).collect();
    let minima: Vec<Vec<(u64, f64)>> = labels
        .par_iter()
        .map(|&m2| {
            let sector = build_sector(lattice, spin, Some(m2 as i64))?;
            let groups = decompose_by_total_spin(&sector, &build_hamiltonian(&sector), &build_total_spin_squared(&sector))?;
            Ok(groups.iter().map(|g| (g.twice_s_t, g.energies[0])).collect())
        })
        .collect::<Result<_>>()?;
    let lookup = |sector_pos: usize, twice: u64| {
        minima
            .get(sector_pos)
            .and_then(|groups| groups.iter().find(|(t, _)| *t == twice).map(|(_, e)| *e))
    };

    let s = spin.value();
    let side = lattice.side() as f64;
    let mut rows = Vec::with_capacity(labels.len());
    for (pos, &twice) in labels.iter().enumerate() {
        let e_min = lookup(pos, twice)
            .ok_or_else(|| Error::Numerical(format!("no S_T = {} states in their own sector", twice as f64 / 2.0)))?;
        let deficit = (top - twice) as f64 / 2.0;
        let cross_check = lookup(pos + 1, twice).map(|e| (e - e_min).abs());
        rows.push(SectorMinimum {
            twice_s_t: twice,
            s_t: twice as f64 / 2.0,
            e_min,
            deficit,
            ratio: (deficit > 0.0).then(|| e_min * side * side / (s * deficit)),
            cross_check,
        });
    }
    let empirical_c = rows.iter().filter_map(|r| r.ratio).fold(f64::INFINITY, f64::min);
    if (empirical_c.is_nan() || empirical_c <= 0.0) && rows.len() > 1 {
        return Err(Error::BoundViolated {
            what: "excitation constant E_min l^2 / (S D)".into(),
            value: empirical_c,
        });
    }
    let monotone = rows.windows(2).all(|w| w[1].e_min >= w[0].e_min - 1e-10);
    let max_cross_check = rows.iter().filter_map(|r| r.cross_check).fold(0.0, f64::max);
    Ok(SectorMinimaTable {
        side: lattice.side(),
        spin,
        rows,
        empirical_c,
        monotone,
        max_cross_check,
    })
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct GapRow {
    pub side: usize,
    pub gap: f64,
    /// `gap ℓ² / S`
    pub scaled: f64,
    /// lowest Neumann mode `2S(1 − cos(π/ℓ))`
    pub neumann: f64,
}

/// One-magnon gap of free-boundary boxes from Lanczos with the uniform
/// (ground multiplet) state deflated. Boxes small enough for the spin
/// basis use the spin Hamiltonian's one-magnon sector; larger ones use the
/// equivalent site-space block.
pub fn gap_scaling(dim: usize, spin: SpinValue, sides: &[usize]) -> Result<Vec<GapRow>> {
    sides
        .iter()
        .map(|&side| {
            if side < 2 {
                return Err(Error::InvalidLattice("gap needs side >= 2".into()));
            }
            let lattice = Lattice::new(dim, side, Boundary::Free)?;
            let h = match SpinSector::one_magnon(&lattice, spin) {
                Ok(sector) => build_hamiltonian(&sector),
                Err(Error::TooLarge(_)) => one_magnon_block(&lattice, spin),
                Err(e) => return Err(e),
            };
            let uniform = vec![1.0 / (h.dim() as f64).sqrt(); h.dim()];
            let options = LanczosOptions {
                tolerance: 1e-10,
                max_iter: 2000,
                ..LanczosOptions::default()
            };
            let gap = lanczos_lowest(&h, &[uniform], options)?.value;
            let s = spin.value();
            let l = side as f64;
            Ok(GapRow {
                side,
                gap,
                scaled: gap * l * l / s,
                neumann: 2.0 * s * (1.0 - (std::f64::consts::PI / l).cos()),
            })
        })
        .collect()
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct BoundReport {
    pub beta: f64,
    pub f_exact: f64,
    pub f_trial_upper: f64,
    /// finite-grid spin-wave free energy (periodic lattices only)
    pub f0_reference: Option<f64>,
    /// `C_0 ln 2 S^{-3/2} β^{-5/2}`
    pub literature_upper: f64,
    pub slack: f64,
    pub variational_holds: bool,
}

/// `P e^{−βH_0} P` on one particle-number block, in the hard-core basis.
fn compressed_weight(hard: &FockBasis, beta: f64, cutoff: u32) -> Result<DMatrix<f64>> {
    let free = FockBasis::uncapped(hard.lattice(), hard.spin(), cutoff, hard.total_n())?;
    let (values, vectors) = symmetric_eigen(build_h0(&free).to_dense());
    let positions: Vec<usize> = (0..hard.dim())
        .map(|i| {
            free.index_of(&hard.occupations(i))
                .ok_or_else(|| Error::Numerical("hard-core state missing from the truncated space".into()))
        })
        .collect::<Result<_>>()?;
    let rows = DMatrix::from_fn(hard.dim(), values.len(), |r, c| vectors[(positions[r], c)]);
    let weights = DMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
        values.len(),
        values.iter().map(|&v| (-beta * v).exp()),
    ));
    Ok(&rows * weights * rows.transpose())
}

/// Gibbs variational value of `Γ = P e^{−βH_0} P / Tr P e^{−βH_0} P`
/// compared with the exact free energy.
///
/// `e^{−βH_0}` is taken in the boson space with at most `n_max` particles per
/// site; `None` means no truncation beyond the block's particle number.
pub fn trial_state_upper_bound(lattice: &Lattice, spin: SpinValue, beta: f64, n_max: Option<u32>) -> Result<BoundReport> {
    if !(beta > 0.0 && beta.is_finite()) {
        return Err(Error::Config(format!("beta must be positive and finite, got {beta}")));
    }
    let n = lattice.num_sites();
    let top = spin.twice() as u64 * n as u64;
    let exact = diagonalize_sectors(lattice, spin, false)?.free_energy(beta)?;

    // per block: (Tr G, Tr H G, eigenvalues of G)
    let blocks: Vec<(f64, f64, Vec<f64>)> = (0..=top)
        .into_par_iter()
        .map(|total_n| {
            let hard = FockBasis::hard_core(lattice, spin, Some(total_n))?;
            let natural = total_n.max(1) as u32;
            let cutoff = n_max.map_or(natural, |c| c.min(natural)).max(spin.twice());
            let g = compressed_weight(&hard, beta, cutoff)?;
            if cutoff < natural {
                let wider = compressed_weight(&hard, beta, cutoff + 1)?;
                let tail = ((wider.trace() - g.trace()) / wider.trace()).abs();
                if tail > TRUNCATION_TOLERANCE {
                    return Err(Error::TruncationTooSmall { n_max: cutoff, tail });
                }
            }
            let sector = build_sector(lattice, spin, Some(2 * total_n as i64 - top as i64))?;
            let h = build_hamiltonian(&sector).to_dense();
            let energy = h.component_mul(&g).sum();
            Ok((g.trace(), energy, symmetric_eigenvalues(g)))
        })
        .collect::<Result<_>>()?;

    let z: f64 = blocks.iter().map(|b| b.0).sum();
    let energy: f64 = blocks.iter().map(|b| b.1).sum::<f64>() / z;
    let neg_entropy: f64 = blocks
        .iter()
        .flat_map(|b| b.2.iter())
        .map(|&g| g / z)
        .filter(|&g| g > 0.0)
        .map(|g| g * g.ln())
        .sum();
    let nf = n as f64;
    let f_trial_upper = energy / nf + neg_entropy / (beta * nf);
    let f0_reference = match lattice.boundary() {
        Boundary::Periodic => Some(f0_finite(lattice, spin, beta)?.value),
        Boundary::Free => None,
    };
    let slack = f_trial_upper - exact.free_energy_per_site;
    let report = BoundReport {
        beta,
        f_exact: exact.free_energy_per_site,
        f_trial_upper,
        f0_reference,
        literature_upper: literature_curve(beta, spin.value()),
        slack,
        variational_holds: slack >= -VARIATIONAL_SLACK,
    };
    if !report.variational_holds {
        return Err(Error::BoundViolated {
            what: "f_exact <= trial value".into(),
            value: slack,
        });
    }
    Ok(report)
}

/// `C_0 ln 2 S^{-3/2} β^{-5/2}`.
pub fn literature_curve(beta: f64, s: f64) -> f64 {
    c0_closed_form() * LN_2 * s.powf(-1.5) * beta.powf(-2.5)
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct ComparisonRow {
    pub beta: f64,
    pub spin: f64,
    pub f0_limit: f64,
    /// `C_0 S^{-3/2} β^{-5/2}`
    pub c0_curve: f64,
    /// `C_0 ln 2 S^{-3/2} β^{-5/2}`
    pub literature_curve: f64,
    /// `−C S (ln(Sβ)/(Sβ))^{5/2}` for a user-supplied `C`, when `Sβ > 1`
    pub preliminary_curve: Option<f64>,
    /// `f0_limit / c0_curve`
    pub ratio: f64,
}

pub fn literature_comparison(
    betas: &[f64],
    spin: SpinValue,
    preliminary_c: Option<f64>,
    options: &QuadratureOptions,
) -> Result<Vec<ComparisonRow>> {
    let c0 = c0_closed_form();
    let s = spin.value();
    betas
        .par_iter()
        .map(|&beta| {
            let f0 = f0_limit(beta, spin, options)?.value;
            let c0_curve = c0 * s.powf(-1.5) * beta.powf(-2.5);
            let t = s * beta;
            Ok(ComparisonRow {
                beta,
                spin: s,
                f0_limit: f0,
                c0_curve,
                literature_curve: literature_curve(beta, s),
                preliminary_curve: preliminary_c.filter(|_| t > 1.0).map(|c| -c * s * (t.ln() / t).powf(2.5)),
                ratio: f0 / c0_curve,
            })
        })
        .collect()
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct CorollaryRow {
    pub beta: f64,
    pub x: usize,
    pub y: usize,
    pub distance_squared: f64,
    /// `S² − ⟨S_x·S_y⟩_β`
    pub lhs: f64,
    pub energy_per_site: f64,
    /// `lhs / (|x−y|² e)`, absent when `e` vanishes
    pub ratio: Option<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct CorollaryReport {
    pub rows: Vec<CorollaryRow>,
    pub max_ratio: f64,
    /// `max_β |Σ_bonds lhs − N e|`
    pub sum_rule_deviation: f64,
    /// `lhs` never increases along the β grid, for every pair
    pub monotone: bool,
    pub min_lhs: f64,
    /// largest `lhs` at `β = ∞` (zero if the grid has no such point)
    pub cold_lhs: f64,
    /// `max_β |∂_β(βf) − e| / |e|` by a five-point stencil (finite β ≥ 0.01)
    pub energy_derivative_deviation: f64,
}

/// Energies per site below this count as the ground state.
const ENERGY_FLOOR: f64 = 1e-12;

/// Step of the five-point stencil for `∂_β(βf)`.
const DERIVATIVE_STEP: f64 = 1e-3;

/// `βf(β) + ln(g)/N` with `g` the ground degeneracy, i.e.
/// `(β E_0 − ln(1 + Σ_{E > E_0} e^{−β(E−E_0)}/g))/N`. The dropped term does
/// not depend on `β`, and what is left keeps full relative precision when
/// `e(β)` is many orders below `βf`.
fn reduced_beta_f(diag: &SectorDiagonalization, beta: f64) -> f64 {
    let energies = diag.all_eigenvalues();
    let e0 = energies[0];
    let window = GROUND_TOLERANCE * e0.abs().max(1.0);
    let g = energies.iter().filter(|&&e| e - e0 <= window).count() as f64;
    let excited: Vec<f64> = energies
        .iter()
        .filter(|&&e| e - e0 > window)
        .map(|&e| (-beta * (e - e0)).exp() / g)
        .collect();
    (beta * e0 - pairwise_sum(&excited).ln_1p()) / diag.lattice().num_sites() as f64
}

/// Two-point chain over all site pairs and a grid of `β ∈ [0, ∞]`
/// (sorted ascending).
pub fn corollary_chain_check(lattice: &Lattice, spin: SpinValue, betas: &[f64]) -> Result<CorollaryReport> {
    if betas.is_empty() || betas.windows(2).any(|w| w[1] <= w[0]) || betas[0] < 0.0 {
        return Err(Error::Config("beta grid must be non-negative and strictly increasing".into()));
    }
    let diag = diagonalize_sectors(lattice, spin, true)?;
    let n = lattice.num_sites();
    let s2 = spin.value() * spin.value();
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|x| (x + 1..n).map(move |y| (x, y))).collect();
    let expectations = pairs
        .par_iter()
        .map(|&(x, y)| diag.pair_expectations(x, y))
        .collect::<Result<Vec<_>>>()?;
    let energies: Vec<f64> = betas.iter().map(|&b| diag.energy_per_site(b)).collect();

    let mut rows = Vec::with_capacity(betas.len() * pairs.len());
    for (bi, &beta) in betas.iter().enumerate() {
        let e = energies[bi];
        for (pi, &(x, y)) in pairs.iter().enumerate() {
            let lhs = s2 - expectations[pi].average(beta);
            let d2 = lattice.distance_squared(x, y);
            rows.push(CorollaryRow {
                beta,
                x,
                y,
                distance_squared: d2,
                lhs,
                energy_per_site: e,
                ratio: (e > ENERGY_FLOOR).then(|| lhs / (d2 * e)),
            });
        }
    }

    let min_lhs = rows.iter().map(|r| r.lhs).fold(f64::INFINITY, f64::min);
    if min_lhs < -1e-10 {
        return Err(Error::BoundViolated {
            what: "S^2 - <S_x.S_y> >= 0".into(),
            value: min_lhs,
        });
    }
    let np = pairs.len();
    let monotone = (0..np).all(|pi| (1..betas.len()).all(|bi| rows[bi * np + pi].lhs <= rows[(bi - 1) * np + pi].lhs + 1e-12));
    let bond_set = lattice.bonds();
    let sum_rule_deviation = (0..betas.len())
        .map(|bi| {
            let total: f64 = rows[bi * np..(bi + 1) * np]
                .iter()
                .filter(|r| bond_set.binary_search(&(r.x, r.y)).is_ok())
                .map(|r| r.lhs)
                .sum();
            (total - n as f64 * energies[bi]).abs()
        })
        .fold(0.0, f64::max);
    let cold_lhs = rows
        .iter()
        .filter(|r| r.beta.is_infinite())
        .map(|r| r.lhs.abs())
        .fold(0.0, f64::max);
    let max_ratio = rows.iter().filter_map(|r| r.ratio).fold(0.0, f64::max);
    if !max_ratio.is_finite() {
        return Err(Error::BoundViolated {
            what: "empirical two-point constant".into(),
            value: max_ratio,
        });
    }

    let h = DERIVATIVE_STEP;
    let mut energy_derivative_deviation: f64 = 0.0;
    for (bi, &beta) in betas.iter().enumerate() {
        if !beta.is_finite() || beta < 0.01 {
            continue;
        }
        let phi = |b: f64| reduced_beta_f(&diag, b);
        let d = (-phi(beta + 2.0 * h) + 8.0 * phi(beta + h) - 8.0 * phi(beta - h) + phi(beta - 2.0 * h)) / (12.0 * h);
        let e = energies[bi];
        energy_derivative_deviation = energy_derivative_deviation.max((d - e).abs() / e.abs());
    }

    Ok(CorollaryReport {
        rows,
        max_ratio,
        sum_rule_deviation,
        monotone,
        min_lhs,
        cold_lhs,
        energy_derivative_deviation,
    })
}
