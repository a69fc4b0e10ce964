//! Spectra, partition functions and thermal expectation values.
//!
//! All partition sums are shifted by the lowest eigenvalue before
//! exponentiation, so the ground multiplet survives at any `β`.

use std::io::Write;

use nalgebra::DMatrix;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::lattice::Lattice;
use crate::linalg::{lanczos_lowest, symmetric_eigen, symmetric_eigenvalues, LanczosOptions};
use crate::sparse::SparseOperator;
use crate::spin_hilbert::{build_hamiltonian, build_sector, build_spin_dot, sector_labels, SpinSector, SpinValue};

pub const DENSE_CAP: usize = 20_000;

/// Relative width used to identify the ground multiplet in the `β → ∞` limit.
pub const GROUND_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone)]
pub struct Spectrum {
    /// ascending
    pub eigenvalues: Vec<f64>,
    /// columns match `eigenvalues`
    pub eigenvectors: Option<DMatrix<f64>>,
    /// `2 S³_T` of the sector, `None` for the full space
    pub total_sz2: Option<i64>,
}

impl Spectrum {
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn ground_energy(&self) -> f64 {
        self.eigenvalues.first().copied().unwrap_or(f64::INFINITY)
    }

    /// Largest `‖Hv − λv‖ / max(1, |λ|)` over stored eigenpairs.
    pub fn max_residual(&self, op: &SparseOperator) -> Option<f64> {
        let vecs = self.eigenvectors.as_ref()?;
        let worst = (0..self.dim())
            .map(|c| {
                let v: Vec<f64> = vecs.column(c).iter().copied().collect();
                let hv = op.mul_vec(&v);
                let lambda = self.eigenvalues[c];
                let r: f64 = hv.iter().zip(&v).map(|(a, b)| (a - lambda * b).powi(2)).sum();
                r.sqrt() / lambda.abs().max(1.0)
            })
            .fold(0.0, f64::max);
        Some(worst)
    }

    pub fn write_eigenvalues<W: Write>(&self, mut out: W) -> Result<()> {
        for e in &self.eigenvalues {
            writeln!(out, "{e:e}")?;
        }
        Ok(())
    }
}

pub fn full_spectrum(op: &SparseOperator, with_vectors: bool) -> Result<Spectrum> {
    full_spectrum_capped(op, with_vectors, DENSE_CAP)
}

pub fn full_spectrum_capped(op: &SparseOperator, with_vectors: bool, cap: usize) -> Result<Spectrum> {
    if op.dim() > cap {
        return Err(Error::Infeasible { dim: op.dim(), cap });
    }
    let dense = op.to_dense();
    let (eigenvalues, eigenvectors) = if with_vectors {
        let (vals, vecs) = symmetric_eigen(dense);
        (vals, Some(vecs))
    } else {
        (symmetric_eigenvalues(dense), None)
    };
    Ok(Spectrum {
        eigenvalues,
        eigenvectors,
        total_sz2: None,
    })
}

/// Smallest eigenvalue by Lanczos, validated by its residual.
pub fn lowest_eigenvalue(op: &SparseOperator, tolerance: f64) -> Result<f64> {
    let options = LanczosOptions {
        tolerance,
        ..LanczosOptions::default()
    };
    Ok(lanczos_lowest(op, &[], options)?.value)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThermalResult {
    pub beta: f64,
    pub free_energy_per_site: f64,
    pub energy_per_site: f64,
    /// `ln Tr e^{−βH}`
    pub log_partition: f64,
}

/// Normalized Gibbs weights. `β = 0` is uniform, `β = ∞` is uniform on the
/// ground multiplet.
pub fn gibbs_weights(energies: &[f64], beta: f64) -> Vec<f64> {
    assert!(beta >= 0.0, "inverse temperature must be non-negative");
    let e0 = energies.iter().copied().fold(f64::INFINITY, f64::min);
    let raw: Vec<f64> = if beta.is_infinite() {
        let width = GROUND_TOLERANCE * e0.abs().max(1.0);
        energies
            .iter()
            .map(|&e| if e - e0 <= width { 1.0 } else { 0.0 })
            .collect()
    } else {
        energies.iter().map(|&e| (-beta * (e - e0)).exp()).collect()
    };
    let z: f64 = raw.iter().sum();
    raw.into_iter().map(|w| w / z).collect()
}

/// Free energy and energy per site from a complete list of spectra
/// (typically one per magnetization sector).
pub fn free_energy(blocks: &[Spectrum], expected_dim: usize, beta: f64, num_sites: usize) -> Result<ThermalResult> {
    if !(beta > 0.0 && beta.is_finite()) {
        return Err(Error::Config(format!("beta must be positive and finite, got {beta}")));
    }
    let covered: usize = blocks.iter().map(Spectrum::dim).sum();
    let mut labels: Vec<Option<i64>> = blocks.iter().map(|b| b.total_sz2).collect();
    labels.sort_unstable();
    labels.dedup();
    if covered != expected_dim || labels.len() != blocks.len() {
        return Err(Error::IncompleteCoverage {
            covered,
            expected: expected_dim,
        });
    }
    let e0 = blocks
        .iter()
        .map(Spectrum::ground_energy)
        .fold(f64::INFINITY, f64::min);
    let mut z_shifted = 0.0;
    let mut e_weighted = 0.0;
    for block in blocks {
        for &e in &block.eigenvalues {
            let w = (-beta * (e - e0)).exp();
            z_shifted += w;
            e_weighted += (e - e0) * w;
        }
    }
    let log_partition = -beta * e0 + z_shifted.ln();
    let n = num_sites as f64;
    Ok(ThermalResult {
        beta,
        free_energy_per_site: -log_partition / (beta * n),
        energy_per_site: (e0 + e_weighted / z_shifted) / n,
        log_partition,
    })
}

/// Every magnetization sector of a lattice, diagonalized.
#[derive(Debug, Clone)]
pub struct SectorDiagonalization {
    lattice: Lattice,
    spin: SpinValue,
    sectors: Vec<SpinSector>,
    spectra: Vec<Spectrum>,
}

pub fn diagonalize_sectors(lattice: &Lattice, spin: SpinValue, with_vectors: bool) -> Result<SectorDiagonalization> {
    let labels = sector_labels(lattice, spin);
    let results: Vec<Result<(SpinSector, Spectrum)>> = labels
        .par_iter()
        .map(|&m2| {
            let sector = build_sector(lattice, spin, Some(m2))?;
            let h = build_hamiltonian(&sector);
            let mut spectrum = full_spectrum(&h, with_vectors)?;
            spectrum.total_sz2 = Some(m2);
            Ok((sector, spectrum))
        })
        .collect();
    let mut sectors = Vec::with_capacity(labels.len());
    let mut spectra = Vec::with_capacity(labels.len());
    for r in results {
        let (sec, spec) = r?;
        sectors.push(sec);
        spectra.push(spec);
    }
    Ok(SectorDiagonalization {
        lattice: lattice.clone(),
        spin,
        sectors,
        spectra,
    })
}

impl SectorDiagonalization {
    pub fn lattice(&self) -> &Lattice {
        &self.lattice
    }

    pub fn spin(&self) -> SpinValue {
        self.spin
    }

    pub fn sectors(&self) -> &[SpinSector] {
        &self.sectors
    }

    pub fn spectra(&self) -> &[Spectrum] {
        &self.spectra
    }

    pub fn total_dim(&self) -> usize {
        (self.spin.local_dim() as usize).pow(self.lattice.num_sites() as u32)
    }

    pub fn all_eigenvalues(&self) -> Vec<f64> {
        let mut all: Vec<f64> = self.spectra.iter().flat_map(|s| s.eigenvalues.iter().copied()).collect();
        all.sort_by(f64::total_cmp);
        all
    }

    pub fn ground_energy(&self) -> f64 {
        self.spectra.iter().map(Spectrum::ground_energy).fold(f64::INFINITY, f64::min)
    }

    /// Number of eigenvalues within `tol` of the ground energy.
    pub fn ground_degeneracy(&self, tol: f64) -> usize {
        let e0 = self.ground_energy();
        self.spectra
            .iter()
            .flat_map(|s| s.eigenvalues.iter())
            .filter(|&&e| e - e0 <= tol)
            .count()
    }

    pub fn free_energy(&self, beta: f64) -> Result<ThermalResult> {
        free_energy(&self.spectra, self.total_dim(), beta, self.lattice.num_sites())
    }

    pub fn thermal_grid(&self, betas: &[f64]) -> Result<Vec<ThermalResult>> {
        betas.par_iter().map(|&b| self.free_energy(b)).collect()
    }

    /// `⟨H⟩_β / N`, defined for every `β ∈ [0, ∞]`.
    pub fn energy_per_site(&self, beta: f64) -> f64 {
        let energies = self.all_energies_in_block_order();
        let w = gibbs_weights(&energies, beta);
        energies.iter().zip(&w).map(|(e, w)| e * w).sum::<f64>() / self.lattice.num_sites() as f64
    }

    fn all_energies_in_block_order(&self) -> Vec<f64> {
        self.spectra.iter().flat_map(|s| s.eigenvalues.iter().copied()).collect()
    }

    /// `⟨v_i|S_x·S_y|v_i⟩` for every eigenvector, in block order.
    pub fn pair_expectations(&self, x: usize, y: usize) -> Result<PairExpectations> {
        let per_block: Vec<Result<Vec<f64>>> = self
            .sectors
            .par_iter()
            .zip(self.spectra.par_iter())
            .map(|(sector, spectrum)| {
                let vecs = spectrum.eigenvectors.as_ref().ok_or(Error::MissingEigenvectors)?;
                let op = build_spin_dot(sector, x, y);
                Ok((0..spectrum.dim())
                    .map(|c| {
                        let v: Vec<f64> = vecs.column(c).iter().copied().collect();
                        op.expectation(&v)
                    })
                    .collect())
            })
            .collect();
        let mut values = Vec::new();
        for block in per_block {
            values.extend(block?);
        }
        Ok(PairExpectations {
            energies: self.all_energies_in_block_order(),
            values,
        })
    }
}

/// Diagonal matrix elements of one observable in the energy eigenbasis,
/// ready to be Gibbs-averaged at any `β`.
#[derive(Debug, Clone)]
pub struct PairExpectations {
    energies: Vec<f64>,
    values: Vec<f64>,
}

impl PairExpectations {
    pub fn average(&self, beta: f64) -> f64 {
        let w = gibbs_weights(&self.energies, beta);
        w.iter().zip(&self.values).map(|(w, v)| w * v).sum()
    }
}

/// `⟨S_x·S_y⟩_β` in the finite-volume Gibbs state; `β = ∞` averages the
/// ground multiplet.
pub fn thermal_two_point(diag: &SectorDiagonalization, beta: f64, x: usize, y: usize) -> Result<f64> {
    if x == y {
        return Err(Error::Config("two-point function needs distinct sites".into()));
    }
    Ok(diag.pair_expectations(x, y)?.average(beta))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::Boundary;
    use crate::spin_hilbert::{build_sector, SpinSector};

    fn two_site(spin: SpinValue) -> SectorDiagonalization {
        let l = Lattice::new(1, 2, Boundary::Free).unwrap();
        diagonalize_sectors(&l, spin, true).unwrap()
    }

    #[test]
    fn two_site_spectra() {
        assert_eq!(two_site(SpinValue::HALF).all_eigenvalues().len(), 4);
        let ev = two_site(SpinValue::ONE).all_eigenvalues();
        let expected = [0.0, 0.0, 0.0, 0.0, 0.0, 2.0, 2.0, 2.0, 3.0];
        assert!(ev.iter().zip(expected).all(|(a, b)| (a - b).abs() < 1e-12));
    }

    #[test]
    fn two_site_free_energy_closed_form() {
        let d = two_site(SpinValue::HALF);
        for beta in [0.01, 0.3, 1.0, 7.0, 100.0, 1e4] {
            let t = d.free_energy(beta).unwrap();
            let exact = -(3.0 + (-beta).exp()).ln() / (2.0 * beta);
            assert!((t.free_energy_per_site - exact).abs() < 1e-12);
            assert!(t.free_energy_per_site <= 0.0 && t.energy_per_site >= 0.0);
        }
        // infinite temperature entropy
        let t = d.free_energy(1e-9).unwrap();
        assert!((t.beta * t.free_energy_per_site + 2f64.ln()).abs() < 1e-8);
    }

    #[test]
    fn missing_sector_is_an_error() {
        let d = two_site(SpinValue::HALF);
        let partial = &d.spectra()[..2];
        assert!(matches!(
            free_energy(partial, 4, 1.0, 2),
            Err(Error::IncompleteCoverage { .. })
        ));
        assert!(d.free_energy(0.0).is_err());
    }

    #[test]
    fn two_point_limits() {
        let d = two_site(SpinValue::HALF);
        assert!((thermal_two_point(&d, f64::INFINITY, 0, 1).unwrap() - 0.25).abs() < 1e-12);
        assert!(thermal_two_point(&d, 0.0, 0, 1).unwrap().abs() < 1e-12);
        assert!(thermal_two_point(&d, 1.0, 0, 0).is_err());
        let nv = diagonalize_sectors(d.lattice(), SpinValue::HALF, false).unwrap();
        assert!(matches!(thermal_two_point(&nv, 1.0, 0, 1), Err(Error::MissingEigenvectors)));
    }

    #[test]
    fn lanczos_matches_dense() {
        let ring = Lattice::new(1, 4, Boundary::Periodic).unwrap();
        let sec = build_sector(&ring, SpinValue::HALF, Some(0)).unwrap();
        let h = build_hamiltonian(&sec);
        let dense = full_spectrum(&h, false).unwrap().ground_energy();
        assert!((lowest_eigenvalue(&h, 1e-9).unwrap() - dense).abs() < 1e-9);

        let two = Lattice::new(1, 2, Boundary::Free).unwrap();
        let sec = build_sector(&two, SpinValue::HALF, Some(0)).unwrap();
        assert!(lowest_eigenvalue(&build_hamiltonian(&sec), 1e-9).unwrap().abs() < 1e-9);
        let top = SpinSector::one_magnon(&two, SpinValue::HALF).unwrap();
        let polarized = build_sector(&two, SpinValue::HALF, Some(2)).unwrap();
        assert_eq!(top.dim(), 2);
        assert!(lowest_eigenvalue(&build_hamiltonian(&polarized), 1e-9).unwrap().abs() < 1e-12);
    }

    #[test]
    fn dense_cap_enforced() {
        let op = SparseOperator::identity(10);
        assert!(matches!(full_spectrum_capped(&op, false, 5), Err(Error::Infeasible { dim: 10, cap: 5 })));
    }

    #[test]
    fn residuals_small() {
        let cube = Lattice::new(3, 2, Boundary::Free).unwrap();
        let sec = build_sector(&cube, SpinValue::HALF, Some(0)).unwrap();
        let h = build_hamiltonian(&sec);
        let s = full_spectrum(&h, true).unwrap();
        assert!(s.max_residual(&h).unwrap() < 1e-9);
    }
}
