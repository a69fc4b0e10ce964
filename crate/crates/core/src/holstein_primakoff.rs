//! Bosonic (Holstein-Primakoff) form of the Heisenberg ferromagnet.
//!
//! With `S³_x = n_x − S` every spin configuration becomes an occupancy
//! vector `0 ≤ n_x ≤ 2S`; the hard-core space uses the same digits as the
//! spin basis, so the correspondence is the identity on codes. The
//! Hamiltonian splits as `H_B = H_0 + K`, with
//!
//! * `H_0 = S Σ_⟨x,y⟩ (a†_x − a†_y)(a_x − a_y)`, the second-quantized
//!   lattice Laplacian, and
//! * `K = Σ_⟨x,y⟩ { −a†_x a†_y a_x a_y + S a†_x [1 − √(1−n̂_x/2S) √(1−n̂_y/2S)] a_y + (x ↔ y) }`.
//!
//! Operators on a capped space are compressions: a creation operator that
//! would exceed the cap gives zero.

use nalgebra::DMatrix;
use rayon::prelude::*;
use serde::Serialize;

use crate::basis::ConfigBasis;
use crate::error::{Error, Result};
use crate::lattice::Lattice;
use crate::linalg::{symmetric_eigen, symmetric_eigenvalues};
use crate::sparse::SparseOperator;
use crate::spin_hilbert::{build_hamiltonian, build_sector, SpinSector, SpinValue};

pub const EQUIVALENCE_TOLERANCE: f64 = 1e-8;

#[derive(Debug, Clone)]
pub struct FockBasis {
    lattice: Lattice,
    spin: SpinValue,
    cutoff: u32,
    total_n: Option<u64>,
    basis: ConfigBasis,
}

impl FockBasis {
    /// The hard-core space `n_x ≤ 2S`, optionally at fixed particle number.
    pub fn hard_core(lattice: &Lattice, spin: SpinValue, total_n: Option<u64>) -> Result<Self> {
        Self::with_cutoff(lattice, spin, spin.twice(), total_n)
    }

    /// Occupancies up to `n_max` per site, which may exceed `2S`.
    pub fn uncapped(lattice: &Lattice, spin: SpinValue, n_max: u32, total_n: Option<u64>) -> Result<Self> {
        Self::with_cutoff(lattice, spin, n_max, total_n)
    }

    fn with_cutoff(lattice: &Lattice, spin: SpinValue, cutoff: u32, total_n: Option<u64>) -> Result<Self> {
        if cutoff == 0 {
            return Err(Error::InvalidSector("occupancy cutoff must be at least 1".into()));
        }
        let basis = ConfigBasis::new(cutoff as u64 + 1, lattice.num_sites(), total_n)?;
        Ok(FockBasis {
            lattice: lattice.clone(),
            spin,
            cutoff,
            total_n,
            basis,
        })
    }

    /// Hard-core block matching a spin sector: `N_tot = S³_T + S N`.
    pub fn matching(sector: &SpinSector) -> Result<Self> {
        Self::hard_core(sector.lattice(), sector.spin(), total_n_of(sector))
    }

    pub fn lattice(&self) -> &Lattice {
        &self.lattice
    }

    pub fn spin(&self) -> SpinValue {
        self.spin
    }

    pub fn cutoff(&self) -> u32 {
        self.cutoff
    }

    pub fn total_n(&self) -> Option<u64> {
        self.total_n
    }

    pub fn is_hard_core(&self) -> bool {
        self.cutoff == self.spin.twice()
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &ConfigBasis {
        &self.basis
    }

    pub fn occupations(&self, index: usize) -> Vec<u64> {
        self.basis.digits(index)
    }

    pub fn index_of(&self, occupations: &[u64]) -> Option<usize> {
        if occupations.iter().any(|&n| n > self.cutoff as u64) {
            return None;
        }
        self.basis.index_of(self.basis.encode(occupations))
    }
}

pub fn total_n_of(sector: &SpinSector) -> Option<u64> {
    let n = sector.lattice().num_sites() as i64;
    sector
        .total_sz2()
        .map(|m2| ((m2 + sector.spin().twice() as i64 * n) / 2) as u64)
}

/// Position in `fock` of every spin basis state, via `n_x = m_x + S`.
pub fn hp_correspondence(sector: &SpinSector, fock: &FockBasis) -> Result<Vec<usize>> {
    if sector.lattice() != fock.lattice() || sector.spin() != fock.spin() {
        return Err(Error::InvalidSector("spin sector and Fock basis live on different systems".into()));
    }
    if !fock.is_hard_core() {
        return Err(Error::InvalidSector("the spin correspondence needs the hard-core space".into()));
    }
    if total_n_of(sector) != fock.total_n() {
        return Err(Error::InvalidSector(format!(
            "sector has N_tot = {:?}, Fock block has {:?}",
            total_n_of(sector),
            fock.total_n()
        )));
    }
    if sector.dim() != fock.dim() {
        return Err(Error::InvalidSector("dimension mismatch".into()));
    }
    (0..sector.dim())
        .map(|i| {
            fock.index_of(&sector.digits(i))
                .ok_or_else(|| Error::InvalidSector("spin state without Fock image".into()))
        })
        .collect()
}

/// `a†_x a_y |code⟩ = amp |target⟩` on the capped space, with the
/// pre-hop occupancies.
#[inline]
fn hop(basis: &ConfigBasis, cutoff: u64, code: u64, x: usize, y: usize) -> Option<(u64, f64, u64, u64)> {
    let nx = basis.digit(code, x);
    let ny = basis.digit(code, y);
    if ny == 0 || nx + 1 > cutoff {
        return None;
    }
    let amp = (((nx + 1) * ny) as f64).sqrt();
    Some((code + basis.power(x) - basis.power(y), amp, nx, ny))
}

/// `H_0 = S Σ_⟨x,y⟩ (n_x + n_y − a†_x a_y − a†_y a_x)`.
pub fn build_h0(fock: &FockBasis) -> SparseOperator {
    let basis = &fock.basis;
    let cutoff = fock.cutoff as u64;
    let s = fock.spin.value();
    let bonds = fock.lattice.bonds();
    SparseOperator::par_from_fn(basis.len(), |i| {
        let code = basis.code(i);
        let mut diag = 0.0;
        let mut entries = Vec::with_capacity(2 * bonds.len() + 1);
        for &(x, y) in bonds {
            diag += s * (basis.digit(code, x) + basis.digit(code, y)) as f64;
            for (to, from) in [(x, y), (y, x)] {
                if let Some((target, amp, _, _)) = hop(basis, cutoff, code, to, from) {
                    let j = basis.index_of(target).expect("hopping conserves particle number");
                    entries.push((j, -s * amp));
                }
            }
        }
        entries.push((i, diag));
        entries
    })
}

fn require_hard_core(fock: &FockBasis) -> Result<()> {
    if fock.is_hard_core() {
        Ok(())
    } else {
        Err(Error::InvalidSector(
            "K involves sqrt(1 - n/2S) and is defined only on the hard-core space".into(),
        ))
    }
}

/// `2S a†_to [1 − √(1−n̂_to/2S) √(1−n̂_from/2S)] a_from` with the square
/// roots evaluated between the two ladder operators.
fn k_hopping_amplitude(two_s: f64, amp: f64, n_to: u64, n_from: u64) -> f64 {
    let bracket = 1.0 - (1.0 - n_to as f64 / two_s).sqrt() * (1.0 - (n_from - 1) as f64 / two_s).sqrt();
    two_s * bracket * amp
}

fn build_k_with(fock: &FockBasis, symmetric: bool) -> Result<SparseOperator> {
    require_hard_core(fock)?;
    let basis = &fock.basis;
    let cutoff = fock.cutoff as u64;
    let two_s = fock.spin.twice() as f64;
    let bonds = fock.lattice.bonds();
    Ok(SparseOperator::par_from_fn(basis.len(), |i| {
        let code = basis.code(i);
        let mut diag = 0.0;
        let mut entries = Vec::new();
        for &(x, y) in bonds {
            // −a†_x a†_y a_x a_y = −n_x n_y for x ≠ y
            diag -= (basis.digit(code, x) * basis.digit(code, y)) as f64;
            let orientations: &[(usize, usize)] = if symmetric { &[(x, y), (y, x)] } else { &[(x, y)] };
            let weight = if symmetric { 0.5 } else { 1.0 };
            for &(to, from) in orientations {
                if let Some((target, amp, n_to, n_from)) = hop(basis, cutoff, code, to, from) {
                    let value = weight * k_hopping_amplitude(two_s, amp, n_to, n_from);
                    let j = basis.index_of(target).expect("hopping conserves particle number");
                    entries.push((j, value));
                }
            }
        }
        entries.push((i, diag));
        entries
    })
    // row i collected ⟨j|K|i⟩
    .transpose())
}

/// The interaction `K`, Hermitian over bond orientations.
pub fn build_k(fock: &FockBasis) -> Result<SparseOperator> {
    build_k_with(fock, true)
}

/// The interaction with each bond summand transcribed in one orientation
/// only (`a†_x … a_y` for the stored bond `x < y`, coefficient `2S`).
/// It is not Hermitian; its Hermitian part is [`build_k`].
pub fn build_k_literal(fock: &FockBasis) -> Result<SparseOperator> {
    build_k_with(fock, false)
}

#[derive(Debug, Clone)]
pub struct BosonicHamiltonian {
    pub h0: SparseOperator,
    pub k_int: SparseOperator,
    pub hb: SparseOperator,
}

impl BosonicHamiltonian {
    pub fn build(fock: &FockBasis) -> Result<Self> {
        let h0 = build_h0(fock);
        let k_int = build_k(fock)?;
        let hb = h0.add(&k_int);
        Ok(BosonicHamiltonian { h0, k_int, hb })
    }
}

/// Total particle number as a diagonal operator.
pub fn build_number(fock: &FockBasis) -> SparseOperator {
    SparseOperator::par_from_fn(fock.dim(), |i| {
        vec![(i, fock.occupations(i).iter().sum::<u64>() as f64)]
    })
}

/// Largest deviation between the sorted spectra of the spin Hamiltonian on
/// `sector` and of `H_0 + K` on the matching Fock block.
pub fn verify_equivalence(sector: &SpinSector, fock: &FockBasis) -> Result<f64> {
    hp_correspondence(sector, fock)?;
    let spin_ev = symmetric_eigenvalues(build_hamiltonian(sector).to_dense());
    let boson_ev = symmetric_eigenvalues(BosonicHamiltonian::build(fock)?.hb.to_dense());
    let deviation = spin_ev
        .iter()
        .zip(&boson_ev)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    if deviation > EQUIVALENCE_TOLERANCE {
        return Err(Error::EquivalenceViolated {
            total_n: fock.total_n().unwrap_or(u64::MAX),
            deviation,
        });
    }
    Ok(deviation)
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct BlockDeviation {
    pub total_n: u64,
    pub dim: usize,
    pub deviation: f64,
}

/// [`verify_equivalence`] on every particle-number block.
pub fn verify_equivalence_all(lattice: &Lattice, spin: SpinValue) -> Result<Vec<BlockDeviation>> {
    let n = lattice.num_sites() as i64;
    let max = spin.twice() as i64 * n;
    (0..=max as u64)
        .into_par_iter()
        .map(|total_n| {
            let sector = build_sector(lattice, spin, Some(2 * total_n as i64 - max))?;
            let fock = FockBasis::matching(&sector)?;
            let deviation = verify_equivalence(&sector, &fock)?;
            Ok(BlockDeviation {
                total_n,
                dim: fock.dim(),
                deviation,
            })
        })
        .collect()
}

/// `min_c [Σ_x n_x(n_x − 1) − (1 − P)]` where `P` projects on `n_x ≤ 2S`.
/// Both sides are diagonal in the occupation basis.
pub fn projection_inequality_check(fock: &FockBasis) -> f64 {
    let two_s = fock.spin.twice() as u64;
    (0..fock.dim())
        .map(|i| {
            let occ = fock.occupations(i);
            let rhs: u64 = occ.iter().map(|&n| n * n.saturating_sub(1)).sum();
            let outside = if occ.iter().any(|&n| n > two_s) { 1 } else { 0 };
            rhs as f64 - outside as f64
        })
        .fold(f64::INFINITY, f64::min)
}

/// `½ Σ_⟨x,y⟩ (4 n_x n_y + n_x(n_x − 1) + n_y(n_y − 1))` as a diagonal.
pub fn interaction_majorant(fock: &FockBasis) -> SparseOperator {
    let bonds = fock.lattice.bonds();
    SparseOperator::par_from_fn(fock.dim(), |i| {
        let n = fock.occupations(i);
        let value: u64 = bonds
            .iter()
            .map(|&(x, y)| 4 * n[x] * n[y] + n[x] * n[x].saturating_sub(1) + n[y] * n[y].saturating_sub(1))
            .sum();
        vec![(i, 0.5 * value as f64)]
    })
}

/// Smallest eigenvalue of `majorant − K` on a hard-core block.
pub fn interaction_bound_check(fock: &FockBasis) -> Result<f64> {
    let k = build_k(fock)?;
    let diff = interaction_majorant(fock).sub(&k);
    Ok(symmetric_eigenvalues(diff.to_dense())
        .first()
        .copied()
        .unwrap_or(f64::INFINITY))
}

/// `ρ(x, y) = ⟨Ψ| a†_x a†_y a_x a_y |Ψ⟩`, diagonal in occupations:
/// `n_x n_y` off the diagonal and `n_x(n_x − 1)` on it.
pub fn two_particle_density(psi: &[f64], fock: &FockBasis) -> DMatrix<f64> {
    assert_eq!(psi.len(), fock.dim());
    let n_sites = fock.lattice.num_sites();
    let mut rho = DMatrix::zeros(n_sites, n_sites);
    for (i, amp) in psi.iter().enumerate() {
        let p = amp * amp;
        if p == 0.0 {
            continue;
        }
        let occ = fock.occupations(i);
        for x in 0..n_sites {
            if occ[x] == 0 {
                continue;
            }
            for y in 0..n_sites {
                let ny = if x == y { occ[y].saturating_sub(1) } else { occ[y] };
                rho[(x, y)] += p * (occ[x] * ny) as f64;
            }
        }
    }
    rho
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct Prop2Row {
    pub energy: f64,
    pub rho_inf: f64,
    pub rho_1: f64,
    /// `‖ρ‖_∞ S³ / (E³ ‖ρ‖_1)`
    pub ratio: f64,
}

/// Survey of `‖ρ‖_∞ ≤ C S^{-3} E³ ‖ρ‖_1` over the eigenstates of `H_B` in one
/// particle-number block with energy in `(lo, hi]`, `lo ≥ 0`. States with
/// `ρ ≡ 0` are skipped.
pub fn proposition2_survey(
    lattice: &Lattice,
    spin: SpinValue,
    total_n: u64,
    energy_window: (f64, f64),
) -> Result<Vec<Prop2Row>> {
    let fock = FockBasis::hard_core(lattice, spin, Some(total_n))?;
    if fock.dim() == 0 {
        return Ok(Vec::new());
    }
    let hb = BosonicHamiltonian::build(&fock)?.hb;
    let (energies, vectors) = symmetric_eigen(hb.to_dense());
    let s3 = spin.value().powi(3);
    let lo = energy_window.0.max(0.0);
    let mut rows = Vec::new();
    for (c, &energy) in energies.iter().enumerate() {
        if energy <= lo + 1e-10 || energy > energy_window.1 {
            continue;
        }
        let psi: Vec<f64> = vectors.column(c).iter().copied().collect();
        let rho = two_particle_density(&psi, &fock);
        let rho_1: f64 = rho.iter().map(|v| v.abs()).sum();
        if rho_1 <= 1e-14 {
            continue;
        }
        let rho_inf = rho.amax();
        rows.push(Prop2Row {
            energy,
            rho_inf,
            rho_1,
            ratio: rho_inf * s3 / (energy.powi(3) * rho_1),
        });
    }
    Ok(rows)
}
