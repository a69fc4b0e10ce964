//! Spin-S product bases, fixed-magnetization sectors and the sparse
//! matrices of the Heisenberg Hamiltonian and of the total spin squared.
//!
//! A basis state is a string of per-site digits `d_x = m_x + S ∈ {0, …, 2S}`
//! encoded in base `2S + 1`, site 0 most significant. Magnetizations are
//! carried as twice their value so half-integer spins stay exact.

use std::fmt;
use std::str::FromStr;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::basis::ConfigBasis;
use crate::error::{Error, Result};
use crate::lattice::Lattice;
use crate::linalg::{group_sorted, symmetric_eigen};
use crate::sparse::SparseOperator;

/// Spin quantum number stored as `2S`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SpinValue {
    two_s: u32,
}

impl SpinValue {
    pub fn from_twice(two_s: u32) -> Result<Self> {
        if two_s == 0 {
            return Err(Error::InvalidSpin("2S must be a positive integer".into()));
        }
        Ok(SpinValue { two_s })
    }

    pub const HALF: SpinValue = SpinValue { two_s: 1 };
    pub const ONE: SpinValue = SpinValue { two_s: 2 };

    pub fn twice(self) -> u32 {
        self.two_s
    }

    pub fn value(self) -> f64 {
        self.two_s as f64 / 2.0
    }

    /// Local dimension `2S + 1`.
    pub fn local_dim(self) -> u64 {
        self.two_s as u64 + 1
    }

    /// `S(S + 1)`.
    pub fn casimir(self) -> f64 {
        let s = self.value();
        s * (s + 1.0)
    }
}

impl fmt::Display for SpinValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "2S={}", self.two_s)
    }
}

impl FromStr for SpinValue {
    type Err = Error;

    /// Accepts `2S=k` or `S=1/2`, `S=1`, ...
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::Config(format!("cannot parse spin `{s}`; expected 2S=k"));
        if let Some(rest) = s.strip_prefix("2S=") {
            let k: u32 = rest.trim().parse().map_err(|_| bad())?;
            return SpinValue::from_twice(k).map_err(|e| Error::Config(e.to_string()));
        }
        if let Some(rest) = s.strip_prefix("S=") {
            let twice = match rest.split_once('/') {
                Some((num, "2")) => num.trim().parse::<u32>().map_err(|_| bad())?,
                Some(_) => return Err(bad()),
                None => 2 * rest.trim().parse::<u32>().map_err(|_| bad())?,
            };
            return SpinValue::from_twice(twice).map_err(|e| Error::Config(e.to_string()));
        }
        Err(bad())
    }
}

/// A basis of the spin Hilbert space on a lattice, optionally restricted to
/// a fixed total `S³_T` (given as `2 S³_T`).
#[derive(Debug, Clone)]
pub struct SpinSector {
    lattice: Lattice,
    spin: SpinValue,
    total_sz2: Option<i64>,
    basis: ConfigBasis,
}

pub fn build_sector(lattice: &Lattice, spin: SpinValue, total_sz2: Option<i64>) -> Result<SpinSector> {
    let n = lattice.num_sites() as i64;
    let two_s = spin.twice() as i64;
    let digit_sum = match total_sz2 {
        None => None,
        Some(m2) => {
            if m2.abs() > two_s * n {
                return Err(Error::InvalidSector(format!(
                    "2S3_T = {m2} outside [-{}, {}]",
                    two_s * n,
                    two_s * n
                )));
            }
            if (m2 + two_s * n) % 2 != 0 {
                return Err(Error::InvalidSector(format!(
                    "2S3_T = {m2} has the wrong parity for {n} sites of spin {}",
                    spin.value()
                )));
            }
            // Σ d_x = Σ m_x + N S
            Some(((m2 + two_s * n) / 2) as u64)
        }
    };
    let basis = ConfigBasis::new(spin.local_dim(), lattice.num_sites(), digit_sum)?;
    Ok(SpinSector {
        lattice: lattice.clone(),
        spin,
        total_sz2,
        basis,
    })
}

/// All admissible values of `2 S³_T`, from fully polarized down.
pub fn sector_labels(lattice: &Lattice, spin: SpinValue) -> Vec<i64> {
    let max = spin.twice() as i64 * lattice.num_sites() as i64;
    (0..=max).map(|k| max - 2 * k).collect()
}

impl SpinSector {
    /// The sector `S³_T = S N − 1` spanned by single lowered spins.
    pub fn one_magnon(lattice: &Lattice, spin: SpinValue) -> Result<Self> {
        let top = spin.twice() as i64 * lattice.num_sites() as i64;
        build_sector(lattice, spin, Some(top - 2))
    }

    pub fn lattice(&self) -> &Lattice {
        &self.lattice
    }

    pub fn spin(&self) -> SpinValue {
        self.spin
    }

    pub fn total_sz2(&self) -> Option<i64> {
        self.total_sz2
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &ConfigBasis {
        &self.basis
    }

    /// `(d_x)` digits of basis state `index`; `m_x = d_x − S`.
    pub fn digits(&self, index: usize) -> Vec<u64> {
        self.basis.digits(index)
    }

    /// `2 m_x` for every site of basis state `index`.
    pub fn magnetizations2(&self, index: usize) -> Vec<i64> {
        let two_s = self.spin.twice() as i64;
        self.digits(index)
            .into_iter()
            .map(|d| 2 * d as i64 - two_s)
            .collect()
    }

    pub fn index_of_digits(&self, digits: &[u64]) -> Option<usize> {
        self.basis.index_of(self.basis.encode(digits))
    }

    /// Index of the state with every spin at `m = +S`, if in this sector.
    pub fn polarized_index(&self) -> Option<usize> {
        let top = vec![self.spin.twice() as u64; self.lattice.num_sites()];
        self.index_of_digits(&top)
    }
}

/// `constant · 1 + weight · Σ_pairs S_x·S_y` on the sector basis.
fn spin_dot_sum(sector: &SpinSector, pairs: &[(usize, usize)], weight: f64, constant: f64) -> SparseOperator {
    let basis = &sector.basis;
    let two_s = sector.spin.twice() as u64;
    let s = sector.spin.value();
    SparseOperator::par_from_fn(basis.len(), |i| {
        let code = basis.code(i);
        let mut diag = constant;
        let mut entries = Vec::with_capacity(2 * pairs.len() + 1);
        for &(x, y) in pairs {
            let dx = basis.digit(code, x);
            let dy = basis.digit(code, y);
            let mx = dx as f64 - s;
            let my = dy as f64 - s;
            diag += weight * mx * my;
            // ½ S⁺_x S⁻_y
            if dx < two_s && dy > 0 {
                let amp = (((two_s - dx) * (dx + 1)) as f64).sqrt()
                    * ((dy * (two_s - dy + 1)) as f64).sqrt();
                let target = code + basis.power(x) - basis.power(y);
                let j = basis.index_of(target).expect("S+S- preserves the sector");
                entries.push((j, 0.5 * weight * amp));
            }
            // ½ S⁻_x S⁺_y
            if dx > 0 && dy < two_s {
                let amp = ((dx * (two_s - dx + 1)) as f64).sqrt()
                    * (((two_s - dy) * (dy + 1)) as f64).sqrt();
                let target = code - basis.power(x) + basis.power(y);
                let j = basis.index_of(target).expect("S-S+ preserves the sector");
                entries.push((j, 0.5 * weight * amp));
            }
        }
        entries.push((i, diag));
        entries
    })
}

/// `H = Σ_⟨x,y⟩ (S² − S_x·S_y)`.
pub fn build_hamiltonian(sector: &SpinSector) -> SparseOperator {
    let bonds = sector.lattice.bonds();
    let s = sector.spin.value();
    spin_dot_sum(sector, bonds, -1.0, s * s * bonds.len() as f64)
}

/// `S_T² = (Σ_x S_x)² = N S(S+1) + 2 Σ_{x<y} S_x·S_y`.
pub fn build_total_spin_squared(sector: &SpinSector) -> SparseOperator {
    let n = sector.lattice.num_sites();
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|x| (x + 1..n).map(move |y| (x, y)))
        .collect();
    spin_dot_sum(sector, &pairs, 2.0, n as f64 * sector.spin.casimir())
}

/// The two-site observable `S_x·S_y` (for `x ≠ y`).
pub fn build_spin_dot(sector: &SpinSector, x: usize, y: usize) -> SparseOperator {
    assert_ne!(x, y, "S_x·S_x is the Casimir, not a two-point function");
    spin_dot_sum(sector, &[(x, y)], 1.0, 0.0)
}

/// Total `S³_T` as a diagonal operator.
pub fn build_total_sz(sector: &SpinSector) -> SparseOperator {
    let s = sector.spin.value();
    let n = sector.lattice.num_sites();
    SparseOperator::par_from_fn(sector.dim(), |i| {
        let sum: u64 = sector.digits(i).iter().sum();
        vec![(i, sum as f64 - s * n as f64)]
    })
}

/// Simultaneous eigenbasis of `H` and `S_T²` for one total-spin value.
#[derive(Debug, Clone)]
pub struct TotalSpinGroup {
    /// `2 S_T`
    pub twice_s_t: u64,
    /// eigenvalue of `S_T²` averaged over the group
    pub casimir: f64,
    /// `H` eigenvalues inside the group, ascending
    pub energies: Vec<f64>,
    /// columns are joint eigenvectors in the sector basis
    pub vectors: DMatrix<f64>,
}

impl TotalSpinGroup {
    pub fn s_t(&self) -> f64 {
        self.twice_s_t as f64 / 2.0
    }

    pub fn dim(&self) -> usize {
        self.energies.len()
    }
}

pub const COMMUTATOR_TOLERANCE: f64 = 1e-10;
pub const GROUPING_TOLERANCE: f64 = 1e-8;
pub const DECOMPOSITION_CAP: usize = 20_000;

/// Split a sector into `S_T` groups by diagonalizing `S_T²`, then `H`
/// inside each eigenspace. Groups are ordered by decreasing `S_T`.
pub fn decompose_by_total_spin(
    sector: &SpinSector,
    hamiltonian: &SparseOperator,
    s_t_squared: &SparseOperator,
) -> Result<Vec<TotalSpinGroup>> {
    if sector.dim() > DECOMPOSITION_CAP {
        return Err(Error::Infeasible {
            dim: sector.dim(),
            cap: DECOMPOSITION_CAP,
        });
    }
    let comm = hamiltonian.commutator_max_entry(s_t_squared);
    if comm > COMMUTATOR_TOLERANCE {
        return Err(Error::NonCommuting(comm));
    }
    let (casimirs, vectors) = symmetric_eigen(s_t_squared.to_dense());
    let mut groups = Vec::new();
    for range in group_sorted(&casimirs, GROUPING_TOLERANCE) {
        let mean = casimirs[range.clone()].iter().sum::<f64>() / range.len() as f64;
        // λ = S_T(S_T+1)  ⇒  2S_T = √(1 + 4λ) − 1
        let twice = ((1.0 + 4.0 * mean).max(0.0).sqrt() - 1.0).round();
        let s_t = twice / 2.0;
        if (s_t * (s_t + 1.0) - mean).abs() > GROUPING_TOLERANCE {
            return Err(Error::Numerical(format!(
                "S_T^2 eigenvalue {mean} is not of the form S_T(S_T+1)"
            )));
        }
        let q = vectors.columns(range.start, range.len()).into_owned();
        let projected = hamiltonian.project(&q);
        let (energies, w) = symmetric_eigen(projected);
        groups.push(TotalSpinGroup {
            twice_s_t: twice as u64,
            casimir: mean,
            energies,
            vectors: q * w,
        });
    }
    groups.reverse();
    Ok(groups)
}

/// Checks `⟨S_x·S_y⟩ = S²` on every bond for every state of the maximal
/// total-spin multiplet present in the sector.
pub fn polarized_two_point_check(sector: &SpinSector) -> Result<bool> {
    let h = build_hamiltonian(sector);
    let s2 = build_total_spin_squared(sector);
    let groups = decompose_by_total_spin(sector, &h, &s2)?;
    let n = sector.lattice.num_sites() as u64;
    let top = sector.spin.twice() as u64 * n;
    let Some(group) = groups.iter().find(|g| g.twice_s_t == top) else {
        return Ok(false);
    };
    let s = sector.spin.value();
    for &(x, y) in sector.lattice.bonds() {
        let op = build_spin_dot(sector, x, y);
        for c in 0..group.dim() {
            let v: Vec<f64> = group.vectors.column(c).iter().copied().collect();
            if (op.expectation(&v) - s * s).abs() > 1e-12 {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::Boundary;
    use crate::linalg::symmetric_eigenvalues;

    fn chain(l: usize) -> Lattice {
        Lattice::new(1, l, Boundary::Free).unwrap()
    }

    fn ring(l: usize) -> Lattice {
        Lattice::new(1, l, Boundary::Periodic).unwrap()
    }

    fn close(a: &[f64], b: &[f64], tol: f64) -> bool {
        a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).abs() <= tol)
    }

    #[test]
    fn spin_parsing() {
        assert_eq!("2S=1".parse::<SpinValue>().unwrap(), SpinValue::HALF);
        assert_eq!("S=1/2".parse::<SpinValue>().unwrap(), SpinValue::HALF);
        assert_eq!("S=1".parse::<SpinValue>().unwrap(), SpinValue::ONE);
        assert!("2S=0".parse::<SpinValue>().is_err());
        assert!("spin".parse::<SpinValue>().is_err());
        assert!("S=1/3".parse::<SpinValue>().is_err());
    }

    #[test]
    fn sector_dimensions() {
        let l = chain(2);
        assert_eq!(build_sector(&l, SpinValue::HALF, Some(0)).unwrap().dim(), 2);
        assert_eq!(build_sector(&l, SpinValue::HALF, None).unwrap().dim(), 4);
        let cube = Lattice::new(3, 2, Boundary::Free).unwrap();
        let top = build_sector(&cube, SpinValue::ONE, Some(16)).unwrap();
        assert_eq!(top.dim(), 1);
        assert_eq!(top.polarized_index(), Some(0));
    }

    #[test]
    fn sector_errors() {
        let l = chain(2);
        assert!(build_sector(&l, SpinValue::HALF, Some(4)).is_err());
        assert!(build_sector(&l, SpinValue::HALF, Some(1)).is_err());
        assert!(build_sector(&l, SpinValue::ONE, Some(-5)).is_err());
    }

    #[test]
    fn two_site_spectra() {
        let sec = build_sector(&chain(2), SpinValue::HALF, None).unwrap();
        let ev = symmetric_eigenvalues(build_hamiltonian(&sec).to_dense());
        assert!(close(&ev, &[0.0, 0.0, 0.0, 1.0], 1e-12));

        let sec = build_sector(&chain(2), SpinValue::ONE, None).unwrap();
        let ev = symmetric_eigenvalues(build_hamiltonian(&sec).to_dense());
        let expected = [0.0, 0.0, 0.0, 0.0, 0.0, 2.0, 2.0, 2.0, 3.0];
        assert!(close(&ev, &expected, 1e-12), "{ev:?}");
    }

    #[test]
    fn one_magnon_ring() {
        let sec = SpinSector::one_magnon(&ring(4), SpinValue::HALF).unwrap();
        let ev = symmetric_eigenvalues(build_hamiltonian(&sec).to_dense());
        assert!(close(&ev, &[0.0, 1.0, 1.0, 2.0], 1e-12));
    }

    #[test]
    fn total_spin_squared_spectra() {
        let sec = build_sector(&chain(2), SpinValue::HALF, None).unwrap();
        let ev = symmetric_eigenvalues(build_total_spin_squared(&sec).to_dense());
        assert!(close(&ev, &[0.0, 2.0, 2.0, 2.0], 1e-12));

        let single = build_sector(&chain(1), SpinValue::ONE, None).unwrap();
        let op = build_total_spin_squared(&single).to_dense();
        assert!((op - DMatrix::identity(3, 3) * 2.0).amax() < 1e-15);
    }

    #[test]
    fn hamiltonian_commutes_with_total_spin() {
        let lat = Lattice::new(2, 2, Boundary::Free).unwrap();
        for spin in [SpinValue::HALF, SpinValue::ONE] {
            let sec = build_sector(&lat, spin, None).unwrap();
            let h = build_hamiltonian(&sec);
            assert!(h.max_asymmetry() < 1e-14);
            assert!(h.commutator_max_entry(&build_total_spin_squared(&sec)) < 1e-12);
            assert!(h.commutator_max_entry(&build_total_sz(&sec)) < 1e-12);
        }
    }

    #[test]
    fn decomposition_groups() {
        let sec = build_sector(&chain(2), SpinValue::HALF, None).unwrap();
        let groups = decompose_by_total_spin(&sec, &build_hamiltonian(&sec), &build_total_spin_squared(&sec)).unwrap();
        let dims: Vec<(u64, usize)> = groups.iter().map(|g| (g.twice_s_t, g.dim())).collect();
        assert_eq!(dims, vec![(2, 3), (0, 1)]);
        assert!(close(&groups[1].energies, &[1.0], 1e-12));

        let sec = build_sector(&ring(4), SpinValue::HALF, None).unwrap();
        let groups = decompose_by_total_spin(&sec, &build_hamiltonian(&sec), &build_total_spin_squared(&sec)).unwrap();
        let dims: Vec<(u64, usize)> = groups.iter().map(|g| (g.twice_s_t, g.dim())).collect();
        assert_eq!(dims, vec![(4, 5), (2, 9), (0, 2)]);
        let polarized = sec.polarized_index().unwrap();
        let top = &groups[0];
        let weight: f64 = (0..top.dim()).map(|c| top.vectors[(polarized, c)].powi(2)).sum();
        assert!((weight - 1.0).abs() < 1e-12);
    }

    #[test]
    fn decomposition_rejects_non_commuting_input() {
        let sec = build_sector(&chain(2), SpinValue::HALF, None).unwrap();
        let h = build_hamiltonian(&sec);
        let bogus = build_spin_dot(&sec, 0, 1).add(&SparseOperator::from_triplets(4, &[(0, 1, 1.0), (1, 0, 1.0)]));
        assert!(matches!(decompose_by_total_spin(&sec, &h, &bogus), Err(Error::NonCommuting(_))));
    }

    #[test]
    fn polarized_multiplet() {
        assert!(polarized_two_point_check(&build_sector(&chain(2), SpinValue::HALF, None).unwrap()).unwrap());
        assert!(polarized_two_point_check(&build_sector(&chain(2), SpinValue::ONE, None).unwrap()).unwrap());
        assert!(polarized_two_point_check(&build_sector(&ring(4), SpinValue::ONE, Some(2)).unwrap()).unwrap());
    }
}
