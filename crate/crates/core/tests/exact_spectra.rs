mod common;

use common::{heisenberg, jacobi_eigenvalues, max_diff, spin_dot, total_spin_squared};
use heisenberg_lab::exact_diag::{diagonalize_sectors, full_spectrum, thermal_two_point};
use heisenberg_lab::lattice::{Boundary, Lattice};
use heisenberg_lab::linalg::group_sorted;
use heisenberg_lab::sparse::SparseOperator;
use heisenberg_lab::spin_hilbert::{build_hamiltonian, build_sector, build_total_spin_squared, SpinValue};

fn lattices() -> Vec<(Lattice, u32)> {
    vec![
        (Lattice::new(1, 2, Boundary::Free).unwrap(), 1),
        (Lattice::new(1, 2, Boundary::Free).unwrap(), 3),
        (Lattice::new(1, 3, Boundary::Periodic).unwrap(), 2),
        (Lattice::new(1, 5, Boundary::Free).unwrap(), 1),
        (Lattice::new(2, 2, Boundary::Free).unwrap(), 1),
        (Lattice::new(2, 2, Boundary::Free).unwrap(), 2),
        (Lattice::new(1, 4, Boundary::Periodic).unwrap(), 2),
    ]
}

#[test]
fn sector_spectra_match_tensor_product_oracle() {
    for (lattice, two_s) in lattices() {
        let spin = SpinValue::from_twice(two_s).unwrap();
        let ours = diagonalize_sectors(&lattice, spin, false).unwrap().all_eigenvalues();
        let oracle = jacobi_eigenvalues(heisenberg(two_s, lattice.num_sites(), lattice.bonds()));
        assert!(max_diff(&ours, &oracle) < 1e-10, "{} 2S={two_s}", lattice.spec());
    }
}

#[test]
fn cube_spectrum() {
    let cube = Lattice::new(3, 2, Boundary::Free).unwrap();
    let diag = diagonalize_sectors(&cube, SpinValue::HALF, false).unwrap();
    let ours = diag.all_eigenvalues();
    assert_eq!(ours.len(), 256);
    assert!(ours[0].abs() < 1e-12);
    assert_eq!(diag.ground_degeneracy(1e-9), 9);
    let oracle = jacobi_eigenvalues(heisenberg(1, 8, cube.bonds()));
    assert!(max_diff(&ours, &oracle) < 1e-10);
}

#[test]
fn total_spin_eigenvalues() {
    let ring = Lattice::new(1, 4, Boundary::Periodic).unwrap();
    let sector = build_sector(&ring, SpinValue::ONE, None).unwrap();
    let s2 = full_spectrum(&build_total_spin_squared(&sector), false).unwrap().eigenvalues;
    let oracle = jacobi_eigenvalues(total_spin_squared(2, 4));
    assert!(max_diff(&s2, &oracle) < 1e-10);
    // every eigenvalue is S_T(S_T + 1) with 2S_T integer in [0, 8]
    for range in group_sorted(&s2, 1e-8) {
        let lambda = s2[range.start];
        let twice = (4.0 * lambda + 1.0).sqrt() - 1.0;
        assert!((twice - twice.round()).abs() < 1e-9 && twice.round() <= 8.0);
    }
}

#[test]
fn two_point_function_matches_oracle() {
    // Gibbs average of S_0·S_2 on the 4-ring, S = 1/2, computed from the
    // oracle's eigen-decomposition of H + ε S_0·S_2 by finite differences
    let ring = Lattice::new(1, 4, Boundary::Periodic).unwrap();
    let diag = diagonalize_sectors(&ring, SpinValue::HALF, true).unwrap();
    let beta = 0.7;
    let h = heisenberg(1, 4, ring.bonds());
    let obs = spin_dot(1, 4, 0, 2);
    let log_z = |eps: f64| {
        let mut m = h.clone();
        common::axpy(eps, &obs, &mut m);
        let ev = jacobi_eigenvalues(m);
        ev.iter().map(|e| (-beta * e).exp()).sum::<f64>().ln()
    };
    let eps = 1e-4;
    let derivative = -(log_z(eps) - log_z(-eps)) / (2.0 * eps * beta);
    let ours = thermal_two_point(&diag, beta, 0, 2).unwrap();
    assert!((ours - derivative).abs() < 1e-7, "{ours} vs {derivative}");
}

#[test]
fn triplet_export_round_trip() {
    let lattice = Lattice::new(2, 2, Boundary::Free).unwrap();
    let sector = build_sector(&lattice, SpinValue::ONE, Some(0)).unwrap();
    let h = build_hamiltonian(&sector);
    let mut buf = Vec::new();
    h.write_triplets(&mut buf).unwrap();
    let text = String::from_utf8(buf.clone()).unwrap();
    let header: Vec<usize> = text.lines().next().unwrap().split(' ').map(|t| t.parse().unwrap()).collect();
    assert_eq!(header, vec![h.dim(), h.nnz()]);
    let back = SparseOperator::read_triplets(&buf[..]).unwrap();
    assert_eq!(back.sub(&h).max_abs(), 0.0);
    // independent assembly of a dense matrix from the text alone
    let mut dense = common::zeros(h.dim());
    for line in text.lines().skip(1) {
        let parts: Vec<&str> = line.split_whitespace().collect();
        dense[parts[0].parse::<usize>().unwrap()][parts[1].parse::<usize>().unwrap()] = parts[2].parse().unwrap();
    }
    let ev = jacobi_eigenvalues(dense);
    let ours = full_spectrum(&h, false).unwrap().eigenvalues;
    assert!(max_diff(&ev, &ours) < 1e-10);
}
