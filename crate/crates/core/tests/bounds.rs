use heisenberg_lab::bounds_lab::{corollary_chain_check, gap_scaling, proposition1_table, trial_state_upper_bound};
use heisenberg_lab::lattice::{Boundary, Lattice};
use heisenberg_lab::spin_hilbert::SpinValue;

#[test]
fn cube_sector_minima() {
    let cube = Lattice::new(3, 2, Boundary::Free).unwrap();
    let table = proposition1_table(&cube, SpinValue::HALF).unwrap();
    // lowest energies per S_T = 4..0, from an independent dense build of
    // H and S_T² on the 256-dimensional space
    let expected = [0.0, 1.0, 1.3819660112501015, 1.829913513373961, 1.7205476842313923];
    for (row, e) in table.rows.iter().zip(expected) {
        assert!((row.e_min - e).abs() < 1e-10, "S_T = {}", row.s_t);
    }
    assert!(table.empirical_c > 0.0);
    assert!(table.max_cross_check < 1e-9);
    // the singlet minimum lies below the S_T = 1 minimum on this cluster
    assert!(!table.monotone);
}

#[test]
fn ring_sector_minima_are_ordered() {
    let ring = Lattice::new(1, 4, Boundary::Periodic).unwrap();
    for spin in [SpinValue::HALF, SpinValue::ONE] {
        let table = proposition1_table(&ring, spin).unwrap();
        assert!(table.monotone, "{spin}");
        assert!(table.rows.iter().skip(1).all(|r| r.e_min > 1e-10));
    }
}

#[test]
fn gap_approaches_pi_squared() {
    let rows = gap_scaling(1, SpinValue::HALF, &[2, 10, 40]).unwrap();
    assert!((rows[0].gap - 1.0).abs() < 1e-9);
    for r in &rows {
        assert!((r.gap - r.neumann).abs() < 1e-8);
    }
    let pi2 = std::f64::consts::PI.powi(2);
    assert!((rows[1].scaled / pi2 - 1.0).abs() < 0.1);
    assert!((rows[2].scaled - pi2).abs() < (rows[1].scaled - pi2).abs());
    // past 64 sites the site-space block takes over
    let big = gap_scaling(3, SpinValue::ONE, &[5]).unwrap();
    assert!((big[0].gap - big[0].neumann).abs() < 1e-8);
}

#[test]
fn trial_bound_on_small_rings() {
    for side in [3, 4] {
        let ring = Lattice::new(1, side, Boundary::Periodic).unwrap();
        for beta in [0.2, 1.0, 3.0] {
            let r = trial_state_upper_bound(&ring, SpinValue::HALF, beta, None).unwrap();
            assert!(r.slack >= -1e-12);
        }
    }
    // a spin-1 chain needs occupancies up to 2 per site in the trial state
    let chain = Lattice::new(1, 3, Boundary::Free).unwrap();
    let r = trial_state_upper_bound(&chain, SpinValue::ONE, 1.0, None).unwrap();
    assert!(r.variational_holds);
}

#[test]
fn two_point_chain_on_a_square() {
    let square = Lattice::new(2, 2, Boundary::Free).unwrap();
    let report = corollary_chain_check(&square, SpinValue::ONE, &[0.0, 0.3, 1.0, 3.0, f64::INFINITY]).unwrap();
    assert!(report.min_lhs >= -1e-10);
    assert!(report.sum_rule_deviation < 1e-10);
    assert!(report.cold_lhs < 1e-10);
    assert!(report.monotone);
    assert!(report.energy_derivative_deviation < 1e-6);
    // β = 0: S² − ⟨S_x·S_y⟩ = S² for every pair
    assert!(report.rows.iter().filter(|r| r.beta == 0.0).all(|r| (r.lhs - 1.0).abs() < 1e-12));
}
