mod common;

use approx::assert_relative_eq;
use common::{C0_REFERENCE, SPIN_WAVE_INTEGRAL};
use heisenberg_lab::lattice::{Boundary, Lattice};
use heisenberg_lab::spin_hilbert::{SpinSector, SpinValue};
use heisenberg_lab::spin_wave::{
    c0_closed_form, c0_constant, f0_finite, f0_limit, inner, periodic_modes, spin_wave_integral, spin_wave_state,
    QuadratureOptions,
};

#[test]
fn brillouin_integral_matches_bessel_series() {
    let opts = QuadratureOptions::default();
    for (t, expected) in SPIN_WAVE_INTEGRAL {
        let got = spin_wave_integral(t, &opts).unwrap();
        assert_relative_eq!(got.value, expected, max_relative = 1e-9);
        // the reported bound covers the actual error
        assert!((got.value - expected).abs() <= got.error.max(1e-15), "t = {t}");
    }
}

#[test]
fn finite_ring_free_energy() {
    let ring = Lattice::new(1, 4, Boundary::Periodic).unwrap();
    let f = f0_finite(&ring, SpinValue::HALF, 1.0).unwrap();
    assert_relative_eq!(f.value, -0.2656909371607557, max_relative = 1e-14);
    assert_relative_eq!(f.excluded_zero_mode.unwrap(), -(5f64).ln() / 4.0, max_relative = 1e-14);
}

#[test]
fn finite_grids_converge_to_the_integral() {
    let opts = QuadratureOptions::default();
    let limit = f0_limit(2.0, SpinValue::HALF, &opts).unwrap().value;
    let mut previous = f64::INFINITY;
    for side in [8, 16, 32, 64] {
        let torus = Lattice::new(3, side, Boundary::Periodic).unwrap();
        let gap = (f0_finite(&torus, SpinValue::HALF, 2.0).unwrap().value - limit).abs();
        // the excluded zero mode makes the error decay faster than 1/L²
        assert!(gap < previous / 4.0, "side {side}: {gap} vs {previous}");
        previous = gap;
    }
    assert!(previous < 1e-3 * limit.abs());
}

#[test]
fn c0_regression() {
    assert_relative_eq!(c0_closed_form(), C0_REFERENCE, max_relative = 1e-15);
    let c0 = c0_constant(1e-9).unwrap();
    assert!((c0.quadrature - C0_REFERENCE).abs() < 1e-10);
}

#[test]
fn plane_waves_are_orthonormal_eigenstates() {
    let torus = Lattice::new(2, 3, Boundary::Periodic).unwrap();
    for spin in [SpinValue::HALF, SpinValue::from_twice(3).unwrap()] {
        let sector = SpinSector::one_magnon(&torus, spin).unwrap();
        let modes = periodic_modes(&sector).unwrap();
        let states: Vec<_> = modes.iter().map(|m| spin_wave_state(&sector, m.label).unwrap()).collect();
        for (i, a) in states.iter().enumerate() {
            assert!(modes[i].residual < 1e-12);
            for (j, b) in states.iter().enumerate() {
                let expected = if i == j { 1.0 } else { 0.0 };
                assert!((inner(a, b) - expected).norm() < 1e-12);
            }
        }
    }
}
