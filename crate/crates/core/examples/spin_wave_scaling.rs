//! Spin-wave free energy: finite grids converging to the infinite-volume
//! integral, and the low-temperature law S^{3/2} beta^{5/2} f0 -> C0.

use heisenberg_lab::lattice::{Boundary, Lattice};
use heisenberg_lab::spin_hilbert::SpinValue;
use heisenberg_lab::spin_wave::{c0_closed_form, f0_finite, f0_limit, scaling_check, QuadratureOptions};

fn main() -> heisenberg_lab::error::Result<()> {
    let opts = QuadratureOptions::default();
    let spin = SpinValue::HALF;
    let limit = f0_limit(2.0, spin, &opts)?;
    println!("beta = 2, S = 1/2: f0 = {:.12} (+/- {:.1e})", limit.value, limit.error_bound);
    for side in [8, 16, 32, 64] {
        let torus = Lattice::new(3, side, Boundary::Periodic)?;
        let f = f0_finite(&torus, spin, 2.0)?;
        println!("  L = {side:>2}: {:.12}", f.value);
    }

    println!("\nC0 = {:.10}", c0_closed_form());
    let betas: Vec<f64> = (0..=8).map(|k| 10f64.powf(k as f64 * 0.5)).collect();
    for spin in [SpinValue::HALF, SpinValue::ONE] {
        println!("{spin}");
        for row in scaling_check(spin, &betas, &opts)? {
            println!("  beta = {:>8.1}  rescaled = {:.10}  rel. deviation = {:.2e}", row.beta, row.rescaled, row.deviation);
        }
    }
    Ok(())
}
