//! Gibbs variational upper bound from the hard-core-projected magnon state.

use heisenberg_lab::bounds_lab::trial_state_upper_bound;
use heisenberg_lab::lattice::{Boundary, Lattice};
use heisenberg_lab::spin_hilbert::SpinValue;

fn main() -> heisenberg_lab::error::Result<()> {
    let ring = Lattice::new(1, 6, Boundary::Periodic)?;
    println!("{:>6} {:>14} {:>14} {:>12} {:>14}", "beta", "f_exact", "f_trial", "slack", "f0 (grid)");
    for beta in [0.5, 1.0, 2.0, 5.0, 10.0] {
        let r = trial_state_upper_bound(&ring, SpinValue::HALF, beta, None)?;
        println!(
            "{:>6} {:>14.8} {:>14.8} {:>12.2e} {:>14.8}",
            beta,
            r.f_exact,
            r.f_trial_upper,
            r.slack,
            r.f0_reference.unwrap_or(f64::NAN)
        );
    }
    Ok(())
}
