//! Operator inequalities on boson spaces and the two-particle density survey.

use heisenberg_lab::holstein_primakoff::{
    interaction_bound_check, projection_inequality_check, proposition2_survey, FockBasis,
};
use heisenberg_lab::lattice::{Boundary, Lattice};
use heisenberg_lab::spin_hilbert::SpinValue;

fn main() -> heisenberg_lab::error::Result<()> {
    let square = Lattice::new(2, 2, Boundary::Free)?;
    for spin in [SpinValue::HALF, SpinValue::ONE] {
        let free = FockBasis::uncapped(&square, spin, 4, None)?;
        println!("{spin}: min of sum n(n-1) - (1 - P) over {} states = {}", free.dim(), projection_inequality_check(&free));
        for total_n in 0..=4 {
            let fock = FockBasis::hard_core(&square, spin, Some(total_n))?;
            println!("  N = {total_n}: min eig(majorant - K) = {:+.3e}", interaction_bound_check(&fock)?);
        }
    }

    let ring = Lattice::new(1, 6, Boundary::Periodic)?;
    let rows = proposition2_survey(&ring, SpinValue::HALF, 2, (0.0, 2.0))?;
    println!("\nlow two-particle states of the 6-ring, S = 1/2");
    println!("{:>10} {:>10} {:>10} {:>10}", "E", "rho_inf", "rho_1", "ratio");
    for r in rows {
        println!("{:>10.4} {:>10.4} {:>10.4} {:>10.4}", r.energy, r.rho_inf, r.rho_1, r.ratio);
    }
    Ok(())
}
