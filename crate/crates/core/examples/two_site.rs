//! The two-site ferromagnet: full spectrum and the closed-form free energy.

use heisenberg_lab::exact_diag::diagonalize_sectors;
use heisenberg_lab::lattice::{Boundary, Lattice};
use heisenberg_lab::spin_hilbert::SpinValue;

fn main() -> heisenberg_lab::error::Result<()> {
    let pair = Lattice::new(1, 2, Boundary::Free)?;
    for spin in [SpinValue::HALF, SpinValue::ONE] {
        let diag = diagonalize_sectors(&pair, spin, false)?;
        let levels: Vec<String> = diag.all_eigenvalues().iter().map(|e| format!("{e:.3}")).collect();
        println!("{spin}: {}", levels.join(" "));
    }

    let diag = diagonalize_sectors(&pair, SpinValue::HALF, false)?;
    println!("\n{:>8} {:>20} {:>20}", "beta", "f (numeric)", "-ln(3+e^-b)/(2b)");
    for beta in [0.01, 0.1, 1.0, 10.0, 100.0] {
        let f = diag.free_energy(beta)?.free_energy_per_site;
        let closed = -(3.0 + (-beta).exp()).ln() / (2.0 * beta);
        println!("{beta:>8} {f:>20.15} {closed:>20.15}");
    }
    Ok(())
}
