//! Thermodynamics of a 2x2x2 cube by sector-wise full diagonalization.

use heisenberg_lab::exact_diag::{diagonalize_sectors, thermal_two_point};
use heisenberg_lab::lattice::{Boundary, Lattice};
use heisenberg_lab::spin_hilbert::SpinValue;

fn main() -> heisenberg_lab::error::Result<()> {
    let cube = Lattice::new(3, 2, Boundary::Free)?;
    let diag = diagonalize_sectors(&cube, SpinValue::HALF, true)?;
    println!("dim {}, {} sectors", diag.total_dim(), diag.sectors().len());
    println!("{:>6} {:>12} {:>12} {:>12} {:>12}", "beta", "f", "e", "<S0.S1>", "<S0.S7>");
    for beta in [0.1, 0.5, 1.0, 2.0, 5.0, 10.0] {
        let t = diag.free_energy(beta)?;
        println!(
            "{:>6} {:>12.8} {:>12.8} {:>12.8} {:>12.8}",
            beta,
            t.free_energy_per_site,
            t.energy_per_site,
            thermal_two_point(&diag, beta, 0, 1)?,
            thermal_two_point(&diag, beta, 0, 7)?
        );
    }
    Ok(())
}
