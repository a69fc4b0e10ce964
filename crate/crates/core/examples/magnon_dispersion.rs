//! One-magnon eigenstates: plane waves on a torus, cosine modes in a box.

use heisenberg_lab::lattice::{Boundary, Lattice};
use heisenberg_lab::spin_hilbert::{SpinSector, SpinValue};
use heisenberg_lab::spin_wave::{inner, neumann_modes, periodic_modes, spin_wave_state};

fn main() -> heisenberg_lab::error::Result<()> {
    let torus = Lattice::new(2, 4, Boundary::Periodic)?;
    let sector = SpinSector::one_magnon(&torus, SpinValue::ONE)?;
    println!("4x4 torus, S = 1");
    for mode in periodic_modes(&sector)?.iter().take(6) {
        println!("  n = {:?}  S eps(k) = {:.6}  residual = {:.1e}", &mode.label[..2], mode.energy, mode.residual);
    }
    let a = spin_wave_state(&sector, [1, 0, 0])?;
    let b = spin_wave_state(&sector, [0, 1, 0])?;
    println!("  <a|a> = {:.15}, |<a|b>| = {:.1e}", inner(&a, &a).re, inner(&a, &b).norm());

    let bx = Lattice::new(3, 3, Boundary::Free)?;
    let sector = SpinSector::one_magnon(&bx, SpinValue::HALF)?;
    println!("\n3x3x3 box, S = 1/2 (free boundary)");
    let mut modes = neumann_modes(&sector)?;
    modes.sort_by(|x, y| x.energy.total_cmp(&y.energy));
    for mode in modes.iter().take(5) {
        println!("  n = {:?}  energy = {:.6}  residual = {:.1e}", mode.quantum_numbers, mode.energy, mode.residual);
    }
    Ok(())
}
