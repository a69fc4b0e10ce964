//! Ground energy zero with degeneracy 2SN + 1 on a range of small lattices.

use heisenberg_lab::exact_diag::diagonalize_sectors;
use heisenberg_lab::lattice::{Boundary, Lattice};
use heisenberg_lab::spin_hilbert::SpinValue;

fn main() -> heisenberg_lab::error::Result<()> {
    let cases = [
        (1, 6, Boundary::Free, 1),
        (1, 5, Boundary::Periodic, 2),
        (2, 3, Boundary::Periodic, 1),
        (2, 2, Boundary::Free, 3),
        (3, 2, Boundary::Free, 1),
    ];
    println!("{:<24} {:>6} {:>12} {:>6} {:>8}", "lattice", "2S", "E0", "deg", "2SN+1");
    for (dim, side, bc, two_s) in cases {
        let lattice = Lattice::new(dim, side, bc)?;
        let spin = SpinValue::from_twice(two_s)?;
        let diag = diagonalize_sectors(&lattice, spin, false)?;
        let expected = two_s as usize * lattice.num_sites() + 1;
        println!(
            "{:<24} {:>6} {:>12.1e} {:>6} {:>8}",
            lattice.spec().to_string(),
            two_s,
            diag.ground_energy(),
            diag.ground_degeneracy(1e-9),
            expected
        );
    }
    Ok(())
}
