//! Lowest energy per total spin against the spin deficit, and the
//! one-magnon gap of free-boundary boxes.

use heisenberg_lab::bounds_lab::{gap_scaling, proposition1_table};
use heisenberg_lab::lattice::{Boundary, Lattice};
use heisenberg_lab::spin_hilbert::SpinValue;

fn main() -> heisenberg_lab::error::Result<()> {
    let cube = Lattice::new(3, 2, Boundary::Free)?;
    let table = proposition1_table(&cube, SpinValue::HALF)?;
    println!("2x2x2 cube, S = 1/2");
    println!("{:>5} {:>10} {:>8} {:>10}", "S_T", "E_min", "deficit", "ratio");
    for row in &table.rows {
        let ratio = row.ratio.map_or(String::from("-"), |r| format!("{r:.4}"));
        println!("{:>5} {:>10.6} {:>8} {:>10}", row.s_t, row.e_min, row.deficit, ratio);
    }
    println!("empirical constant {:.3}, monotone {}", table.empirical_c, table.monotone);

    println!("\none-magnon gap, d = 3, S = 1/2 (target pi^2 = {:.4})", std::f64::consts::PI.powi(2));
    for row in gap_scaling(3, SpinValue::HALF, &[2, 4, 6, 10, 16])? {
        println!("  side {:>2}: gap = {:.6}  gap*side^2/S = {:.4}", row.side, row.gap, row.scaled);
    }
    Ok(())
}
