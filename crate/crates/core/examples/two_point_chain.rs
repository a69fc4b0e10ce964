//! S^2 - <S_x.S_y> in the finite-volume Gibbs state against |x-y|^2 e(beta).

use heisenberg_lab::bounds_lab::corollary_chain_check;
use heisenberg_lab::lattice::{Boundary, Lattice};
use heisenberg_lab::spin_hilbert::SpinValue;

fn main() -> heisenberg_lab::error::Result<()> {
    let chain = Lattice::new(1, 6, Boundary::Free)?;
    let betas = [0.0, 0.5, 1.0, 2.0, 5.0, 20.0, f64::INFINITY];
    let report = corollary_chain_check(&chain, SpinValue::HALF, &betas)?;
    println!("{:>6} {:>10} {:>10} {:>10}", "beta", "e", "lhs(0,5)", "ratio");
    for row in report.rows.iter().filter(|r| r.x == 0 && r.y == 5) {
        let ratio = row.ratio.map_or(String::from("-"), |r| format!("{r:.4}"));
        println!("{:>6} {:>10.6} {:>10.6} {:>10}", row.beta, row.energy_per_site, row.lhs, ratio);
    }
    println!(
        "max ratio {:.3}, sum rule deviation {:.1e}, monotone {}, d(beta f)/d beta vs e {:.1e}",
        report.max_ratio, report.sum_rule_deviation, report.monotone, report.energy_derivative_deviation
    );
    Ok(())
}
