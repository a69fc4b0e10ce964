//! Spin Hamiltonian against its bosonic form H0 + K, block by block.

use heisenberg_lab::holstein_primakoff::{build_k, build_k_literal, verify_equivalence_all, FockBasis};
use heisenberg_lab::lattice::{Boundary, Lattice};
use heisenberg_lab::spin_hilbert::SpinValue;

fn main() -> heisenberg_lab::error::Result<()> {
    let ring = Lattice::new(1, 4, Boundary::Periodic)?;
    for spin in [SpinValue::HALF, SpinValue::ONE] {
        println!("4-ring, {spin}");
        for block in verify_equivalence_all(&ring, spin)? {
            println!("  N = {:>2}  dim = {:>3}  max |dE| = {:.1e}", block.total_n, block.dim, block.deviation);
        }
    }

    // the one-orientation transcription of the hopping term is not Hermitian
    let fock = FockBasis::hard_core(&ring, SpinValue::ONE, Some(3))?;
    let literal = build_k_literal(&fock)?;
    let hermitian_part = literal.add(&literal.transpose()).scale(0.5);
    println!(
        "\nasymmetry of one-sided K: {:.3}, of its Hermitian part - K: {:.1e}",
        literal.max_asymmetry(),
        hermitian_part.sub(&build_k(&fock)?).max_abs()
    );
    Ok(())
}
