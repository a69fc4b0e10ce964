//! The low-temperature constant C0 from quadrature and from zeta(5/2).

use heisenberg_lab::spin_wave::{c0_constant, zeta_five_halves};

fn main() -> heisenberg_lab::error::Result<()> {
    let c0 = c0_constant(1e-9)?;
    println!("quadrature : {:.16} (+/- {:.1e})", c0.quadrature, c0.quadrature_error);
    println!("zeta series: {:.16} (+/- {:.1e})", c0.closed_form, c0.closed_form_error);
    let (zeta, err) = zeta_five_halves(2_000);
    println!("zeta(5/2)  = {zeta:.16} (+/- {err:.1e})");
    Ok(())
}
