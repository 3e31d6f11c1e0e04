//! Scalar curvature, Hawking mass and the ADM estimate of a Schwarzschild slice.

use bartnik::masses::{adm_flux, adm_mass};
use bartnik::radial_geometry::{hawking_mass, scalar_curvature, SchwarzschildSlice};

fn main() -> bartnik::Result<()> {
    let p = SchwarzschildSlice { mass: 1.0 }.exterior(3.0, 1e4, 3000)?;
    for s in [0.0, 1.0, 10.0, 100.0] {
        println!("s = {s:>6}: R = {:+.2e}, m_H = {:.12}", scalar_curvature(&p, s)?, hawking_mass(&p, s)?);
    }
    let rep = adm_mass(&p)?;
    println!("ADM estimate {:.9} (fit residual {:.1e})", rep.adm_estimate, rep.fit_residual);
    println!("flux at r = 5000: {:.9}", adm_flux(&p, 5e3)?);
    Ok(())
}
