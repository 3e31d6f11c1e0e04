//! Conformal perturbation of a Schwarzschild exterior with mass bookkeeping.

use bartnik::conformal_deform::{perturb_boundary, predicted_step1_mass, step1_harmonic};
use bartnik::radial_geometry::{flat_exterior, SchwarzschildSlice};

fn main() -> bartnik::Result<()> {
    let flat = flat_exterior(1.0, 1e3, 800)?;
    for a in [0.5, 0.9, 0.99] {
        let (_, rep) = step1_harmonic(&flat, a)?;
        println!(
            "flat, a = {a}: mass {:.9}, predicted {:.9}, closed form {:.9}",
            rep.adm_estimate,
            predicted_step1_mass(&flat, a)?,
            2.0 * a * (1.0 - a)
        );
    }
    let p = SchwarzschildSlice { mass: 1.0 }.exterior(3.0, 1e3, 2000)?;
    let out = perturb_boundary(&p, 1e-2, 2)?;
    let c = &out.conclusions;
    println!("a = {}, b = {:.3e}, solves = {}", out.a, out.b, out.solves);
    println!("H {:.6} -> {:.6}, mass {:.6} -> {:.6}", c.h_before, c.h_after, c.mass_before, c.mass_after);
    println!("conclusions hold: {:?}", c.passes);
    Ok(())
}
