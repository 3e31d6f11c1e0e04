//! Minimal spheres and the horizon conditions on a few model profiles.

use bartnik::horizon_analysis::{all_conditions, find_minimal_spheres};
use bartnik::radial_geometry::SchwarzschildSlice;
use bartnik::verify::{neck_profile, tangent_profile};

fn main() -> bartnik::Result<()> {
    let cases = [
        ("schwarzschild exterior", SchwarzschildSlice { mass: 1.0 }.exterior(3.0, 1e3, 400)?),
        ("through the throat", SchwarzschildSlice { mass: 1.0 }.through_throat(4.0, 1e3, 800)?),
        ("neck", neck_profile(1.0, 0.1)?),
        ("tangential", tangent_profile(1.0, 2.0)?),
    ];
    for (name, p) in cases {
        println!("{name}:");
        for m in find_minimal_spheres(&p) {
            println!("  minimal sphere at s = {:.6}, r = {:.6}, {:?}", m.s, m.radius, m.kind);
        }
        for c in all_conditions(&p, None, 0.1)? {
            println!("  {:<28} {}", c.condition.name(), if c.pass { "yes" } else { "no" });
        }
    }
    Ok(())
}
