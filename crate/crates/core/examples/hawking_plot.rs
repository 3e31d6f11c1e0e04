//! SVG plot of the Hawking mass along a neck and a Schwarzschild slice.

use bartnik::plot::{emit_plot, Series};
use bartnik::radial_geometry::{hawking_mass_nodes, RadialProfile, SchwarzschildSlice};
use bartnik::verify::neck_profile;

fn trace(p: &RadialProfile, s_max: f64) -> Vec<(f64, f64)> {
    p.s().iter().cloned().zip(hawking_mass_nodes(p)).filter(|(s, _)| *s <= s_max).collect()
}

fn main() -> bartnik::Result<()> {
    let schw = SchwarzschildSlice { mass: 0.5 }.exterior(1.5, 1e3, 800)?;
    let neck = neck_profile(1.0, 0.2)?;
    let path = std::env::temp_dir().join("hawking_mass.svg");
    emit_plot(
        &[Series::new("schwarzschild m=0.5", trace(&schw, 20.0)), Series::new("neck", trace(&neck, 20.0))],
        "s",
        "Hawking mass",
        &path,
    )?;
    println!("wrote {}", path.display());
    Ok(())
}
