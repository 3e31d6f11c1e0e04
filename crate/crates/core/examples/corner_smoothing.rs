//! Smoothing the corner between a flat ball and a Schwarzschild exterior.

use bartnik::smoothing_pipeline::{smooth_corner, SmoothingOptions};
use bartnik::verify::ball_corner;

fn main() -> bartnik::Result<()> {
    let c = ball_corner(0.1)?;
    println!("H- = {:.6}, H+ = {:.6}", c.h_minus, c.h_plus);
    let sm = smooth_corner(&c, SmoothingOptions::new(1e-2, 1.0))?;
    let r = &sm.report;
    println!("input class {:?}, lambda = {}, pre-step b = {:.2e}", r.input_class, r.lambda, r.pre_b);
    println!("min R {:.2e}, C0 change {:.2e}, C2 change outside window {:.2e}", r.min_scalar, r.c0_change, r.c2_change_outside_window);
    println!("mass {:.6} -> {:.6}, inner identical {}, output type 1 {}", r.mass_before, r.mass_after, r.inner_identical, r.output_type1);
    Ok(())
}
