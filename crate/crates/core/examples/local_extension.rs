//! Collar of positive scalar curvature past the boundary of a flat ball.

use bartnik::local_extension::extend_local;
use bartnik::radial_geometry::flat_ball;

fn main() -> bartnik::Result<()> {
    let inner = flat_ball(1.0, 0.05, 200)?;
    let ext = extend_local(&inner, 0.5)?;
    println!(
        "h0 = {}, kappa0 = {}, t0 = {} after {} halvings",
        ext.params.h0, ext.params.kappa0, ext.params.t0, ext.halvings
    );
    let t = ext.warped.t();
    for i in (1..t.len()).step_by(t.len() / 8) {
        println!(
            "t = {:.4}: rho = {:.6}, R = {:.3e} >= bound {:.3e}",
            t[i],
            ext.warped.rho()[i],
            ext.r_tilde[i],
            ext.lower_bound[i]
        );
    }
    Ok(())
}
