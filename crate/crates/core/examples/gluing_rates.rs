//! C0 distance of the glued metric to the outer metric as the gluing scale grows.

use bartnik::radial_geometry::{flat_exterior, CoordMetric, SchwarzschildSlice};
use bartnik::smoothing_pipeline::{collar_glue, GlueConfig};

fn main() -> bartnik::Result<()> {
    let g = CoordMetric::from_profile(&SchwarzschildSlice { mass: 0.1 }.exterior(1.0, 4.0, 6000)?);
    let gt = CoordMetric::from_profile(&flat_exterior(1.0, 5.0, 4000)?);
    for lambda in [10.0, 20.0, 40.0, 80.0] {
        let out = collar_glue(&g, &gt, &GlueConfig::new(lambda, 1.0))?;
        println!(
            "lambda = {lambda:>4}: C0 gap {:.4e}, lambda * gap {:.4}, exact ends {}",
            out.c0_from_g,
            lambda * out.c0_from_g,
            out.exact_near && out.exact_far
        );
    }
    Ok(())
}
