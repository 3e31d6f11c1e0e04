//! Type 1/2/3 mass minimization for round boundary data.

use bartnik::bartnik_search::{minimize_chain, om_vs_horizon_experiment, schwarzschild_extension, BoundaryType, ExtensionFamily};
use bartnik::horizon_analysis::ConditionN;
use bartnik::radial_geometry::BoundaryData;

fn main() -> bartnik::Result<()> {
    let bd = BoundaryData::new(4.0 * std::f64::consts::PI, 1.0)?;
    let (_, m_ref) = schwarzschild_extension(&bd)?;
    println!("Schwarzschild reference mass {m_ref}");
    let fam = ExtensionFamily::new(bd, BoundaryType::Type3);
    for r in minimize_chain(&fam, ConditionN::OutwardMinimizing, 2000, 7)? {
        println!(
            "type {}: estimate {:.9} (ADM fit {:?}), {} evaluations",
            r.boundary_type.index(),
            r.mass_estimate,
            r.adm_fit,
            r.evaluations
        );
    }
    let rep = om_vs_horizon_experiment(&fam, 500, 7, 1e-3)?;
    println!(
        "outward-minimizing {:.9} vs no surrounding horizons {:.9}, pass {}",
        rep.m_outward_minimizing, rep.m_no_horizons, rep.pass
    );
    Ok(())
}
