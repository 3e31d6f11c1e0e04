//! Rotationally symmetric metrics `ds² + r(s)² dΩ²` and their pointwise
//! curvature, area and mass quantities.

mod coord;
mod corner;
mod profile;
mod warped;

pub use coord::{arclength_jet, CoordMetric};
pub use corner::{corner_classify, CornerClass, CornerManifold, CornerReport, DEFAULT_SMOOTH_TOL};
pub use profile::{
    cylinder, flat, flat_ball, flat_exterior, AfReport, AnalyticTag, RadialProfile, SchwarzschildSlice,
    DEFAULT_DECAY_P,
};
pub use warped::WarpedProfile;

use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::jet::Jet;
use crate::numerics::spline_derivatives;

/// Round Bartnik data of a boundary sphere.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundaryData {
    pub area: f64,
    pub mean_curvature: f64,
}

impl BoundaryData {
    pub fn new(area: f64, mean_curvature: f64) -> Result<Self> {
        if !(area > 0.0) || !(mean_curvature > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "boundary data needs A > 0 and H > 0 (A={area}, H={mean_curvature})"
            )));
        }
        Ok(BoundaryData { area, mean_curvature })
    }

    /// Areal radius `√(A/4π)`.
    pub fn radius(&self) -> f64 {
        (self.area / (4.0 * PI)).sqrt()
    }

    /// Hawking mass of the boundary sphere.
    pub fn hawking_mass(&self) -> f64 {
        let r0 = self.radius();
        let x = 0.5 * self.mean_curvature * r0;
        0.5 * r0 * (1.0 - x * x)
    }
}

/// `K = 1/r²` from a jet of `r`.
pub fn gauss_curvature_of(r: Jet) -> f64 {
    1.0 / (r.v * r.v)
}

/// `H = 2r'/r`.
pub fn mean_curvature_of(r: Jet) -> f64 {
    2.0 * r.d1 / r.v
}

/// `R = 2(1 − r'²)/r² − 4r''/r`.
pub fn scalar_curvature_of(r: Jet) -> f64 {
    2.0 * (1.0 - r.d1 * r.d1) / (r.v * r.v) - 4.0 * r.d2 / r.v
}

/// `m_H = (r/2)(1 − r'²)`.
pub fn hawking_mass_of(r: Jet) -> f64 {
    0.5 * r.v * (1.0 - r.d1 * r.d1)
}

pub fn gauss_curvature(p: &RadialProfile, s: f64) -> Result<f64> {
    p.eval(s).map(gauss_curvature_of)
}

pub fn mean_curvature(p: &RadialProfile, s: f64) -> Result<f64> {
    p.eval(s).map(mean_curvature_of)
}

pub fn scalar_curvature(p: &RadialProfile, s: f64) -> Result<f64> {
    p.eval(s).map(scalar_curvature_of)
}

pub fn sphere_area(p: &RadialProfile, s: f64) -> Result<f64> {
    p.eval(s).map(|j| 4.0 * PI * j.v * j.v)
}

pub fn hawking_mass(p: &RadialProfile, s: f64) -> Result<f64> {
    p.eval(s).map(hawking_mass_of)
}

/// Scalar curvature at every node, from the exact node derivatives.
pub fn scalar_curvature_nodes(p: &RadialProfile) -> Vec<f64> {
    (0..p.len()).map(|i| scalar_curvature_of(p.node(i))).collect()
}

pub fn hawking_mass_nodes(p: &RadialProfile) -> Vec<f64> {
    (0..p.len()).map(|i| hawking_mass_of(p.node(i))).collect()
}

pub fn mean_curvature_nodes(p: &RadialProfile) -> Vec<f64> {
    (0..p.len()).map(|i| mean_curvature_of(p.node(i))).collect()
}

/// `R̃ = ρ⁻²(R + 2K(ρ² − 1) + 2(ρ'/ρ)H)` from raw warp values.
pub fn warped_scalar_curvature(rho: f64, drho: f64, base_r: f64, k: f64, h: f64) -> Result<f64> {
    if !(rho > 0.0) {
        return Err(Error::InvalidWarp(format!("warp must be positive (got {rho})")));
    }
    Ok((base_r + 2.0 * k * (rho * rho - 1.0) + 2.0 * drho / rho * h) / (rho * rho))
}

/// Warped scalar curvature at collar coordinate `t`, with base quantities
/// supplied in the `ρ ≡ 1` gauge.
pub fn scalar_curvature_warped(w: &WarpedProfile, base_r: f64, k: f64, h: f64, t: f64) -> Result<f64> {
    let rho = w.rho_at(t)?;
    warped_scalar_curvature(rho.v, rho.d1, base_r, k, h)
}

/// Discrete weighted norm `Σ_{j≤k} sup σ^{j+τ}|f^{(j)}|`, `σ = max(1, r)`,
/// with derivatives of `f` estimated by a cubic spline in `s`.
pub fn weighted_norm(p: &RadialProfile, f: &[f64], k: usize, tau: f64) -> Result<f64> {
    if f.len() != p.len() {
        return Err(Error::InvalidParameter("sample count differs from profile".into()));
    }
    if k > 2 {
        return Err(Error::Unsupported(format!("weighted norm of order {k} > 2")));
    }
    let jets: Vec<Jet> = if k == 0 {
        f.iter().map(|&v| Jet::constant(v)).collect()
    } else {
        let (d1, d2) = spline_derivatives(p.s(), f)?;
        (0..f.len()).map(|i| Jet::new(f[i], d1[i], d2[i])).collect()
    };
    weighted_norm_jets(p.r(), &jets, k, tau)
}

/// Weighted norm from exact jets of `f` against areal radii `r`.
pub fn weighted_norm_jets(r: &[f64], f: &[Jet], k: usize, tau: f64) -> Result<f64> {
    if k > 2 {
        return Err(Error::Unsupported(format!("weighted norm of order {k} > 2")));
    }
    let mut sup = [0.0f64; 3];
    for (ri, fi) in r.iter().zip(f) {
        let sigma = ri.max(1.0);
        let d = [fi.v, fi.d1, fi.d2];
        for j in 0..=k {
            sup[j] = sup[j].max(sigma.powf(j as f64 + tau) * d[j].abs());
        }
    }
    Ok(sup[..=k].iter().sum())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pointwise_quantities() {
        let fl = flat(0.5, 10.0, 50).unwrap();
        assert!((gauss_curvature(&fl, 2.0).unwrap() - 0.25).abs() < 1e-12);
        assert!((mean_curvature(&fl, 1.0).unwrap() - 2.0).abs() < 1e-12);
        assert!(scalar_curvature(&fl, 3.3).unwrap().abs() < 1e-12);
        assert!(hawking_mass(&fl, 7.0).unwrap().abs() < 1e-12);
        let cyl = cylinder(1.0, 0.0, 5.0, 20).unwrap();
        assert!((gauss_curvature(&cyl, 2.2).unwrap() - 1.0).abs() < 1e-14);
        assert_eq!(mean_curvature(&cyl, 1.0).unwrap(), 0.0);
        assert!((scalar_curvature(&cyl, 4.0).unwrap() - 2.0).abs() < 1e-14);
        assert!((sphere_area(&cyl, 0.0).unwrap() - 4.0 * PI).abs() < 1e-12);
        assert!(matches!(gauss_curvature(&cyl, 6.0), Err(Error::Domain { .. })));
    }

    #[test]
    fn schwarzschild_pointwise() {
        let sl = SchwarzschildSlice { mass: 1.0 };
        let p = sl.through_throat(20.0, 50.0, 801).unwrap();
        let s4 = sl.s_of_r(4.0);
        assert!((gauss_curvature(&p, s4).unwrap() - 1.0 / 16.0).abs() < 1e-9);
        assert!(mean_curvature(&p, 0.0).unwrap().abs() < 1e-12);
        assert!((sphere_area(&p, 0.0).unwrap() - 16.0 * PI).abs() < 1e-9);
        for m in hawking_mass_nodes(&p) {
            assert!((m - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn minimal_sphere_hawking_mass_matches_area_bound() {
        let j = Jet::new(2.0, 0.0, 0.1);
        let area = 4.0 * PI * 4.0;
        assert!((hawking_mass_of(j) - (area / (16.0 * PI)).sqrt()).abs() < 1e-15);
    }

    #[test]
    fn warped_formula_substitution() {
        assert!((warped_scalar_curvature(1.0, 0.1, 0.0, 1.0, 2.0).unwrap() - 0.4).abs() < 1e-15);
        assert_eq!(warped_scalar_curvature(1.0, 0.0, 0.37, 5.0, 1.0).unwrap(), 0.37);
        assert!(matches!(warped_scalar_curvature(0.0, 0.0, 0.0, 0.0, 0.0), Err(Error::InvalidWarp(_))));
    }

    #[test]
    fn weighted_norm_examples() {
        let fl = flat(1.0, 50.0, 2000).unwrap();
        let zero = vec![0.0; fl.len()];
        assert_eq!(weighted_norm(&fl, &zero, 2, 1.0).unwrap(), 0.0);
        let inv: Vec<f64> = fl.r().iter().map(|r| 1.0 / r.max(1.0)).collect();
        assert!((weighted_norm(&fl, &inv, 0, 1.0).unwrap() - 1.0).abs() < 1e-12);
        let n1 = weighted_norm(&fl, &inv, 1, 1.0).unwrap();
        assert!((n1 - 2.0).abs() < 1e-2, "{n1}");
        assert!(matches!(weighted_norm(&fl, &inv, 3, 1.0), Err(Error::Unsupported(_))));
    }

    #[test]
    fn boundary_data_reference_mass() {
        let bd = BoundaryData::new(4.0 * PI, 1.0).unwrap();
        assert!((bd.hawking_mass() - 0.375).abs() < 1e-15);
        assert!(BoundaryData::new(4.0 * PI, 0.0).is_err());
    }
}
