//! ADM mass estimation and conformal mass bookkeeping.

use serde::Serialize;
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::numerics::linear_fit;
use crate::radial_geometry::{hawking_mass_of, RadialProfile};

/// Residual above which an ADM estimate is flagged unreliable.
pub const RELIABLE_RESIDUAL: f64 = 1e-2;

/// Minimum number of tail samples for the ADM fit.
pub const MIN_TAIL_SAMPLES: usize = 8;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MassReport {
    pub adm_estimate: f64,
    pub fit_residual: f64,
    pub fit_window: [f64; 2],
    /// Slope `c` of the decay model `m + c·r^{1−2p}`.
    pub decay_coefficient: f64,
    /// `(s, m_H(s))` at every node.
    pub hawking_trace: Vec<(f64, f64)>,
}

impl MassReport {
    pub fn reliable(&self) -> bool {
        self.fit_residual <= RELIABLE_RESIDUAL
    }
}

/// ADM mass as the tail limit of the Hawking mass, by least squares on
/// `m_H ≈ m + c·r^{1−2p}` over the outermost 20% of samples.
pub fn adm_mass(p: &RadialProfile) -> Result<MassReport> {
    let start = p.tail_start();
    let n_tail = p.len() - start;
    if n_tail < MIN_TAIL_SAMPLES {
        return Err(Error::InsufficientData(format!(
            "tail window has {n_tail} samples, need {MIN_TAIL_SAMPLES}"
        )));
    }
    let af = p.asymptotic_flatness();
    if !af.accepted {
        return Err(Error::Precondition(format!(
            "profile is not asymptotically flat at tolerance (tail residual {:.3e})",
            af.residual
        )));
    }
    let trace: Vec<(f64, f64)> = (0..p.len())
        .map(|i| (p.s()[i], hawking_mass_of(p.node(i))))
        .collect();
    let e = 1.0 - 2.0 * p.decay_p;
    let basis: Vec<f64> = p.r()[start..].iter().map(|r| r.powf(e)).collect();
    let y: Vec<f64> = trace[start..].iter().map(|t| t.1).collect();
    let (m, c, rms) = linear_fit(&basis, &y);
    Ok(MassReport {
        adm_estimate: m,
        fit_residual: rms,
        fit_window: [p.s()[start], *p.s().last().unwrap()],
        decay_coefficient: c,
        hawking_trace: trace,
    })
}

/// Flux form of the mass at areal radius `r_eval`: `(r/2)(1 − r'²)`.
pub fn adm_flux(p: &RadialProfile, r_eval: f64) -> Result<f64> {
    let s = p.s_at_radius(r_eval)?;
    Ok(hawking_mass_of(p.eval(s)?))
}

/// Mass after the conformal change `u = (1−a)φ + a` and rescaling by `a⁻²`:
/// `a²(m − (1−a)/(2πa)·flux)`.
pub fn conformal_mass_change(m_g: f64, a: f64, flux_phi: f64) -> Result<f64> {
    if !(a > 0.0 && a <= 1.0) {
        return Err(Error::InvalidParameter(format!("a = {a} outside (0, 1]")));
    }
    if !flux_phi.is_finite() {
        return Err(Error::InvalidParameter("flux must be finite".into()));
    }
    Ok(a * a * (m_g - (1.0 - a) / (2.0 * PI * a) * flux_phi))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::radial_geometry::{flat_exterior, SchwarzschildSlice};

    #[test]
    fn flat_and_schwarzschild() {
        let f = adm_mass(&flat_exterior(1.0, 1000.0, 400).unwrap()).unwrap();
        assert!(f.adm_estimate.abs() < 1e-6);
        let s = SchwarzschildSlice { mass: 1.0 }.exterior(3.0, 1000.0, 2000).unwrap();
        let rep = adm_mass(&s).unwrap();
        assert!((rep.adm_estimate - 1.0).abs() < 1e-3);
        assert!(rep.reliable());
        assert!((adm_flux(&s, 100.0).unwrap() - 1.0).abs() < 1e-9);
        assert!(matches!(adm_flux(&s, 2000.0), Err(Error::Domain { .. })));
        assert!((adm_flux(&s, 900.0).unwrap() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn short_tail_is_rejected() {
        let s = SchwarzschildSlice { mass: 1.0 }.exterior(3.0, 1000.0, 20).unwrap();
        assert!(matches!(adm_mass(&s), Err(Error::InsufficientData(_))));
    }

    #[test]
    fn conformal_change_examples() {
        assert_eq!(conformal_mass_change(0.7, 1.0, -3.0).unwrap(), 0.7);
        assert!((conformal_mass_change(0.0, 0.5, -4.0 * PI).unwrap() - 0.5).abs() < 1e-15);
        assert!((conformal_mass_change(1.0, 0.9, 0.0).unwrap() - 0.81).abs() < 1e-15);
        assert!(conformal_mass_change(1.0, 0.0, 0.0).is_err());
        assert!(conformal_mass_change(1.0, 1.5, 0.0).is_err());
    }
}
