use serde::Serialize;
use std::f64::consts::PI;

use crate::error::{Error, Result};

use super::RadialProfile;

pub const DEFAULT_SMOOTH_TOL: f64 = 1e-8;

/// Relative tolerance for matching the two corner radii.
const RADIUS_MATCH_TOL: f64 = 1e-10;

/// An inner region (ending at `s = 0`) glued to an outer extension
/// (starting at `s = 0`) along a round sphere.
#[derive(Debug, Clone, PartialEq)]
pub struct CornerManifold {
    pub inner: RadialProfile,
    pub outer: RadialProfile,
    pub corner_area: f64,
    pub h_minus: f64,
    pub h_plus: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum CornerClass {
    Type1,
    Type2,
    Type3,
    Invalid,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CornerReport {
    pub class: CornerClass,
    /// `2(H₋ − H₊)·|Σ|`.
    pub distributional: f64,
}

impl CornerManifold {
    /// Glues two profiles; mean curvatures are read from the one-sided
    /// derivatives at the corner.
    pub fn new(inner: RadialProfile, outer: RadialProfile) -> Result<Self> {
        let (_, inner_hi) = inner.s_range();
        let (outer_lo, _) = outer.s_range();
        if inner_hi.abs() > 1e-12 || outer_lo.abs() > 1e-12 {
            return Err(Error::Gluing(format!(
                "corner must sit at s = 0 (inner ends at {inner_hi}, outer starts at {outer_lo})"
            )));
        }
        let ri = *inner.r().last().unwrap();
        let ro = outer.r()[0];
        if (ri - ro).abs() > RADIUS_MATCH_TOL * ri.max(ro) {
            return Err(Error::Gluing(format!("corner radii differ: {ri} vs {ro}")));
        }
        let h_minus = 2.0 * inner.dr().last().unwrap() / ri;
        let h_plus = 2.0 * outer.dr()[0] / ro;
        if !(h_minus > 0.0) {
            return Err(Error::NotAllowable(format!("inner boundary mean curvature {h_minus} ≤ 0")));
        }
        Ok(CornerManifold {
            inner,
            outer,
            corner_area: 4.0 * PI * ri * ri,
            h_minus,
            h_plus,
        })
    }

    pub fn corner_radius(&self) -> f64 {
        self.outer.r()[0]
    }

    pub fn ddr_minus(&self) -> f64 {
        *self.inner.ddr().last().unwrap()
    }

    pub fn ddr_plus(&self) -> f64 {
        self.outer.ddr()[0]
    }

    pub fn classify(&self, smooth_tol: f64) -> CornerReport {
        corner_classify(self, smooth_tol)
    }
}

/// Type of the corner and its distributional curvature contribution.
pub fn corner_classify(c: &CornerManifold, smooth_tol: f64) -> CornerReport {
    let scale = c.h_minus.abs();
    let gap = c.h_minus - c.h_plus;
    let class = if gap.abs() <= smooth_tol * scale {
        let r0 = c.corner_radius();
        let curv_scale = c.ddr_minus().abs().max(c.ddr_plus().abs()).max(1.0 / r0);
        if (c.ddr_minus() - c.ddr_plus()).abs() <= smooth_tol * curv_scale {
            CornerClass::Type1
        } else {
            CornerClass::Type2
        }
    } else if gap >= -smooth_tol * scale {
        CornerClass::Type3
    } else {
        CornerClass::Invalid
    };
    CornerReport {
        class,
        distributional: 2.0 * gap * c.corner_area,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::radial_geometry::{flat_ball, flat_exterior, SchwarzschildSlice};

    fn scaled_outer(h_plus: f64) -> RadialProfile {
        // outer starting at r = 1 with r'(0) = h_plus / 2
        let rp = 0.5 * h_plus;
        let m = 0.5 * (1.0 - rp * rp);
        SchwarzschildSlice { mass: m }.exterior(1.0, 100.0, 200).unwrap()
    }

    #[test]
    fn classification_examples() {
        let inner = flat_ball(1.0, 0.1, 50).unwrap();
        let c = CornerManifold::new(inner.clone(), flat_exterior(1.0, 100.0, 200).unwrap()).unwrap();
        assert_eq!(c.classify(DEFAULT_SMOOTH_TOL).class, CornerClass::Type1);

        let c = CornerManifold::new(inner.clone(), scaled_outer(1.5)).unwrap();
        let rep = c.classify(DEFAULT_SMOOTH_TOL);
        assert_eq!(rep.class, CornerClass::Type3);
        assert!((rep.distributional - 1.0 * c.corner_area).abs() < 1e-12);

        // H₋ = 1 against H₊ = 2: inner radius 2 ball with r' = 1 gives H₋ = 1
        let inner2 = flat_ball(2.0, 0.1, 50).unwrap();
        let outer2 = SchwarzschildSlice { mass: -3.0 }.exterior(2.0, 100.0, 200).unwrap();
        let c = CornerManifold::new(inner2, outer2).unwrap();
        assert!((c.h_plus - 2.0).abs() < 1e-12);
        assert_eq!(c.classify(DEFAULT_SMOOTH_TOL).class, CornerClass::Invalid);
    }

    #[test]
    fn type2_when_only_second_derivative_jumps() {
        let inner = flat_ball(1.0, 0.1, 50).unwrap();
        let outer = SchwarzschildSlice { mass: 0.0 }.exterior(1.0, 100.0, 200).unwrap();
        let mut ddr = outer.ddr().to_vec();
        ddr[0] = 0.3;
        let bumped = RadialProfile::new(outer.s().to_vec(), outer.r().to_vec(), outer.dr().to_vec(), ddr, 0.75).unwrap();
        let c = CornerManifold::new(inner, bumped).unwrap();
        assert_eq!(c.classify(DEFAULT_SMOOTH_TOL).class, CornerClass::Type2);
    }

    #[test]
    fn gluing_rejects_radius_mismatch() {
        let inner = flat_ball(1.0, 0.1, 50).unwrap();
        let outer = flat_exterior(1.0 + 1e-6, 100.0, 200).unwrap();
        assert!(matches!(CornerManifold::new(inner, outer), Err(Error::Gluing(_))));
    }

    #[test]
    fn lowering_h_plus_never_invalidates_type3() {
        let inner = flat_ball(1.0, 0.1, 50).unwrap();
        let mut prev = CornerClass::Type1;
        for k in 0..10 {
            let h = 2.0 - 0.19 * k as f64;
            let c = CornerManifold::new(inner.clone(), scaled_outer(h)).unwrap();
            let class = c.classify(DEFAULT_SMOOTH_TOL).class;
            assert_ne!(class, CornerClass::Invalid);
            if prev == CornerClass::Type3 {
                assert_eq!(class, CornerClass::Type3);
            }
            prev = class;
        }
    }
}
