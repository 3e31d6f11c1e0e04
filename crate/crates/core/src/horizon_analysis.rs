//! Horizon and outward-minimizing predicates for radial profiles.
//!
//! Competitor surfaces are the centered spheres, so a minimal sphere is a
//! zero of `r'` and "enclosing area" is `inf 4πr²` over the exterior. The
//! boundary `∂M` is the first sample of the profile.

use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::radial_geometry::{CornerManifold, RadialProfile};

/// `|r'|` below this counts as zero.
pub const ROOT_TOL: f64 = 1e-10;

/// Sub-samples per interval when scanning `r'` between nodes.
const SCAN: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "variant", content = "epsilon")]
pub enum ConditionN {
    NoHorizonsInUnion,
    NoHorizonsInM,
    NoSurroundingHorizons,
    OutwardMinimizing,
    StrictlyOutwardMinimizing,
    NEpsilon(f64),
}

impl ConditionN {
    pub fn name(&self) -> &'static str {
        match self {
            ConditionN::NoHorizonsInUnion => "no_horizons_in_union",
            ConditionN::NoHorizonsInM => "no_horizons_in_m",
            ConditionN::NoSurroundingHorizons => "no_surrounding_horizons",
            ConditionN::OutwardMinimizing => "outward_minimizing",
            ConditionN::StrictlyOutwardMinimizing => "strictly_outward_minimizing",
            ConditionN::NEpsilon(_) => "n_epsilon",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum RootKind {
    /// `r'` changes sign.
    Crossing,
    /// `r'` touches zero without changing sign.
    Tangential,
    /// `r'` vanishes on an interval.
    Band,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MinimalSphere {
    pub s: f64,
    pub kind: RootKind,
    /// End of the degenerate interval for [`RootKind::Band`].
    pub s_end: Option<f64>,
    pub radius: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConditionResult {
    pub condition: ConditionN,
    pub pass: bool,
    pub witness: Option<f64>,
    /// A zero of `r'` exactly at the corner on either side.
    pub corner_tangency: bool,
}

fn dr_at(p: &RadialProfile, s: f64) -> f64 {
    p.interpolant().eval_unchecked(s).d1
}

/// Zeros of `r'` over the whole profile, in increasing `s`.
pub fn find_minimal_spheres(p: &RadialProfile) -> Vec<MinimalSphere> {
    let s = p.s();
    let n = s.len();
    let mut out: Vec<MinimalSphere> = Vec::new();
    let mut i = 0;
    while i < n {
        // degenerate band of vanishing r' at consecutive nodes
        if p.dr()[i].abs() <= ROOT_TOL {
            let mut j = i;
            while j + 1 < n && p.dr()[j + 1].abs() <= ROOT_TOL {
                j += 1;
            }
            if j > i {
                out.push(MinimalSphere {
                    s: s[i],
                    kind: RootKind::Band,
                    s_end: Some(s[j]),
                    radius: p.r()[i],
                });
                i = j + 1;
                continue;
            }
        }
        i += 1;
    }
    let in_band = |x: f64, out: &[MinimalSphere]| {
        out.iter()
            .any(|m| m.kind == RootKind::Band && x >= m.s && x <= m.s_end.unwrap_or(m.s))
    };
    let mut roots = Vec::new();
    for k in 0..n - 1 {
        let (a, b) = (s[k], s[k + 1]);
        let mut prev = (a, dr_at(p, a));
        for j in 1..=SCAN {
            let x = a + (b - a) * j as f64 / SCAN as f64;
            let cur = (x, dr_at(p, x));
            if prev.1.abs() <= ROOT_TOL {
                roots.push((prev.0, None));
            } else if prev.1 * cur.1 < 0.0 && cur.1.abs() > ROOT_TOL {
                roots.push((bisect(p, prev.0, cur.0), Some(RootKind::Crossing)));
            }
            prev = cur;
        }
        if k == n - 2 && prev.1.abs() <= ROOT_TOL {
            roots.push((prev.0, None));
        }
    }
    for (x, kind) in roots {
        if in_band(x, &out) {
            continue;
        }
        if out.iter().any(|m| (m.s - x).abs() <= 1e-9 * x.abs().max(1.0)) {
            continue;
        }
        let kind = kind.unwrap_or_else(|| classify_touch(p, x));
        out.push(MinimalSphere {
            s: x,
            kind,
            s_end: None,
            radius: p.interpolant().eval_unchecked(x).v,
        });
    }
    // tangential touches between sub-samples: local minima of |r'| near zero
    for k in 0..n - 1 {
        let (a, b) = (s[k], s[k + 1]);
        let m = SCAN * 4;
        let vals: Vec<(f64, f64)> = (0..=m)
            .map(|j| {
                let x = a + (b - a) * j as f64 / m as f64;
                (x, dr_at(p, x))
            })
            .collect();
        for w in vals.windows(3) {
            let (x, v) = w[1];
            if v.abs() < w[0].1.abs() && v.abs() < w[2].1.abs() && v.abs() <= 1e3 * ROOT_TOL && w[0].1 * w[2].1 > 0.0 {
                if in_band(x, &out) || out.iter().any(|r| (r.s - x).abs() <= (b - a) / m as f64 * 1.5) {
                    continue;
                }
                out.push(MinimalSphere {
                    s: x,
                    kind: RootKind::Tangential,
                    s_end: None,
                    radius: p.interpolant().eval_unchecked(x).v,
                });
            }
        }
    }
    out.sort_by(|a, b| a.s.partial_cmp(&b.s).unwrap());
    out
}

fn bisect(p: &RadialProfile, mut a: f64, mut b: f64) -> f64 {
    let fa = dr_at(p, a);
    for _ in 0..100 {
        let m = 0.5 * (a + b);
        if dr_at(p, m) * fa > 0.0 {
            a = m;
        } else {
            b = m;
        }
    }
    0.5 * (a + b)
}

fn classify_touch(p: &RadialProfile, x: f64) -> RootKind {
    let (lo, hi) = p.s_range();
    let h = 1e-6 * (hi - lo);
    let l = dr_at(p, (x - h).max(lo));
    let r = dr_at(p, (x + h).min(hi));
    if x - h > lo && x + h < hi && l * r < 0.0 {
        RootKind::Crossing
    } else {
        RootKind::Tangential
    }
}

fn beyond_boundary(p: &RadialProfile, x: f64) -> bool {
    let s0 = p.s()[0];
    x > s0 + 1e-12 * s0.abs().max(1.0)
}

/// The largest zero of `r'` strictly beyond the boundary.
pub fn outermost_surrounding_horizon(p: &RadialProfile) -> Option<f64> {
    find_minimal_spheres(p)
        .into_iter()
        .map(|m| m.s_end.unwrap_or(m.s))
        .filter(|&x| beyond_boundary(p, x))
        .last()
}

/// `(inf r, argmin)` over the profile, including interior minima.
pub fn min_radius(p: &RadialProfile) -> (f64, f64) {
    let mut best = (p.r()[0], p.s()[0]);
    for (i, &r) in p.r().iter().enumerate() {
        if r < best.0 {
            best = (r, p.s()[i]);
        }
    }
    for m in find_minimal_spheres(p) {
        if m.radius < best.0 {
            best = (m.radius, m.s);
        }
    }
    best
}

/// Area of the smallest centered sphere enclosing the boundary.
pub fn min_enclosing_area(p: &RadialProfile) -> f64 {
    let r = min_radius(p).0;
    4.0 * PI * r * r
}

/// Evaluates `cond` on an outer profile. The union variant needs the inner
/// region; use [`check_condition_union`].
pub fn check_condition(p: &RadialProfile, cond: ConditionN) -> Result<ConditionResult> {
    let r0 = p.r()[0];
    let s0 = p.s()[0];
    let result = |pass: bool, witness: Option<f64>| ConditionResult {
        condition: cond,
        pass,
        witness,
        corner_tangency: p.dr()[0].abs() <= ROOT_TOL,
    };
    match cond {
        ConditionN::NoHorizonsInUnion => Err(Error::InsufficientData(
            "the union variant needs the inner region".into(),
        )),
        ConditionN::NoHorizonsInM | ConditionN::NoSurroundingHorizons => {
            // every centered sphere surrounds the boundary
            let w = outermost_surrounding_horizon(p);
            Ok(result(w.is_none(), w))
        }
        ConditionN::OutwardMinimizing => {
            let (rmin, at) = min_radius(p);
            let pass = rmin >= r0;
            Ok(result(pass, (!pass).then_some(at)))
        }
        ConditionN::StrictlyOutwardMinimizing => {
            let mut witness = None;
            for (i, &r) in p.r().iter().enumerate().skip(1) {
                if r <= r0 {
                    witness = Some(p.s()[i]);
                    break;
                }
            }
            if witness.is_none() {
                witness = find_minimal_spheres(p)
                    .into_iter()
                    .find(|m| m.s > s0 && m.radius <= r0)
                    .map(|m| m.s);
            }
            Ok(result(witness.is_none(), witness))
        }
        ConditionN::NEpsilon(eps) => {
            if !(eps >= 0.0) {
                return Err(Error::InvalidParameter(format!("N_ε needs ε ≥ 0 (got {eps})")));
            }
            let (rmin, at) = min_radius(p);
            let pass = 4.0 * PI * rmin * rmin >= 4.0 * PI * r0 * r0 - eps;
            Ok(result(pass, (!pass).then_some(at)))
        }
    }
}

/// Evaluates `cond` on the glued manifold; only the union variant scans
/// the inner region, the rest act on the outer profile.
pub fn check_condition_union(c: &CornerManifold, cond: ConditionN) -> Result<ConditionResult> {
    if cond != ConditionN::NoHorizonsInUnion {
        return check_condition(&c.outer, cond);
    }
    let inner_roots = find_minimal_spheres(&c.inner);
    let outer_roots = find_minimal_spheres(&c.outer);
    let corner_tangency =
        c.inner.dr().last().map(|d| d.abs() <= ROOT_TOL).unwrap_or(false) || c.outer.dr()[0].abs() <= ROOT_TOL;
    let witness = inner_roots
        .iter()
        .chain(outer_roots.iter())
        .map(|m| m.s)
        .find(|&x| x.abs() > 1e-12);
    Ok(ConditionResult {
        condition: cond,
        pass: witness.is_none() && !corner_tangency,
        witness: witness.or(corner_tangency.then_some(0.0)),
        corner_tangency,
    })
}

/// All six variants at once, for reports.
pub fn all_conditions(p: &RadialProfile, inner: Option<&RadialProfile>, epsilon: f64) -> Result<Vec<ConditionResult>> {
    let mut out = Vec::new();
    if let Some(inner) = inner {
        let c = CornerManifold::new(inner.clone(), p.clone())?;
        out.push(check_condition_union(&c, ConditionN::NoHorizonsInUnion)?);
    }
    for cond in [
        ConditionN::NoHorizonsInM,
        ConditionN::NoSurroundingHorizons,
        ConditionN::OutwardMinimizing,
        ConditionN::StrictlyOutwardMinimizing,
        ConditionN::NEpsilon(epsilon),
    ] {
        out.push(check_condition(p, cond)?);
    }
    Ok(out)
}

/// Implications that must hold between the variants on one profile:
/// strict ⇒ outward-minimizing ⇒ `N_ε` for each `ε`, and no horizons in
/// `M` ⇒ no surrounding horizons. Returns the first violated one.
pub fn lattice_violation(p: &RadialProfile, epsilons: &[f64]) -> Result<Option<String>> {
    let strict = check_condition(p, ConditionN::StrictlyOutwardMinimizing)?.pass;
    let om = check_condition(p, ConditionN::OutwardMinimizing)?.pass;
    let nh = check_condition(p, ConditionN::NoHorizonsInM)?.pass;
    let nsh = check_condition(p, ConditionN::NoSurroundingHorizons)?.pass;
    if strict && !om {
        return Ok(Some("strictly outward-minimizing but not outward-minimizing".into()));
    }
    if nh && !nsh {
        return Ok(Some("no horizons in M but a surrounding horizon".into()));
    }
    let mut prev = false;
    for &eps in epsilons {
        let ne = check_condition(p, ConditionN::NEpsilon(eps))?.pass;
        if om && !ne {
            return Ok(Some(format!("outward-minimizing but not N_ε at ε = {eps}")));
        }
        if prev && !ne {
            return Ok(Some(format!("N_ε not monotone at ε = {eps}")));
        }
        prev = ne;
    }
    let n0 = check_condition(p, ConditionN::NEpsilon(0.0))?.pass;
    if n0 != om {
        return Ok(Some("N_0 differs from outward-minimizing".into()));
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::radial_geometry::{cylinder, flat_exterior, SchwarzschildSlice};

    fn neck(r0: f64, depth: f64) -> RadialProfile {
        crate::verify::neck_profile(r0, depth).unwrap()
    }

    #[test]
    fn flat_has_no_minimal_spheres() {
        let p = flat_exterior(1.0, 100.0, 300).unwrap();
        assert!(find_minimal_spheres(&p).is_empty());
        assert_eq!(outermost_surrounding_horizon(&p), None);
        assert!(check_condition(&p, ConditionN::StrictlyOutwardMinimizing).unwrap().pass);
    }

    #[test]
    fn schwarzschild_throat_at_two_m() {
        let p = SchwarzschildSlice { mass: 1.0 }.through_throat(6.0, 6.0, 801).unwrap();
        let roots = find_minimal_spheres(&p);
        assert_eq!(roots.len(), 1, "{roots:?}");
        assert!((roots[0].radius - 2.0).abs() < 1e-9);
        assert!(roots[0].s.abs() < 1e-6);
        assert_eq!(roots[0].kind, RootKind::Crossing);
        assert!(!check_condition(&p, ConditionN::NoHorizonsInM).unwrap().pass);
    }

    #[test]
    fn cylinder_is_a_band() {
        let p = cylinder(1.0, 0.0, 5.0, 50).unwrap();
        let roots = find_minimal_spheres(&p);
        assert_eq!(roots.len(), 1);
        assert_eq!(roots[0].kind, RootKind::Band);
        assert_eq!(roots[0].s_end, Some(5.0));
    }

    #[test]
    fn exterior_from_three_is_strictly_minimizing() {
        let p = SchwarzschildSlice { mass: 1.0 }.exterior(3.0, 500.0, 800).unwrap();
        for c in [
            ConditionN::OutwardMinimizing,
            ConditionN::StrictlyOutwardMinimizing,
            ConditionN::NoHorizonsInM,
            ConditionN::NEpsilon(0.0),
        ] {
            assert!(check_condition(&p, c).unwrap().pass, "{c:?}");
        }
    }

    #[test]
    fn neck_area_arithmetic() {
        // interior minimum of r close to 0.9·r0
        let p = neck(1.0, 0.1);
        let (rmin, _) = min_radius(&p);
        let om = check_condition(&p, ConditionN::OutwardMinimizing).unwrap();
        assert!(!om.pass);
        assert!(om.witness.is_some());
        let gap = 4.0 * PI * (1.0 - rmin * rmin);
        assert!(check_condition(&p, ConditionN::NEpsilon(gap * 1.0001)).unwrap().pass);
        assert!(!check_condition(&p, ConditionN::NEpsilon(gap * 0.9999)).unwrap().pass);
        assert!(lattice_violation(&p, &[0.0, 0.1, 1.0, 10.0]).unwrap().is_none());
        assert!(outermost_surrounding_horizon(&p).is_some());
    }

    #[test]
    fn minimal_boundary_is_excluded() {
        // r = 1 + s³/(1+s²): r'(0) = 0, increasing afterwards
        let n = 600;
        let (mut s, mut r, mut dr, mut ddr) = (vec![], vec![], vec![], vec![]);
        for i in 0..n {
            let x = 50.0 * i as f64 / (n - 1) as f64;
            let d = 1.0 + x * x;
            s.push(x);
            r.push(1.0 + x * x * x / d);
            dr.push((3.0 * x * x * d - 2.0 * x.powi(4)) / (d * d));
            ddr.push((2.0 * x.powi(5) + 6.0 * x * x * x + 6.0 * x) / (d * d * d) - 0.0);
        }
        let p = RadialProfile::new(s, r, dr, ddr, 0.75).unwrap();
        assert!(check_condition(&p, ConditionN::NoHorizonsInM).unwrap().pass);
        assert!(check_condition(&p, ConditionN::NoHorizonsInM).unwrap().corner_tangency);
    }

    #[test]
    fn union_needs_inner() {
        let p = flat_exterior(1.0, 10.0, 50).unwrap();
        assert!(check_condition(&p, ConditionN::NoHorizonsInUnion).is_err());
    }
}
