//! Smoothing a corner into a smooth metric with nonnegative scalar
//! curvature: perturb the outer side, extend the inner side by a warped
//! collar, transplant the outer metric off the collar, then glue.

mod glue;
mod transplant;

pub use glue::{collar_glue, BetaBump, ChiCutoff, GlueConfig, GlueOutput};
pub use transplant::{transplant, transplant_at, MAX_SHIFT_RATIO};

use serde::Serialize;

use crate::conformal_deform::{perturb_boundary_with, step2_coord, PerturbOptions, R_FLOOR, SOLVE_BUDGET};
use crate::error::{Error, Result};
use crate::jet::Jet;
use crate::local_extension::extend_local;
use crate::masses::adm_mass;
use crate::radial_geometry::{CornerClass, CornerManifold, CoordMetric, RadialProfile, DEFAULT_SMOOTH_TOL};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SmoothingOptions {
    pub epsilon: f64,
    /// Neighbourhood of the corner outside which the change is measured.
    pub window: f64,
    pub lambda0: f64,
    pub max_doublings: u32,
    /// Allowed undershoot of the curvature floor; by default half the
    /// smaller of the two scalar curvatures on the cutoff band of `T`.
    pub delta: Option<f64>,
}

impl SmoothingOptions {
    pub fn new(epsilon: f64, window: f64) -> Self {
        SmoothingOptions {
            epsilon,
            window,
            lambda0: 8.0,
            max_doublings: 12,
            delta: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SmoothingReport {
    pub input_class: CornerClass,
    pub short_circuit: bool,
    pub pre_a: f64,
    pub pre_b: f64,
    pub source_support: f64,
    /// Certified collar width.
    pub collar_width: f64,
    pub shift: f64,
    pub transplant_window: f64,
    pub lambda: f64,
    pub doublings: u32,
    pub h_outer_at_shift: f64,
    pub h_collar_at_shift: f64,
    pub alpha: f64,
    pub delta: f64,
    pub floor_margin: f64,
    pub min_scalar: f64,
    pub c0_change: f64,
    pub c2_change_outside_window: f64,
    pub mass_before: f64,
    pub mass_after: f64,
    pub inner_identical: bool,
    pub output_type1: bool,
}

impl SmoothingReport {
    pub fn passes(&self, epsilon: f64) -> bool {
        self.min_scalar >= R_FLOOR
            && self.c0_change < epsilon
            && self.c2_change_outside_window < epsilon
            && (self.mass_after - self.mass_before).abs() < epsilon
            && self.inner_identical
            && self.output_type1
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Smoothed {
    /// Inner samples followed by the smoothed outer part.
    pub profile: RadialProfile,
    /// Smoothed outer part from `s = 0`.
    pub outer: RadialProfile,
    pub report: SmoothingReport,
}

/// Inner nodes copied verbatim, then the outer nodes past `s = 0`.
fn join(inner: &RadialProfile, outer: &RadialProfile) -> Result<RadialProfile> {
    let mut s = inner.s().to_vec();
    let mut r = inner.r().to_vec();
    let mut dr = inner.dr().to_vec();
    let mut ddr = inner.ddr().to_vec();
    s.extend_from_slice(&outer.s()[1..]);
    r.extend_from_slice(&outer.r()[1..]);
    dr.extend_from_slice(&outer.dr()[1..]);
    ddr.extend_from_slice(&outer.ddr()[1..]);
    RadialProfile::new(s, r, dr, ddr, outer.decay_p)
}

fn uniform(lo: f64, hi: f64, n: usize) -> impl Iterator<Item = f64> {
    (0..=n).map(move |k| lo + (hi - lo) * k as f64 / n as f64)
}

fn sorted_nodes(mut v: Vec<f64>) -> Vec<f64> {
    v.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let mut out: Vec<f64> = Vec::with_capacity(v.len());
    for x in v {
        match out.last() {
            Some(&p) if x - p <= 1e-12 * x.abs().max(1.0) => {}
            _ => out.push(x),
        }
    }
    out
}

/// Largest Poisson source `b = 2^{−j}` keeping the mass change and the
/// `C²_{−1}` change beyond `window` under `0.9·eps`, the C⁰ change under
/// `0.8·eps`, and the outer mean curvature below `h_cap`.
fn boost_outer(g: &CoordMetric, decay_p: f64, s_psi: f64, window: f64, eps: f64, h_cap: f64) -> Result<(CoordMetric, f64)> {
    let m0 = adm_mass(&g.to_profile(decay_p, 0.0)?)?.adm_estimate;
    for j in 1..=SOLVE_BUDGET as i32 {
        let b = 0.5f64.powi(j);
        let g2 = match step2_coord(g, b, s_psi) {
            Ok((g2, _, _)) => g2,
            Err(Error::Amplitude(_)) => continue,
            Err(e) => return Err(e),
        };
        if !(g2.mean_curvature_node(0) < h_cap) {
            continue;
        }
        if g.deviation(&g2, 0, 0.0, |_| true)? >= 0.8 * eps
            || g.deviation(&g2, 2, 1.0, |x| x >= window)? >= 0.9 * eps
        {
            continue;
        }
        let m = adm_mass(&g2.to_profile(decay_p, 0.0)?)?.adm_estimate;
        if (m - m0).abs() >= 0.9 * eps {
            continue;
        }
        return Ok((g2, b));
    }
    Err(Error::SearchExhausted("no admissible source amplitude".into()))
}

/// Smooths the corner of `c` within `opts.window`, keeping the inner region
/// bit-identical.
pub fn smooth_corner(c: &CornerManifold, opts: SmoothingOptions) -> Result<Smoothed> {
    if !(opts.epsilon > 0.0 && opts.window > 0.0) {
        return Err(Error::InvalidParameter("epsilon and window must be positive".into()));
    }
    let class = c.classify(DEFAULT_SMOOTH_TOL).class;
    let mass_before = adm_mass(&c.outer).map_err(|e| e.at_stage("input mass"))?.adm_estimate;
    let mut report = SmoothingReport {
        input_class: class,
        short_circuit: false,
        pre_a: 1.0,
        pre_b: 0.0,
        source_support: 0.0,
        collar_width: 0.0,
        shift: 0.0,
        transplant_window: 0.0,
        lambda: 0.0,
        doublings: 0,
        h_outer_at_shift: c.h_plus,
        h_collar_at_shift: c.h_minus,
        alpha: 0.0,
        delta: 0.0,
        floor_margin: 0.0,
        min_scalar: 0.0,
        c0_change: 0.0,
        c2_change_outside_window: 0.0,
        mass_before,
        mass_after: mass_before,
        inner_identical: true,
        output_type1: true,
    };
    match class {
        CornerClass::Invalid => {
            return Err(Error::Precondition(format!(
                "outer mean curvature {} exceeds inner {}",
                c.h_plus, c.h_minus
            )))
        }
        CornerClass::Type1 => {
            report.short_circuit = true;
            let profile = join(&c.inner, &c.outer)?;
            report.min_scalar = crate::radial_geometry::scalar_curvature_nodes(&profile)
                .into_iter()
                .fold(f64::INFINITY, f64::min);
            return Ok(Smoothed {
                profile,
                outer: c.outer.clone(),
                report,
            });
        }
        _ => {}
    }

    let w = opts.window;
    let s_psi = 2.0 * w;
    report.source_support = s_psi;
    // Type 2: open a strict mean-curvature gap first
    let gapped = if class == CornerClass::Type2 {
        let pre = perturb_boundary_with(
            &c.outer,
            PerturbOptions {
                epsilon: 0.25 * opts.epsilon,
                k: 0,
                s_psi: Some(s_psi),
                exclude_below: f64::NEG_INFINITY,
            },
        )
        .map_err(|e| e.at_stage("outer perturbation"))?;
        report.pre_a = pre.a;
        pre.coord
    } else {
        CoordMetric::from_profile(&c.outer)
    };
    let h_cap = 0.5 * (gapped.mean_curvature_node(0) + c.h_minus);
    let (g1, b) = boost_outer(&gapped, c.outer.decay_p, s_psi, w, opts.epsilon, h_cap)
        .map_err(|e| e.at_stage("positive source"))?;
    report.pre_b = b;

    let ext = extend_local(&c.inner, w).map_err(|e| e.at_stage("local extension"))?;
    let t0 = ext.params.t0;
    report.collar_width = t0;
    let l = (0.5 * w).min(t0);
    report.transplant_window = l;
    let collar_end = l + 1.25 * w;
    let collar = ext
        .continued(&c.inner, collar_end, 4000)
        .map_err(|e| e.at_stage("collar continuation"))?;

    let r_min_window = (0..g1.len())
        .filter(|&i| g1.x()[i] <= l)
        .map(|i| g1.scalar_curvature_node(i))
        .fold(f64::INFINITY, f64::min);
    let alpha = 0.5 * r_min_window;
    report.alpha = alpha;
    if !(alpha > 0.0) {
        return Err(Error::ConstructionFailed(format!(
            "perturbed outer metric has scalar curvature {r_min_window} near the corner"
        )));
    }

    // shift: halve until the mean-curvature gap survives and R stays above α
    let base_nodes: Vec<f64> = g1.x().iter().cloned().filter(|&x| x > l).collect();
    let mut t = (0.25 * l).min(0.5 * t0);
    let mut found = false;
    for _ in 0..30 {
        let mut nodes: Vec<f64> = uniform(t, l, 400).collect();
        nodes.extend(base_nodes.iter().cloned());
        let g_pp = transplant(&g1, &collar, t, l, &sorted_nodes(nodes))?;
        let h_pp = g_pp.mean_curvature_node(0);
        let (ca, cr) = collar.eval(t)?;
        let h_t = crate::radial_geometry::mean_curvature_of(crate::radial_geometry::arclength_jet(ca, cr));
        let r_ok = (0..g_pp.len())
            .filter(|&i| g_pp.x()[i] <= l)
            .all(|i| g_pp.scalar_curvature_node(i) >= alpha);
        report.h_outer_at_shift = h_pp;
        report.h_collar_at_shift = h_t;
        if h_pp < h_t && r_ok {
            found = true;
            break;
        }
        t *= 0.5;
    }
    if !found {
        return Err(Error::ConstructionFailed("no shift keeps the mean-curvature gap and R ≥ α".into()));
    }
    report.shift = t;

    let input = CoordMetric::from_profile(&c.outer);
    let in_hi = input.range().1;
    let mut last_err = String::new();
    for k in 0..=opts.max_doublings {
        let lam = opts.lambda0 * 2f64.powi(k as i32);
        let cfg = GlueConfig::new(lam, w);
        let y_w = t + 1.05 * w;
        let mut nodes: Vec<f64> = uniform(t, t + 4.0 / lam, 256).collect();
        nodes.extend(uniform(t, y_w, 1200));
        nodes.extend(uniform(t, l, 400));
        nodes.extend(base_nodes.iter().cloned().filter(|&x| x > y_w.max(l)));
        let nodes = sorted_nodes(nodes);
        let g_pp = transplant(&g1, &collar, t, l, &nodes)?;
        let glued = collar_glue(&g_pp, &collar, &cfg).map_err(|e| e.at_stage("gluing"))?;

        // floor R̂ ≥ min(R_pp, R̃) − δ wherever the two differ
        let mut band_min = f64::INFINITY;
        let mut gaps = Vec::new();
        for i in 0..g_pp.len() {
            if glued.dist[i] >= w {
                break;
            }
            let rh = glued.metric.scalar_curvature_node(i);
            let lower = g_pp.scalar_curvature_node(i).min(collar.scalar_curvature_at(nodes[i])?);
            if glued.dist[i] >= cfg.flat_fraction * w {
                band_min = band_min.min(lower);
            }
            gaps.push(rh - lower);
        }
        let delta = opts.delta.unwrap_or(0.5 * band_min);
        let margin = gaps.iter().map(|g| g + delta).fold(f64::INFINITY, f64::min);

        // collar part y < t, then the glued part
        let mut ys = Vec::new();
        let mut aj: Vec<Jet> = Vec::new();
        let mut rj: Vec<Jet> = Vec::new();
        for i in 0..collar.len() {
            if collar.x()[i] < t * (1.0 - 1e-12) {
                ys.push(collar.x()[i]);
                aj.push(collar.a_node(i));
                rj.push(collar.r_node(i));
            }
        }
        for i in 0..glued.metric.len() {
            ys.push(glued.metric.x()[i]);
            aj.push(glued.metric.a_node(i));
            rj.push(glued.metric.r_node(i));
        }
        let out = CoordMetric::from_jets(ys, &aj, &rj)?;
        let min_scalar = (0..out.len())
            .map(|i| out.scalar_curvature_node(i))
            .fold(f64::INFINITY, f64::min);
        let c0 = out.deviation(&input, 0, 0.0, |y| y <= in_hi)?;
        let c2 = out.deviation(&input, 2, 1.0, |y| y >= y_w && y <= in_hi)?;
        let outer_p = out.to_profile(c.outer.decay_p, 0.0)?;
        let mass_after = adm_mass(&outer_p).map_err(|e| e.at_stage("output mass"))?.adm_estimate;

        report.lambda = lam;
        report.doublings = k;
        report.delta = delta;
        report.floor_margin = margin;
        report.min_scalar = min_scalar;
        report.c0_change = c0;
        report.c2_change_outside_window = c2;
        report.mass_after = mass_after;
        if margin >= 0.0 && min_scalar >= R_FLOOR && c0 < opts.epsilon {
            let profile = join(&c.inner, &outer_p)?;
            let n_in = c.inner.len();
            report.inner_identical = profile.s()[..n_in] == *c.inner.s()
                && profile.r()[..n_in] == *c.inner.r()
                && profile.dr()[..n_in] == *c.inner.dr()
                && profile.ddr()[..n_in] == *c.inner.ddr();
            report.output_type1 = CornerManifold::new(c.inner.clone(), outer_p.clone())?
                .classify(DEFAULT_SMOOTH_TOL)
                .class
                == CornerClass::Type1;
            return Ok(Smoothed {
                profile,
                outer: outer_p,
                report,
            });
        }
        last_err = format!("λ = {lam}: floor margin {margin:.3e}, min R {min_scalar:.3e}, C⁰ change {c0:.3e}");
    }
    Err(Error::ConstructionFailed(format!("gluing budget exhausted ({last_err})")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::radial_geometry::{flat_ball, flat_exterior, SchwarzschildSlice};

    fn corner(m: f64) -> CornerManifold {
        let inner = flat_ball(1.0, 0.1, 300).unwrap();
        let outer = SchwarzschildSlice { mass: m }.exterior(1.0, 400.0, 1500).unwrap();
        CornerManifold::new(inner, outer).unwrap()
    }

    #[test]
    fn type1_short_circuits() {
        let inner = flat_ball(1.0, 0.1, 200).unwrap();
        let outer = flat_exterior(1.0, 100.0, 400).unwrap();
        let c = CornerManifold::new(inner.clone(), outer).unwrap();
        let s = smooth_corner(&c, SmoothingOptions::new(1e-2, 1.0)).unwrap();
        assert!(s.report.short_circuit);
        assert_eq!(&s.profile.s()[..inner.len()], inner.s());
    }

    #[test]
    fn invalid_corner_is_rejected() {
        let c = corner(-0.1);
        let e = smooth_corner(&c, SmoothingOptions::new(1e-2, 0.5)).unwrap_err();
        assert!(e.is_precondition());
    }

    #[test]
    fn smooths_flat_ball_into_schwarzschild() {
        let c = corner(0.1);
        let s = smooth_corner(&c, SmoothingOptions::new(1e-2, 1.0)).unwrap();
        let r = &s.report;
        assert!(r.passes(1e-2), "{r:?}");
        assert!(r.floor_margin >= 0.0);
    }
}
