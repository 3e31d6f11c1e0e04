//! ADM-mass minimization over a parametric family of rotationally
//! symmetric extensions with prescribed boundary data.
//!
//! On a collar of length `8·r₀` the profile solves
//! `r'' = min(θ, 1)·(1 − r'²)/(2r)` with `θ` piecewise constant in `[0, 1]`,
//! so `R = (4/r)((1 − r'²)/(2r) − r'') ≥ 0` by construction. Beyond the
//! collar the profile continues as the Schwarzschild slice whose mass is the
//! Hawking mass at the collar end, which is then the exact ADM mass.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::horizon_analysis::{check_condition, check_condition_union, ConditionN, ROOT_TOL};
use crate::masses::adm_mass;
use crate::radial_geometry::{
    BoundaryData, CornerClass, CornerManifold, RadialProfile, SchwarzschildSlice, DEFAULT_SMOOTH_TOL,
};
use crate::smoothing_pipeline::{smooth_corner, SmoothingOptions, SmoothingReport};

pub const N_CONTROLS: usize = 16;
/// Collar length in units of the boundary radius.
pub const COLLAR_RADII: f64 = 8.0;
pub const DEFAULT_BUDGET: usize = 2000;
const STEPS_PER_PIECE: usize = 32;
const TAIL_NODES: usize = 600;
const TAIL_RADIUS_FACTOR: f64 = 1e3;
const MIN_STEP: f64 = 1e-3;
/// Relative tolerance for the Type-1 second-derivative match.
const DDR_MATCH_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum BoundaryType {
    Type1,
    Type2,
    Type3,
}

impl BoundaryType {
    pub fn index(&self) -> u8 {
        match self {
            BoundaryType::Type1 => 1,
            BoundaryType::Type2 => 2,
            BoundaryType::Type3 => 3,
        }
    }
}

#[derive(Debug, Clone)]
pub struct ExtensionFamily {
    pub boundary: BoundaryData,
    pub boundary_type: BoundaryType,
    /// Inner `r''` at the corner, matched by Type 1. `None` uses the
    /// zero-scalar-curvature value `(1 − r'²)/(2r)`.
    pub inner_ddr: Option<f64>,
    /// Inner region, needed only for the union condition.
    pub inner: Option<RadialProfile>,
    /// Type 3 may start with `r'(0) < 0`, producing necks.
    pub allow_necks: bool,
    pub n_controls: usize,
}

/// A generated extension: collar samples and the exact tail mass.
#[derive(Debug, Clone, PartialEq)]
pub struct Candidate {
    pub controls: Vec<f64>,
    pub collar: RadialProfile,
    pub mass: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SearchResult {
    /// Family-relative Bartnik mass estimate; `+∞` when nothing is feasible.
    pub mass_estimate: f64,
    /// Least-squares ADM fit of the best profile, as a cross-check.
    pub adm_fit: Option<f64>,
    pub best_profile: Option<RadialProfile>,
    pub best_controls: Vec<f64>,
    pub condition: ConditionN,
    pub boundary_type: BoundaryType,
    pub evaluations: usize,
    pub feasible: bool,
    pub seed: u64,
}

impl SearchResult {
    fn infeasible(fam: &ExtensionFamily, cond: ConditionN, evaluations: usize, seed: u64) -> Self {
        SearchResult {
            mass_estimate: f64::INFINITY,
            adm_fit: None,
            best_profile: None,
            best_controls: Vec::new(),
            condition: cond,
            boundary_type: fam.boundary_type,
            evaluations,
            feasible: false,
            seed,
        }
    }
}

impl ExtensionFamily {
    pub fn new(boundary: BoundaryData, boundary_type: BoundaryType) -> Self {
        ExtensionFamily {
            boundary,
            boundary_type,
            inner_ddr: None,
            inner: None,
            allow_necks: true,
            n_controls: N_CONTROLS,
        }
    }

    /// Family over the boundary of a corner's inner region.
    pub fn from_corner(c: &CornerManifold, boundary_type: BoundaryType) -> Self {
        let bd = BoundaryData {
            area: c.corner_area,
            mean_curvature: c.h_minus,
        };
        ExtensionFamily {
            inner_ddr: Some(c.ddr_minus()),
            inner: Some(c.inner.clone()),
            ..ExtensionFamily::new(bd, boundary_type)
        }
    }

    pub fn dim(&self) -> usize {
        self.n_controls + 1
    }

    /// `r'(0)` for Types 1 and 2.
    pub fn v_max(&self) -> f64 {
        0.5 * self.boundary.mean_curvature * self.boundary.radius()
    }

    fn v_lower_fraction(&self) -> f64 {
        if self.allow_necks {
            -1.0
        } else {
            0.0
        }
    }

    /// Controls of the Schwarzschild reference: `θ ≡ 1`, `r'(0)` maximal.
    pub fn reference_controls(&self) -> Vec<f64> {
        vec![1.0; self.dim()]
    }

    /// Clamps controls into the admissible box. The last entry is the
    /// fraction `r'(0)/v_max`, pinned to 1 for Types 1 and 2.
    pub fn project(&self, x: &[f64]) -> Vec<f64> {
        let mut y: Vec<f64> = x.iter().map(|v| v.clamp(0.0, 1.0)).collect();
        y.resize(self.dim(), 1.0);
        let last = self.n_controls;
        y[last] = match self.boundary_type {
            BoundaryType::Type3 => x.get(last).copied().unwrap_or(1.0).clamp(self.v_lower_fraction(), 1.0),
            _ => 1.0,
        };
        y
    }

    pub fn random_controls(&self, rng: &mut ChaCha8Rng) -> Vec<f64> {
        let mut x: Vec<f64> = (0..self.n_controls).map(|_| rng.gen::<f64>()).collect();
        x.push(rng.gen_range(self.v_lower_fraction()..=1.0));
        self.project(&x)
    }

    /// Integrates the collar for projected controls. Fails if the profile
    /// collapses, ends contracting, or misses the Type-1 match.
    pub fn generate(&self, controls: &[f64]) -> Result<Candidate> {
        let mut x = self.project(controls);
        let r0 = self.boundary.radius();
        let v = x[self.n_controls] * self.v_max();
        if !(self.boundary.mean_curvature > 0.0 && r0 > 0.0) {
            return Err(Error::Precondition("boundary data needs A > 0 and H > 0".into()));
        }
        let piece = COLLAR_RADII * r0 / self.n_controls as f64;
        let h = piece / STEPS_PER_PIECE as f64;
        let accel = |theta: f64, r: f64, p: f64| {
            let env = (1.0 - p * p) / (2.0 * r);
            (theta * env).min(env)
        };
        let n = self.n_controls * STEPS_PER_PIECE + 1;
        let (mut s, mut rs, mut ps, mut fs) =
            (Vec::with_capacity(n), Vec::with_capacity(n), Vec::with_capacity(n), Vec::with_capacity(n));
        let (mut r, mut p) = (r0, v);
        let mut theta0 = x[0];
        if self.boundary_type == BoundaryType::Type1 {
            let env = (1.0 - v * v) / (2.0 * r0);
            let target = self.inner_ddr.unwrap_or(env);
            if env.abs() > f64::MIN_POSITIVE {
                theta0 = (target / env).clamp(0.0, 1.0);
            }
            x[0] = theta0;
        }
        for k in 0..self.n_controls {
            let theta = if k == 0 { theta0 } else { x[k] };
            for j in 0..STEPS_PER_PIECE {
                let t = (k * STEPS_PER_PIECE + j) as f64 * h;
                s.push(t);
                rs.push(r);
                ps.push(p);
                fs.push(accel(theta, r, p));
                let f = |r: f64, p: f64| (p, accel(theta, r, p));
                let k1 = f(r, p);
                let k2 = f(r + 0.5 * h * k1.0, p + 0.5 * h * k1.1);
                let k3 = f(r + 0.5 * h * k2.0, p + 0.5 * h * k2.1);
                let k4 = f(r + h * k3.0, p + h * k3.1);
                r += h / 6.0 * (k1.0 + 2.0 * k2.0 + 2.0 * k3.0 + k4.0);
                p += h / 6.0 * (k1.1 + 2.0 * k2.1 + 2.0 * k3.1 + k4.1);
                if !(r > 0.0) {
                    return Err(Error::ConstructionFailed("collar collapses to r = 0".into()));
                }
            }
        }
        let last_theta = x[self.n_controls - 1];
        s.push(COLLAR_RADII * r0);
        rs.push(r);
        ps.push(p);
        fs.push(accel(last_theta, r, p));
        if !(p > ROOT_TOL) {
            return Err(Error::ConstructionFailed(format!("collar ends with r' = {p} ≤ 0")));
        }
        if self.boundary_type == BoundaryType::Type1 {
            let target = self.inner_ddr.unwrap_or((1.0 - v * v) / (2.0 * r0));
            let scale = target.abs().max(1.0 / r0);
            if (fs[0] - target).abs() > DDR_MATCH_TOL * scale {
                return Err(Error::ConstructionFailed(format!(
                    "corner r'' = {} cannot match inner {target} with R ≥ 0",
                    fs[0]
                )));
            }
        }
        let mass = 0.5 * r * (1.0 - p * p);
        let collar = RadialProfile::new(s, rs, ps, fs, crate::radial_geometry::DEFAULT_DECAY_P)?;
        Ok(Candidate {
            controls: x,
            collar,
            mass,
        })
    }

    /// Collar followed by the Schwarzschild tail.
    pub fn full_profile(&self, c: &Candidate) -> Result<RadialProfile> {
        let (_, l) = c.collar.s_range();
        let r_l = *c.collar.r().last().unwrap();
        let tail = SchwarzschildSlice { mass: c.mass }.exterior(r_l, TAIL_RADIUS_FACTOR * r_l, TAIL_NODES)?;
        let mut s = c.collar.s().to_vec();
        let mut r = c.collar.r().to_vec();
        let mut dr = c.collar.dr().to_vec();
        let mut ddr = c.collar.ddr().to_vec();
        for i in 1..tail.len() {
            s.push(l + tail.s()[i]);
            r.push(tail.r()[i]);
            dr.push(tail.dr()[i]);
            ddr.push(tail.ddr()[i]);
        }
        RadialProfile::new(s, r, dr, ddr, crate::radial_geometry::DEFAULT_DECAY_P)
    }

    /// Whether a candidate satisfies `cond`. The tail is strictly expanding
    /// past `r(L)`, so the collar decides every variant.
    pub fn satisfies(&self, c: &Candidate, cond: ConditionN) -> Result<bool> {
        if cond == ConditionN::NoHorizonsInUnion {
            let inner = self.inner.as_ref().ok_or_else(|| {
                Error::InsufficientData("the union variant needs the inner region".into())
            })?;
            let corner = CornerManifold::new(inner.clone(), c.collar.clone())?;
            return Ok(check_condition_union(&corner, cond)?.pass);
        }
        if let ConditionN::NEpsilon(e) = cond {
            if !(e >= 0.0) {
                return Err(Error::InvalidParameter(format!("N_ε needs ε ≥ 0 (got {e})")));
            }
        }
        // strictly increasing r passes every variant
        if c.collar.dr().iter().all(|&p| p > 10.0 * ROOT_TOL) {
            return Ok(true);
        }
        Ok(check_condition(&c.collar, cond)?.pass)
    }

    /// Feasible candidate for the controls, if any.
    pub fn feasible(&self, controls: &[f64], cond: ConditionN) -> Result<Option<Candidate>> {
        match self.generate(controls) {
            Ok(c) => Ok(self.satisfies(&c, cond)?.then_some(c)),
            Err(Error::ConstructionFailed(_)) => Ok(None),
            Err(e) => Err(e),
        }
    }
}

fn better(a: &Candidate, b: &Candidate) -> bool {
    match a.mass.partial_cmp(&b.mass) {
        Some(std::cmp::Ordering::Less) => true,
        Some(std::cmp::Ordering::Equal) => a.controls < b.controls,
        _ => false,
    }
}

/// Schwarzschild exterior matching `bd` exactly; its mass is the Hawking
/// mass of the boundary sphere.
pub fn schwarzschild_extension(bd: &BoundaryData) -> Result<(RadialProfile, f64)> {
    if !(bd.mean_curvature > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "reference extension needs H > 0 (got {})",
            bd.mean_curvature
        )));
    }
    let r0 = bd.radius();
    let m = bd.hawking_mass();
    let p = SchwarzschildSlice { mass: m }.exterior(r0, TAIL_RADIUS_FACTOR * r0, 2000)?;
    Ok((p, m))
}

/// [`minimize_adm`] with extra starting points tried before the restarts.
pub fn minimize_adm_from(
    fam: &ExtensionFamily,
    cond: ConditionN,
    budget: usize,
    seed: u64,
    warm: &[Vec<f64>],
) -> Result<SearchResult> {
    if budget == 0 {
        return Err(Error::InvalidParameter("budget must be ≥ 1".into()));
    }
    if cond == ConditionN::NoHorizonsInUnion && fam.inner.is_none() {
        return Err(Error::InsufficientData("the union variant needs the inner region".into()));
    }
    if !(fam.boundary.mean_curvature > 0.0 && fam.boundary.area > 0.0) {
        return Ok(SearchResult::infeasible(fam, cond, 0, seed));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut evals = 0usize;
    let mut best: Option<Candidate> = None;
    let eval = |x: &[f64], evals: &mut usize| -> Result<Option<Candidate>> {
        *evals += 1;
        fam.feasible(x, cond)
    };
    let mut starts: Vec<Vec<f64>> = vec![fam.reference_controls()];
    starts.extend(warm.iter().map(|w| fam.project(w)));
    let mut start_idx = 0;
    while evals < budget {
        let x0 = if start_idx < starts.len() {
            starts[start_idx].clone()
        } else {
            fam.random_controls(&mut rng)
        };
        start_idx += 1;
        let Some(mut cur) = eval(&x0, &mut evals)? else { continue };
        let mut step = 0.25;
        while step >= MIN_STEP && evals < budget {
            let mut improved = false;
            'coords: for i in 0..fam.dim() {
                for sign in [-1.0, 1.0] {
                    if evals >= budget {
                        break 'coords;
                    }
                    let mut y = cur.controls.clone();
                    y[i] += sign * step;
                    let y = fam.project(&y);
                    if y == cur.controls {
                        continue;
                    }
                    if let Some(c) = eval(&y, &mut evals)? {
                        if better(&c, &cur) {
                            cur = c;
                            improved = true;
                            break 'coords;
                        }
                    }
                }
            }
            if !improved {
                step *= 0.5;
            }
        }
        if best.as_ref().map_or(true, |b| better(&cur, b)) {
            best = Some(cur);
        }
    }
    let Some(best) = best else {
        return Ok(SearchResult::infeasible(fam, cond, evals, seed));
    };
    let profile = fam.full_profile(&best)?;
    let adm_fit = adm_mass(&profile).ok().map(|m| m.adm_estimate);
    Ok(SearchResult {
        mass_estimate: best.mass,
        adm_fit,
        best_profile: Some(profile),
        best_controls: best.controls,
        condition: cond,
        boundary_type: fam.boundary_type,
        evaluations: evals,
        feasible: true,
        seed,
    })
}

/// Derivative-free minimization of the ADM mass over the family, subject
/// to `cond`. Starts from the Schwarzschild reference, then seeded random
/// restarts, each refined by coordinate pattern search.
pub fn minimize_adm(fam: &ExtensionFamily, cond: ConditionN, budget: usize, seed: u64) -> Result<SearchResult> {
    minimize_adm_from(fam, cond, budget, seed, &[])
}

/// Type 1, 2, 3 searches on one boundary. Each best candidate is also a
/// starting point of the next, looser type.
pub fn minimize_chain(base: &ExtensionFamily, cond: ConditionN, budget: usize, seed: u64) -> Result<[SearchResult; 3]> {
    let fam = |t| ExtensionFamily {
        boundary_type: t,
        ..base.clone()
    };
    let r1 = minimize_adm(&fam(BoundaryType::Type1), cond, budget, seed)?;
    let r2 = minimize_adm_from(&fam(BoundaryType::Type2), cond, budget, seed, &[r1.best_controls.clone()])?;
    let r3 = minimize_adm_from(
        &fam(BoundaryType::Type3),
        cond,
        budget,
        seed,
        &[r1.best_controls.clone(), r2.best_controls.clone()],
    )?;
    Ok([r1, r2, r3])
}

/// Outcome of [`upper_bound_check`]; `None` when the search was infeasible.
pub fn upper_bound_check(result: &SearchResult, bd: &BoundaryData, tol: f64) -> Option<bool> {
    result
        .feasible
        .then(|| result.mass_estimate <= (bd.area / (16.0 * std::f64::consts::PI)).sqrt() + tol)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OmHorizonReport {
    pub m_outward_minimizing: f64,
    pub m_no_horizons: f64,
    pub pass: bool,
    pub inconclusive: bool,
    /// Controls feasible under exactly one of the two conditions.
    pub containment_witness: Option<Vec<f64>>,
}

/// Minimizes under outward-minimizing and under no-surrounding-horizons
/// with one family and seed; passes iff `m_o ≥ m_h − tol`.
pub fn om_vs_horizon_experiment(fam: &ExtensionFamily, budget: usize, seed: u64, tol: f64) -> Result<OmHorizonReport> {
    let ro = minimize_adm(fam, ConditionN::OutwardMinimizing, budget, seed)?;
    let rh = minimize_adm(fam, ConditionN::NoSurroundingHorizons, budget, seed)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
    let mut witness = None;
    for _ in 0..budget {
        let x = fam.random_controls(&mut rng);
        let Ok(c) = fam.generate(&x) else { continue };
        if fam.satisfies(&c, ConditionN::OutwardMinimizing)? != fam.satisfies(&c, ConditionN::NoSurroundingHorizons)? {
            witness = Some(c.controls);
            break;
        }
    }
    let inconclusive = !(ro.feasible && rh.feasible);
    Ok(OmHorizonReport {
        m_outward_minimizing: ro.mass_estimate,
        m_no_horizons: rh.mass_estimate,
        pass: !inconclusive && ro.mass_estimate >= rh.mass_estimate - tol,
        inconclusive,
        containment_witness: witness,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EquivalenceReport {
    pub epsilon: f64,
    pub m3: f64,
    pub m1: f64,
    /// Mass of the smoothed best Type-3 candidate, an upper bound for `m̂¹`.
    pub m1_upper: f64,
    pub gap: f64,
    pub within: bool,
    /// The Type-3 minimizer already meets the inner region smoothly.
    pub trivially_equal: bool,
    pub n_epsilon: bool,
    pub strict_input: bool,
    pub strict_output: bool,
    pub smoothing: Option<SmoothingReport>,
    /// Smoothing of the input corner itself.
    pub input_smoothing: SmoothingReport,
}

/// Smooths the best Type-3 extension of the corner's inner region and
/// compares the Type-1 and Type-3 estimates.
pub fn equivalence_experiment(
    c: &CornerManifold,
    epsilon: f64,
    window: f64,
    budget: usize,
    seed: u64,
) -> Result<EquivalenceReport> {
    let class = c.classify(DEFAULT_SMOOTH_TOL).class;
    if class != CornerClass::Type3 {
        return Err(Error::Precondition(format!("equivalence experiment needs a Type-3 corner, got {class:?}")));
    }
    let cond = ConditionN::NEpsilon(epsilon);
    let r3 = minimize_adm(&ExtensionFamily::from_corner(c, BoundaryType::Type3), cond, budget, seed)?;
    let r1 = minimize_adm(&ExtensionFamily::from_corner(c, BoundaryType::Type1), cond, budget, seed)?;
    if !r3.feasible {
        return Err(Error::SearchExhausted("no feasible Type-3 candidate".into()));
    }
    let best = r3.best_profile.clone().expect("feasible result has a profile");
    let candidate = CornerManifold::new(c.inner.clone(), best.clone())?;
    let strict_input = check_condition(&best, ConditionN::StrictlyOutwardMinimizing)?.pass;
    let opts = SmoothingOptions::new(epsilon, window);
    let (m1_upper, smoothed_outer, smoothing) = if candidate.classify(DEFAULT_SMOOTH_TOL).class == CornerClass::Type1 {
        (r3.mass_estimate, best, None)
    } else {
        let sm = smooth_corner(&candidate, opts.clone())?;
        (sm.report.mass_after, sm.outer, Some(sm.report))
    };
    let input_smoothing = smooth_corner(c, opts)?.report;
    let n_epsilon = check_condition(&smoothed_outer, cond)?.pass;
    let strict_output = check_condition(&smoothed_outer, ConditionN::StrictlyOutwardMinimizing)?.pass;
    let m1 = r1.mass_estimate.min(m1_upper);
    let gap = (m1 - r3.mass_estimate).abs();
    Ok(EquivalenceReport {
        epsilon,
        m3: r3.mass_estimate,
        m1,
        m1_upper,
        gap,
        within: gap <= epsilon,
        trivially_equal: smoothing.is_none(),
        n_epsilon,
        strict_input,
        strict_output,
        smoothing,
        input_smoothing,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn round() -> BoundaryData {
        BoundaryData::new(4.0 * PI, 1.0).unwrap()
    }

    #[test]
    fn reference_masses() {
        let (_, m) = schwarzschild_extension(&round()).unwrap();
        assert!((m - 0.375).abs() < 1e-15);
        let (p, m) = schwarzschild_extension(&BoundaryData::new(4.0 * PI, 2.0).unwrap()).unwrap();
        assert!(m.abs() < 1e-15);
        assert!((p.dr()[0] - 1.0).abs() < 1e-15);
        assert!(schwarzschild_extension(&BoundaryData { area: 4.0 * PI, mean_curvature: 0.0 }).is_err());
    }

    #[test]
    fn reference_controls_reproduce_schwarzschild() {
        let fam = ExtensionFamily::new(round(), BoundaryType::Type2);
        let c = fam.generate(&fam.reference_controls()).unwrap();
        assert!((c.mass - 0.375).abs() < 1e-9, "{}", c.mass);
        let p = fam.full_profile(&c).unwrap();
        let fit = adm_mass(&p).unwrap().adm_estimate;
        assert!((fit - 0.375).abs() < 1e-3, "{fit}");
    }

    #[test]
    fn generated_profiles_have_nonnegative_curvature() {
        let fam = ExtensionFamily::new(round(), BoundaryType::Type3);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..20 {
            let Ok(c) = fam.generate(&fam.random_controls(&mut rng)) else { continue };
            let r0 = fam.boundary.radius();
            assert!((c.collar.r()[0] - r0).abs() < 1e-15);
            assert!(c.collar.dr()[0] <= fam.v_max() + 1e-15);
            for (i, &r) in crate::radial_geometry::scalar_curvature_nodes(&c.collar).iter().enumerate() {
                assert!(r >= -1e-12, "R = {r} at node {i}");
            }
        }
    }

    #[test]
    fn feasible_sets_nest_by_type() {
        let bd = round();
        let fams = [BoundaryType::Type1, BoundaryType::Type2, BoundaryType::Type3]
            .map(|t| ExtensionFamily::new(bd, t));
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let cond = ConditionN::OutwardMinimizing;
        for _ in 0..40 {
            let x = fams[2].random_controls(&mut rng);
            for k in 0..2 {
                if let Some(c) = fams[k].feasible(&x, cond).unwrap() {
                    let looser = fams[k + 1].feasible(&c.controls, cond).unwrap();
                    assert_eq!(looser.map(|l| l.mass), Some(c.mass));
                }
            }
        }
    }

    #[test]
    fn search_is_deterministic_and_bounded() {
        let fam = ExtensionFamily::new(round(), BoundaryType::Type3);
        let a = minimize_adm(&fam, ConditionN::OutwardMinimizing, 200, 7).unwrap();
        let b = minimize_adm(&fam, ConditionN::OutwardMinimizing, 200, 7).unwrap();
        assert_eq!(a, b);
        assert!(a.feasible);
        assert!(a.mass_estimate <= 0.375 + 1e-9);
        assert_eq!(upper_bound_check(&a, &round(), 1e-9), Some(true));
    }

    #[test]
    fn infeasible_data_gives_infinite_sentinel() {
        let fam = ExtensionFamily::new(BoundaryData { area: 4.0 * PI, mean_curvature: -1.0 }, BoundaryType::Type3);
        let r = minimize_adm(&fam, ConditionN::OutwardMinimizing, 10, 1).unwrap();
        assert!(!r.feasible);
        assert_eq!(r.mass_estimate, f64::INFINITY);
        assert_eq!(upper_bound_check(&r, &round(), 1e-3), None);
        assert!(minimize_adm(&fam, ConditionN::NoHorizonsInUnion, 10, 1).is_err());
    }

    #[test]
    fn monotone_family_gives_equal_masses() {
        let fam = ExtensionFamily {
            allow_necks: false,
            ..ExtensionFamily::new(round(), BoundaryType::Type3)
        };
        let rep = om_vs_horizon_experiment(&fam, 100, 5, 1e-3).unwrap();
        assert_eq!(rep.m_outward_minimizing, rep.m_no_horizons);
        assert!(rep.pass);
    }
}
