//! Acceptance criteria as library code, shared by the test suite and the
//! `verify` subcommand. Each check returns measured values alongside the
//! verdict; thresholds are pinned here.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use std::f64::consts::PI;
use std::time::Instant;

use crate::bartnik_search::{equivalence_experiment, minimize_chain, upper_bound_check, BoundaryType, ExtensionFamily};
use crate::conformal_deform::{perturb_boundary, step1_harmonic, R_FLOOR};
use crate::error::Result;
use crate::horizon_analysis::{
    check_condition, lattice_violation, outermost_surrounding_horizon, ConditionN,
};
use crate::local_extension::{bump, extend_local};
use crate::masses::{adm_flux, adm_mass};
use crate::numerics::linear_fit;
use crate::radial_geometry::{
    flat_ball, flat_exterior, hawking_mass_of, scalar_curvature_of, BoundaryData, CoordMetric, CornerClass,
    CornerManifold, RadialProfile, SchwarzschildSlice, DEFAULT_DECAY_P, DEFAULT_SMOOTH_TOL,
};
use crate::smoothing_pipeline::{collar_glue, smooth_corner, GlueConfig, SmoothingOptions};

pub const CRITERIA: usize = 12;

/// Criteria that are expected to fail, with the reason.
pub const EXPECTED_RED: &[(u8, &str)] = &[(
    12,
    "no rotationally symmetric asymptotically flat profile has no surrounding horizon yet fails \
     outward-minimizing: a dip below r(0) forces an interior minimum of r, which is a minimal sphere",
)];

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CriterionResult {
    pub id: u8,
    pub name: &'static str,
    pub pass: bool,
    pub seconds: f64,
    pub detail: String,
}

fn timed(id: u8, name: &'static str, f: impl FnOnce() -> Result<(bool, String)>) -> CriterionResult {
    let t = Instant::now();
    let (pass, detail) = match f() {
        Ok(v) => v,
        Err(e) => (false, format!("error: {e}")),
    };
    CriterionResult {
        id,
        name,
        pass,
        seconds: t.elapsed().as_secs_f64(),
        detail,
    }
}

fn with_budget(mut r: CriterionResult, limit: f64) -> CriterionResult {
    if r.seconds >= limit {
        r.pass = false;
        r.detail.push_str(&format!("; runtime {:.2}s over {limit}s", r.seconds));
    }
    r
}

/// The flat unit ball glued to the Schwarzschild exterior of mass `m`.
pub fn ball_corner(m: f64) -> Result<CornerManifold> {
    let inner = flat_ball(1.0, 0.1, 300)?;
    let outer = SchwarzschildSlice { mass: m }.exterior(1.0, 400.0, 1500)?;
    CornerManifold::new(inner, outer)
}

/// Round-sphere cap of radius `a` ending at `s = 0` where `r' = cos(σ₁/a)`.
pub fn spherical_cap(a: f64, sigma1: f64, n: usize) -> Result<RadialProfile> {
    let lo = 0.05 * sigma1;
    let (mut s, mut r, mut dr, mut ddr) = (vec![], vec![], vec![], vec![]);
    for i in 0..n {
        let x = lo + (sigma1 - lo) * i as f64 / (n - 1) as f64;
        s.push(x - sigma1);
        r.push(a * (x / a).sin());
        dr.push((x / a).cos());
        ddr.push(-(x / a).sin() / a);
    }
    RadialProfile::new(s, r, dr, ddr, DEFAULT_DECAY_P)
}

/// Profile dipping from `r0` to about `(1 − depth)·r0` on `[0, 2]`, then
/// growing as `x⁴/(64 + x³)` to an asymptotically flat end.
pub fn neck_profile(r0: f64, depth: f64) -> Result<RadialProfile> {
    let n = 1500;
    let l = 2.0;
    let k = PI / l;
    let c = 64.0;
    let (mut s, mut r, mut dr, mut ddr) = (vec![], vec![], vec![], vec![]);
    for i in 0..n {
        let x = 400.0 * (i as f64 / (n - 1) as f64).powi(2);
        let a = depth * r0;
        let (d0, d1, d2) = if x < l {
            (a * (k * x).sin().powi(2), a * k * (2.0 * k * x).sin(), 2.0 * a * k * k * (2.0 * k * x).cos())
        } else {
            (0.0, 0.0, 0.0)
        };
        let x3 = x * x * x;
        let g = x3 * x / (c + x3);
        let g1 = (4.0 * c * x3 + x3 * x3) / (c + x3).powi(2);
        let g2 = 6.0 * c * x * x * (2.0 * c - x3) / (c + x3).powi(3);
        s.push(x);
        r.push(r0 - d0 + g);
        dr.push(-d1 + g1);
        ddr.push(-d2 + g2);
    }
    RadialProfile::new(s, r, dr, ddr, DEFAULT_DECAY_P)
}

/// `r' = (s−c)²/(1 + (s−c)²)`: outward-minimizing with a tangential
/// minimal sphere at `s = c`.
pub fn tangent_profile(r0: f64, c: f64) -> Result<RadialProfile> {
    let n = 1200;
    let mut s: Vec<f64> = (0..n).map(|i| 200.0 * (i as f64 / (n - 1) as f64).powi(2)).collect();
    // a node exactly on the tangency
    let at = s.partition_point(|&x| x < c);
    if s[at] != c {
        s.insert(at, c);
    }
    let r = s.iter().map(|&x| r0 + x - ((x - c).atan() - (-c).atan())).collect();
    let dr = s.iter().map(|&x| (x - c).powi(2) / (1.0 + (x - c).powi(2))).collect();
    let ddr = s.iter().map(|&x| 2.0 * (x - c) / (1.0 + (x - c).powi(2)).powi(2)).collect();
    RadialProfile::new(s, r, dr, ddr, DEFAULT_DECAY_P)
}

/// Random Type-3 corner: spherical cap inside, a positive-curvature
/// extension with `0 < H₊ < H₋` outside.
pub fn random_type3_corner(rng: &mut ChaCha8Rng) -> Result<CornerManifold> {
    loop {
        let a = rng.gen_range(0.5..2.0);
        let sigma1 = a * rng.gen_range(0.2..1.3);
        let inner = spherical_cap(a, sigma1, 200)?;
        let r0 = *inner.r().last().unwrap();
        let h_minus = 2.0 * inner.dr().last().unwrap() / r0;
        let fam = ExtensionFamily {
            allow_necks: false,
            ..ExtensionFamily::new(BoundaryData::new(4.0 * PI * r0 * r0, h_minus)?, BoundaryType::Type3)
        };
        let mut x = fam.random_controls(rng);
        x[fam.n_controls] = rng.gen_range(0.05..0.95);
        let Ok(c) = fam.generate(&x) else { continue };
        let outer = fam.full_profile(&c)?;
        return CornerManifold::new(inner, outer);
    }
}

/// Random extension whose boundary starts contracting, so that it contains
/// a surrounding minimal sphere.
pub fn random_horizon_profile(rng: &mut ChaCha8Rng) -> Result<RadialProfile> {
    loop {
        let r0 = rng.gen_range(0.5..3.0);
        let h = rng.gen_range(0.3..1.8) / r0;
        let fam = ExtensionFamily::new(BoundaryData::new(4.0 * PI * r0 * r0, h)?, BoundaryType::Type3);
        let mut x = fam.random_controls(rng);
        for t in x.iter_mut().take(fam.n_controls) {
            *t = 0.3 + 0.7 * *t;
        }
        x[fam.n_controls] = rng.gen_range(-0.9..-0.1);
        let Ok(c) = fam.generate(&x) else { continue };
        let p = fam.full_profile(&c)?;
        if outermost_surrounding_horizon(&p).is_some() {
            return Ok(p);
        }
    }
}

/// Profiles used by the monotonicity and lattice checks.
pub fn condition_corpus(seed: u64) -> Result<Vec<RadialProfile>> {
    let mut out = vec![
        flat_exterior(1.0, 1e3, 400)?,
        SchwarzschildSlice { mass: 1.0 }.exterior(3.0, 1e3, 400)?,
        SchwarzschildSlice { mass: 1.0 }.through_throat(4.0, 1e3, 800)?,
        SchwarzschildSlice { mass: -0.5 }.exterior(1.0, 1e3, 400)?,
    ];
    for depth in [0.02, 0.05, 0.1, 0.2, 0.3, 0.45] {
        out.push(neck_profile(1.0, depth)?);
    }
    for c in [0.5, 1.0, 2.0, 4.0] {
        out.push(tangent_profile(1.0, c)?);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    while out.len() < 22 {
        out.push(random_type3_corner(&mut rng)?.outer);
    }
    while out.len() < 30 {
        out.push(random_horizon_profile(&mut rng)?);
    }
    Ok(out)
}

pub fn criterion_1() -> CriterionResult {
    let r = timed(1, "curvature oracle", || {
        let flat = flat_exterior(1.0, 1e3, 2000)?;
        let schw = SchwarzschildSlice { mass: 1.0 }.exterior(2.5, 1e3, 2000)?;
        // nodes and interval midpoints through the interpolant
        let max_r = |p: &RadialProfile| -> Result<f64> {
            let mut m: f64 = 0.0;
            for i in 0..p.len() {
                m = m.max(scalar_curvature_of(p.node(i)).abs());
                if i + 1 < p.len() {
                    let mid = 0.5 * (p.s()[i] + p.s()[i + 1]);
                    m = m.max(scalar_curvature_of(p.eval(mid)?).abs());
                }
            }
            Ok(m)
        };
        let (rf, rs) = (max_r(&flat)?, max_r(&schw)?);
        let mut spread: f64 = 0.0;
        for i in 0..schw.len() {
            spread = spread.max((hawking_mass_of(schw.node(i)) - 1.0).abs());
        }
        Ok((
            rf <= 1e-6 && rs <= 1e-6 && spread <= 1e-6,
            format!("max|R| flat {rf:.2e}, schwarzschild {rs:.2e}; m_H spread {spread:.2e}"),
        ))
    });
    with_budget(r, 1.0)
}

pub fn criterion_2() -> CriterionResult {
    timed(2, "ADM estimator", || {
        let schw = SchwarzschildSlice { mass: 1.0 }.exterior(3.0, 1e4, 3000)?;
        let flat = flat_exterior(1.0, 1e4, 3000)?;
        let ms = adm_mass(&schw)?;
        let mf = adm_mass(&flat)?;
        let flux = adm_flux(&schw, 5e3)?;
        let ok = (ms.adm_estimate - 1.0).abs() <= 1e-3
            && ms.fit_residual < 1e-4
            && mf.adm_estimate.abs() <= 1e-4
            && (flux - ms.adm_estimate).abs() <= 3e-3;
        Ok((
            ok,
            format!(
                "schwarzschild {:.8} (residual {:.1e}), flat {:.1e}, flux {:.8}",
                ms.adm_estimate, ms.fit_residual, mf.adm_estimate, flux
            ),
        ))
    })
}

pub fn criterion_3() -> CriterionResult {
    timed(3, "local extension bounds", || {
        let sl = SchwarzschildSlice { mass: 1.0 };
        let interior = sl.on_range(0.0, sl.s_of_r(3.0), 200)?;
        let interior = interior.shifted(interior.s_range().1);
        let mut worst = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY);
        for inner in [flat_ball(1.0, 0.05, 200)?, interior] {
            let ext = extend_local(&inner, 0.5)?;
            let (h0, k0) = (ext.params.h0, ext.params.kappa0);
            let t = ext.warped.t();
            let rho = ext.warped.rho();
            for i in 1..t.len() {
                let b = bump(t[i])?;
                // ρ² − 1 ≤ (4/h₀)·t·e^{−1/t}
                let rho_gap = ext.rho2_minus_1[i] - 4.0 / h0 * t[i] * b;
                let lower = b / (rho[i] * rho[i]) * (2.0 - 8.0 * k0 * t[i] / h0);
                worst.0 = worst.0.min(ext.r_tilde[i]);
                worst.1 = worst.1.max(rho_gap);
                worst.2 = worst.2.min(ext.r_tilde[i] - lower);
            }
        }
        Ok((
            worst.0 > 0.0 && worst.1 <= 0.0 && worst.2 >= -1e-12,
            format!("min R̃ {:.3e}, max ρ² excess {:.1e}, min R̃ − bound {:.1e}", worst.0, worst.1, worst.2),
        ))
    })
}

pub fn criterion_4() -> CriterionResult {
    timed(4, "conformal perturbation", || {
        let schw = SchwarzschildSlice { mass: 1.0 }.exterior(3.0, 1e3, 2000)?;
        let out = perturb_boundary(&schw, 1e-2, 2)?;
        let flat = flat_exterior(1.0, 1e3, 800)?;
        let mut closed = 0.0f64;
        for a in [0.5, 0.9, 0.99] {
            let (_, rep) = step1_harmonic(&flat, a)?;
            closed = closed.max((rep.adm_estimate - 2.0 * a * (1.0 - a)).abs());
        }
        let m0 = adm_mass(&schw)?.adm_estimate;
        let gaps = [1e-1, 1e-2, 1e-3];
        let mut lx = vec![];
        let mut ly = vec![];
        for g in gaps {
            let (_, rep) = step1_harmonic(&schw, 1.0 - g)?;
            lx.push(g.ln());
            ly.push((rep.adm_estimate - m0).abs().ln());
        }
        let (_, order, _) = linear_fit(&lx, &ly);
        Ok((
            out.conclusions.all() && closed <= 1e-6 && order >= 0.9,
            format!(
                "conclusions {:?}, closed-form error {closed:.1e}, shift order {order:.3}",
                out.conclusions.passes
            ),
        ))
    })
}

pub fn criterion_5() -> CriterionResult {
    timed(5, "gluing rates", || {
        let g = CoordMetric::from_profile(&SchwarzschildSlice { mass: 0.1 }.exterior(1.0, 4.0, 6000)?);
        let gt = CoordMetric::from_profile(&flat_exterior(1.0, 5.0, 4000)?);
        let lams = [10.0, 20.0, 40.0, 80.0];
        let mut lx = vec![];
        let mut ly = vec![];
        let mut branch_ok = true;
        let mut exact = true;
        for &l in &lams {
            let out = collar_glue(&g, &gt, &GlueConfig::new(l, 1.0))?;
            lx.push(f64::ln(l));
            ly.push(out.c0_from_g.ln());
            branch_ok &= out.lower_branch_gap <= l * (-2.0 * l * l).exp();
            exact &= out.exact_near && out.exact_far;
        }
        let (_, slope, _) = linear_fit(&lx, &ly);
        Ok((
            (slope + 1.0).abs() <= 0.1 && branch_ok && exact,
            format!("C0 slope {slope:.4}, branch bound {branch_ok}, exact ends {exact}"),
        ))
    })
}

pub fn criterion_6() -> CriterionResult {
    let r = timed(6, "end-to-end smoothing", || {
        let eps = 1e-2;
        let c = ball_corner(0.1)?;
        let sm = smooth_corner(&c, SmoothingOptions::new(eps, 1.0))?;
        let rep = &sm.report;
        let ok = rep.min_scalar >= R_FLOOR
            && rep.c0_change < eps
            && rep.c2_change_outside_window < eps
            && (rep.mass_after - rep.mass_before).abs() < eps
            && rep.inner_identical
            && rep.output_type1;
        Ok((
            ok,
            format!(
                "min R {:.2e}, C0 {:.2e}, C2 outside {:.2e}, Δm {:.2e}, inner identical {}, type 1 {}",
                rep.min_scalar,
                rep.c0_change,
                rep.c2_change_outside_window,
                rep.mass_after - rep.mass_before,
                rep.inner_identical,
                rep.output_type1
            ),
        ))
    });
    with_budget(r, 30.0)
}

pub fn criterion_7() -> CriterionResult {
    timed(7, "positive mass with corners", || {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let mut worst = f64::INFINITY;
        let mut all_ok = true;
        for _ in 0..20 {
            let c = random_type3_corner(&mut rng)?;
            all_ok &= c.classify(DEFAULT_SMOOTH_TOL).class == CornerClass::Type3 && c.h_plus > 0.0;
            worst = worst.min(adm_mass(&c.outer)?.adm_estimate);
        }
        Ok((all_ok && worst >= -1e-3, format!("min ADM {worst:.4e} over 20 corners")))
    })
}

pub fn criterion_8() -> CriterionResult {
    timed(8, "Penrose-style bound", || {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let mut worst = f64::INFINITY;
        for _ in 0..10 {
            let p = random_horizon_profile(&mut rng)?;
            let s_h = outermost_surrounding_horizon(&p).expect("generator guarantees a horizon");
            let r_h = p.eval(s_h)?.v;
            let bound = (4.0 * PI * r_h * r_h / (16.0 * PI)).sqrt();
            worst = worst.min(adm_mass(&p)?.adm_estimate - bound);
        }
        Ok((worst >= -1e-3, format!("min ADM − √(A_h/16π) = {worst:.4e} over 10 profiles")))
    })
}

pub fn criterion_9() -> CriterionResult {
    timed(9, "Hawking monotonicity", || {
        let mut checked = 0;
        let (mut drop, mut deriv): (f64, f64) = (0.0, 0.0);
        for p in condition_corpus(9)? {
            let nodes_ok = (0..p.len()).all(|i| scalar_curvature_of(p.node(i)) >= -1e-9 && p.dr()[i] >= 0.0);
            if !nodes_ok {
                continue;
            }
            checked += 1;
            for i in 1..p.len() {
                drop = drop.max(hawking_mass_of(p.node(i - 1)) - hawking_mass_of(p.node(i)));
            }
            // centered difference of m_H against (r² r'/4)·R inside each interval
            for i in 0..p.len() - 1 {
                let (a, b) = (p.s()[i], p.s()[i + 1]);
                let x = 0.5 * (a + b);
                let h = 1e-3 * (b - a);
                let fd = (hawking_mass_of(p.eval(x + h)?) - hawking_mass_of(p.eval(x - h)?)) / (2.0 * h);
                let j = p.eval(x)?;
                let rhs = j.v * j.v * j.d1 / 4.0 * scalar_curvature_of(j);
                deriv = deriv.max((fd - rhs).abs());
            }
        }
        Ok((
            checked >= 10 && drop <= 1e-6 && deriv <= 1e-6,
            format!("{checked} profiles, max m_H drop {drop:.1e}, max derivative mismatch {deriv:.1e}"),
        ))
    })
}

pub fn criterion_10() -> CriterionResult {
    let r = timed(10, "optimizer chain and bounds", || {
        let bd = BoundaryData::new(4.0 * PI, 1.0)?;
        let [r1, r2, r3] = minimize_chain(&ExtensionFamily::new(bd, BoundaryType::Type3), ConditionN::OutwardMinimizing, 2000, 7)?;
        let (m1, m2, m3) = (r1.mass_estimate, r2.mass_estimate, r3.mass_estimate);
        let ok = r1.feasible
            && r2.feasible
            && r3.feasible
            && m1 >= m2
            && m2 >= m3
            && m3 >= -1e-3
            && m3 <= 0.375 + 1e-2
            && upper_bound_check(&r3, &bd, 1e-9) == Some(true);
        Ok((ok, format!("m1 {m1:.6}, m2 {m2:.6}, m3 {m3:.6}, bound 0.5")))
    });
    with_budget(r, 60.0)
}

pub fn criterion_11() -> CriterionResult {
    timed(11, "type equivalence", || {
        let eps = 1e-2;
        let rep = equivalence_experiment(&ball_corner(0.1)?, eps, 1.0, 2000, 7)?;
        let slack = 1e-3;
        let strict_ok = !rep.strict_input || rep.strict_output;
        let input_ok = rep.input_smoothing.passes(eps);
        Ok((
            rep.gap <= eps + slack && rep.n_epsilon && strict_ok && input_ok,
            format!(
                "m1 {:.6}, m3 {:.6}, gap {:.2e}, N_ε {}, strict {}→{}, trivial {}, input corner Δm {:.2e}",
                rep.m1,
                rep.m3,
                rep.gap,
                rep.n_epsilon,
                rep.strict_input,
                rep.strict_output,
                rep.trivially_equal,
                rep.input_smoothing.mass_after - rep.input_smoothing.mass_before
            ),
        ))
    })
}

pub fn criterion_12() -> CriterionResult {
    timed(12, "condition lattice", || {
        let corpus = condition_corpus(12)?;
        let eps = [0.0, 1e-3, 1e-2, 0.1, 1.0, 10.0];
        let mut violations = vec![];
        let (mut om_not_nsh, mut nsh_not_om) = (0, 0);
        for (i, p) in corpus.iter().enumerate() {
            if let Some(v) = lattice_violation(p, &eps)? {
                violations.push(format!("#{i}: {v}"));
            }
            let om = check_condition(p, ConditionN::OutwardMinimizing)?.pass;
            let nsh = check_condition(p, ConditionN::NoSurroundingHorizons)?.pass;
            om_not_nsh += (om && !nsh) as usize;
            nsh_not_om += (nsh && !om) as usize;
        }
        Ok((
            violations.is_empty() && om_not_nsh > 0 && nsh_not_om > 0,
            format!(
                "{} profiles, {} lattice violations, witnesses: OM∧¬NSH {om_not_nsh}, NSH∧¬OM {nsh_not_om}",
                corpus.len(),
                violations.len()
            ),
        ))
    })
}

pub fn run(id: u8) -> Option<CriterionResult> {
    Some(match id {
        1 => criterion_1(),
        2 => criterion_2(),
        3 => criterion_3(),
        4 => criterion_4(),
        5 => criterion_5(),
        6 => criterion_6(),
        7 => criterion_7(),
        8 => criterion_8(),
        9 => criterion_9(),
        10 => criterion_10(),
        11 => criterion_11(),
        12 => criterion_12(),
        _ => return None,
    })
}

pub fn run_all() -> Vec<CriterionResult> {
    (1..=CRITERIA as u8).filter_map(run).collect()
}

/// One line per criterion.
pub fn format_line(r: &CriterionResult) -> String {
    format!(
        "[{}] {:>2} {:<28} {:>7.2}s  {}",
        if r.pass { "PASS" } else { "FAIL" },
        r.id,
        r.name,
        r.seconds,
        r.detail
    )
}
