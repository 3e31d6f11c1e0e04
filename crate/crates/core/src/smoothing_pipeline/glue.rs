use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::jet::Jet;
use crate::numerics::smoothstep;
use crate::radial_geometry::{arclength_jet, mean_curvature_of, CoordMetric};

/// `χ` is the identity on `[0, inner]`, with `χ'` falling smoothly from 1
/// to 0 across `[inner, outer]`; so `χ` is bounded, concave and constant
/// beyond `outer`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChiCutoff {
    pub inner: f64,
    pub outer: f64,
}

/// `β` is a C² bump `p³` supported in `(lo, hi)`, with maximum 1.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BetaBump {
    pub lo: f64,
    pub hi: f64,
}

impl Default for ChiCutoff {
    fn default() -> Self {
        ChiCutoff { inner: 1.0, outer: 2.0 }
    }
}

impl Default for BetaBump {
    fn default() -> Self {
        BetaBump { lo: -2.0, hi: -0.5 }
    }
}

/// `∫₀^v S` for the quintic smoothstep, continued linearly past 1.
fn smoothstep_integral(v: f64) -> f64 {
    if v <= 0.0 {
        0.0
    } else if v >= 1.0 {
        0.5 + (v - 1.0)
    } else {
        v * v * v * v * (2.5 + v * (-3.0 + v))
    }
}

impl ChiCutoff {
    /// `(χ, χ', χ'')` at `s ≥ 0`.
    pub fn eval(&self, s: f64) -> [f64; 3] {
        if s <= self.inner {
            return [s, 1.0, 0.0];
        }
        let w = self.outer - self.inner;
        let v = (s - self.inner) / w;
        let st = smoothstep(Jet::var(v));
        [s - w * smoothstep_integral(v), 1.0 - st.v, -st.d1 / w]
    }

    /// `G(s) = χ(s)/s` composed with a jet of `s`.
    pub fn g_ratio(&self, s: Jet) -> Jet {
        if s.v <= self.inner {
            return Jet::constant(1.0);
        }
        let c = self.eval(s.v);
        s.lift(c[0], c[1], c[2]) / s
    }

    pub fn sup(&self) -> f64 {
        self.inner + 0.5 * (self.outer - self.inner)
    }
}

impl BetaBump {
    pub fn eval(&self, u: f64) -> f64 {
        if u <= self.lo || u >= self.hi {
            return 0.0;
        }
        let half = 0.5 * (self.hi - self.lo);
        let p = (u - self.lo) * (self.hi - u) / (half * half);
        p * p * p
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GlueConfig {
    pub lambda: f64,
    pub chi: ChiCutoff,
    pub beta: BetaBump,
    /// Distance from the gluing sphere beyond which `T` vanishes.
    pub window: f64,
    /// `T` is uncut on `[0, flat_fraction·window]`.
    pub flat_fraction: f64,
}

impl GlueConfig {
    pub fn new(lambda: f64, window: f64) -> Self {
        GlueConfig {
            lambda,
            chi: ChiCutoff::default(),
            beta: BetaBump::default(),
            window,
            flat_fraction: 0.5,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.lambda > 0.0) || !(self.window > 0.0) {
            return Err(Error::Config(format!(
                "lambda and window must be positive (got {}, {})",
                self.lambda, self.window
            )));
        }
        if !(self.flat_fraction > 0.0 && self.flat_fraction < 1.0) {
            return Err(Error::Config(format!("flat fraction must lie in (0, 1) (got {})", self.flat_fraction)));
        }
        if !(self.chi.inner > 0.0 && self.chi.outer > self.chi.inner) {
            return Err(Error::Config(format!("χ needs 0 < inner < outer (got {:?})", self.chi)));
        }
        if !(self.beta.lo >= -2.0 && self.beta.hi <= -0.5 && self.beta.lo < self.beta.hi) {
            return Err(Error::Config(format!("β support must lie in [−2, −1/2] (got {:?})", self.beta)));
        }
        Ok(())
    }

    /// Cutoff `ζ` of `T = ζ·(g̃ − g)/dist`: 1 on `[0, f·w]`, 0 beyond `w`.
    pub fn zeta(&self, d: Jet) -> Jet {
        let lo = self.flat_fraction * self.window;
        Jet::constant(1.0) - smoothstep((d - lo).scale(1.0 / (self.window - lo)))
    }

    /// `e^{−λ²}`, the switch between the two branches.
    pub fn branch_point(&self) -> f64 {
        (-self.lambda * self.lambda).exp()
    }
}

/// Output of [`collar_glue`].
#[derive(Debug, Clone, PartialEq)]
pub struct GlueOutput {
    pub metric: CoordMetric,
    /// Arc length from the gluing sphere in `g`.
    pub dist: Vec<f64>,
    /// Sup over nodes with `dist ≥ e^{−λ²}` of the relative C⁰ gap to `g`.
    pub c0_from_g: f64,
    /// Sup over a log-spaced sample of the inner branch of the gap to `g̃`.
    pub lower_branch_gap: f64,
    /// Every node with `λ·dist ≤ inner` and `ζ = 1` equals `g̃` bitwise.
    pub exact_near: bool,
    /// Every node with `ζ = 0` equals `g` bitwise.
    pub exact_far: bool,
}

fn rel_gap(a1: f64, q1: f64, a2: f64, q2: f64) -> f64 {
    ((a2 - a1) / a1).abs().max(((q2 - q1) / q1).abs())
}

/// Glues `g` (outer) to `g̃` (boundary-side) along the sphere at the first
/// node of `g`, where the two metrics coincide. Both are given in the same
/// coordinate; `g̃` must cover the window.
pub fn collar_glue(g: &CoordMetric, g_tilde: &CoordMetric, cfg: &GlueConfig) -> Result<GlueOutput> {
    cfg.validate()?;
    let y0 = g.x()[0];
    let (ga, gr) = (g.a_node(0), g.r_node(0));
    let (ta, tr) = g_tilde.eval(y0)?;
    if rel_gap(ga.v, gr.v * gr.v, ta.v, tr.v * tr.v) > 1e-10 {
        return Err(Error::Precondition("metrics differ on the gluing sphere".into()));
    }
    let h_g = g.mean_curvature_node(0);
    let h_t = mean_curvature_of(arclength_jet(ta, tr));
    if !(h_g < h_t) {
        return Err(Error::Precondition(format!(
            "mean curvature ordering violated: outer {h_g} is not below inner {h_t}"
        )));
    }
    let n = g.len();
    let dist = g.arclength();
    let lam = cfg.lambda;
    let switch = cfg.branch_point();
    let mut a_out = Vec::with_capacity(n);
    let mut r_out = Vec::with_capacity(n);
    let mut c0: f64 = 0.0;
    let mut exact_near = true;
    let mut exact_far = true;
    for i in 0..n {
        let y = g.x()[i];
        let (a, r) = (g.a_node(i), g.r_node(i));
        let sa = a.sqrt();
        let d = Jet::new(dist[i], sa.v, sa.d1);
        let zeta = cfg.zeta(d);
        if zeta.v == 0.0 && zeta.d1 == 0.0 && zeta.d2 == 0.0 {
            a_out.push(a);
            r_out.push(r);
            continue;
        }
        let (at, rt) = g_tilde.eval(y)?;
        let gr = cfg.chi.g_ratio(d.scale(lam));
        let take_tilde = d.v < switch || (gr.v == 1.0 && gr.d1 == 0.0 && zeta.v == 1.0 && zeta.d1 == 0.0);
        let (ah, rh) = if take_tilde {
            // inner branch: deviation below λe^{−2λ²}, far under one ulp
            (at, rt)
        } else {
            let f = gr * zeta;
            let ah = a + f * (at - a);
            let q = r * r;
            let qh = q + f * (rt * rt - q);
            (ah, qh.sqrt())
        };
        if d.v >= switch {
            c0 = c0.max(rel_gap(a.v, r.v * r.v, ah.v, rh.v * rh.v));
        }
        a_out.push(ah);
        r_out.push(rh);
    }
    for i in 0..n {
        let d = dist[i];
        let zeta = cfg.zeta(Jet::constant(d)).v;
        if lam * d <= cfg.chi.inner && zeta == 1.0 {
            let (at, rt) = g_tilde.eval(g.x()[i])?;
            exact_near &= a_out[i] == at && r_out[i] == rt;
        }
        if d >= cfg.window {
            exact_far &= a_out[i] == g.a_node(i) && r_out[i] == g.r_node(i);
        }
    }
    let lower_branch_gap = lower_branch_gap(g, g_tilde, cfg)?;
    Ok(GlueOutput {
        metric: CoordMetric::from_jets(g.x().to_vec(), &a_out, &r_out)?,
        dist,
        c0_from_g: c0,
        lower_branch_gap,
        exact_near,
        exact_far,
    })
}

/// Relative gap `λ·d·β(λ⁻² ln d)·|N(d)|` on `d ∈ (e^{−2λ²}, e^{−λ²})`, with
/// `N` linearised at the sphere (both metrics agree there).
fn lower_branch_gap(g: &CoordMetric, g_tilde: &CoordMetric, cfg: &GlueConfig) -> Result<f64> {
    let y0 = g.x()[0];
    let (a, r) = (g.a_node(0), g.r_node(0));
    let (at, rt) = g_tilde.eval(y0)?;
    let sa = a.v.sqrt();
    let na = (at.d1 - a.d1) / sa / a.v;
    let nq = (2.0 * rt.v * rt.d1 - 2.0 * r.v * r.d1) / sa / (r.v * r.v);
    let slope = na.abs().max(nq.abs());
    let lam = cfg.lambda;
    let mut worst: f64 = 0.0;
    for k in 0..=64 {
        let ln_d = -lam * lam * (1.0 + k as f64 / 64.0);
        let d = ln_d.exp();
        if d == 0.0 {
            continue;
        }
        let gap = lam * d * cfg.beta.eval(ln_d / (lam * lam)) * slope * d;
        worst = worst.max(gap);
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chi_is_concave_and_bounded() {
        let c = ChiCutoff::default();
        let mut prev = c.eval(0.0)[0];
        for k in 1..400 {
            let s = 0.01 * k as f64;
            let v = c.eval(s);
            assert!(v[2] <= 0.0);
            assert!(v[0] >= prev - 1e-15);
            assert!(v[0] <= c.sup() + 1e-15);
            prev = v[0];
        }
        assert_eq!(c.eval(0.7), [0.7, 1.0, 0.0]);
        assert!((c.eval(2.0)[0] - 1.5).abs() < 1e-15);
        assert_eq!(c.eval(3.0)[1], 0.0);
        let h = 1e-6;
        for &s in &[1.2, 1.5, 1.9] {
            let fd = (c.eval(s + h)[0] - c.eval(s - h)[0]) / (2.0 * h);
            assert!((fd - c.eval(s)[1]).abs() < 1e-8);
        }
    }

    #[test]
    fn beta_support() {
        let b = BetaBump::default();
        assert_eq!(b.eval(-2.0), 0.0);
        assert_eq!(b.eval(-0.5), 0.0);
        assert!((b.eval(-1.25) - 1.0).abs() < 1e-15);
        assert!(b.eval(-1.0) > 0.0);
    }

    #[test]
    fn config_contract() {
        assert!(GlueConfig::new(8.0, 1.0).validate().is_ok());
        let mut c = GlueConfig::new(8.0, 1.0);
        c.chi = ChiCutoff { inner: 2.0, outer: 1.0 };
        assert!(matches!(c.validate(), Err(Error::Config(_))));
        let mut c = GlueConfig::new(8.0, 1.0);
        c.beta = BetaBump { lo: -3.0, hi: -1.0 };
        assert!(matches!(c.validate(), Err(Error::Config(_))));
    }

    fn pair() -> (CoordMetric, CoordMetric) {
        use crate::radial_geometry::{flat_exterior, SchwarzschildSlice};
        let g = CoordMetric::from_profile(&SchwarzschildSlice { mass: 0.1 }.exterior(1.0, 4.0, 6000).unwrap());
        let gt = CoordMetric::from_profile(&flat_exterior(1.0, 5.0, 4000).unwrap());
        (g, gt)
    }

    #[test]
    fn c0_gap_decays_like_inverse_lambda() {
        let (g, gt) = pair();
        let lams = [10.0, 20.0, 40.0, 80.0];
        let gaps: Vec<f64> = lams
            .iter()
            .map(|&l| collar_glue(&g, &gt, &GlueConfig::new(l, 1.0)).unwrap().c0_from_g)
            .collect();
        let lx: Vec<f64> = lams.iter().map(|l: &f64| l.ln()).collect();
        let ly: Vec<f64> = gaps.iter().map(|v| v.ln()).collect();
        let (_, slope, _) = crate::numerics::linear_fit(&lx, &ly);
        assert!((slope + 1.0).abs() <= 0.1, "slope {slope}, gaps {gaps:?}");
    }

    #[test]
    fn exact_on_both_ends() {
        let (g, gt) = pair();
        let out = collar_glue(&g, &gt, &GlueConfig::new(10.0, 1.0)).unwrap();
        assert!(out.exact_near && out.exact_far);
        assert_eq!(out.metric.a_node(0), gt.a_node(0));
        // λ e^{−2λ²} at λ = 10 is about 1.4e−86
        let bound = 10.0 * (-200.0f64).exp();
        assert!(out.lower_branch_gap <= bound);
        assert!(out.lower_branch_gap > 0.0);
    }

    #[test]
    fn ordering_violation_is_rejected() {
        let (g, gt) = pair();
        let e = collar_glue(&gt, &g, &GlueConfig::new(10.0, 1.0)).unwrap_err();
        assert!(e.is_precondition());
    }

    #[test]
    fn identical_metrics_are_unchanged() {
        let (_, gt) = pair();
        let out = collar_glue(&gt, &gt, &GlueConfig::new(10.0, 1.0));
        // equal mean curvatures violate the strict ordering
        assert!(out.is_err());
    }
}
