//! Collar extension of an allowable region with strictly positive scalar
//! curvature, via the warp `ρ(t) = exp(h₀⁻¹ ∫₀ᵗ e^{−1/τ} dτ)`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::jet::Jet;
use crate::numerics::{adaptive_simpson, Hermite5};
use crate::radial_geometry::{
    gauss_curvature_of, mean_curvature_of, scalar_curvature_of, CoordMetric, RadialProfile, WarpedProfile,
};

/// Smallest positive collar node; `e^{−1/t}` is subnormal or zero below ~1/708.
pub const T_MIN: f64 = 1.0 / 700.0;

/// Interior collar nodes per extension.
pub const COLLAR_NODES: usize = 400;

/// Maximum number of collar halvings.
const MAX_HALVINGS: usize = 40;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LocalExtensionParams {
    pub h0: f64,
    pub kappa0: f64,
    pub t0: f64,
}

impl LocalExtensionParams {
    pub fn new(h0: f64, kappa0: f64, t0: f64) -> Result<Self> {
        if !(h0 > 0.0) || !(kappa0 >= 0.0) || !(t0 > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "need h0 > 0, kappa0 >= 0, t0 > 0 (got {h0}, {kappa0}, {t0})"
            )));
        }
        Ok(LocalExtensionParams { h0, kappa0, t0 })
    }

    /// `2 − 8κ₀t/h₀ > 0` on `[0, t0)`.
    pub fn positivity_margin_holds(&self) -> bool {
        2.0 - 8.0 * self.kappa0 * self.t0 / self.h0 >= 0.0
    }
}

/// `e^{−1/t}` extended by 0 at `t = 0`.
pub fn bump(t: f64) -> Result<f64> {
    if t < 0.0 || t.is_nan() {
        return Err(Error::InvalidParameter(format!("bump needs t >= 0 (got {t})")));
    }
    Ok(bump_jet(t).v)
}

/// `(b, b', b'')` of the bump at `t ≥ 0`.
pub fn bump_jet(t: f64) -> Jet {
    if t <= 0.0 {
        return Jet::constant(0.0);
    }
    let b = (-1.0 / t).exp();
    let t2 = t * t;
    Jet::new(b, b / t2, b * (1.0 - 2.0 * t) / (t2 * t2))
}

/// Warp samples with `ρ² − 1` kept separately to full relative precision.
#[derive(Debug, Clone, PartialEq)]
pub struct RhoSamples {
    pub t: Vec<f64>,
    /// `(ρ, ρ', ρ'')`.
    pub rho: Vec<Jet>,
    pub rho2_minus_1: Vec<f64>,
}

/// `ρ(t)` on a grid in `[0, t0)`, by adaptive quadrature of the bump.
pub fn build_rho(params: &LocalExtensionParams, t_grid: &[f64]) -> Result<RhoSamples> {
    if let Some(&bad) = t_grid.iter().find(|&&t| !(0.0..params.t0).contains(&t)) {
        return Err(Error::Domain {
            x: bad,
            lo: 0.0,
            hi: params.t0,
        });
    }
    if t_grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidParameter("collar grid must be strictly increasing".into()));
    }
    let f = |t: f64| bump_jet(t).v;
    let mut integral = 0.0;
    let mut prev = 0.0;
    let mut rho = Vec::with_capacity(t_grid.len());
    let mut rho2m1 = Vec::with_capacity(t_grid.len());
    for &t in t_grid {
        if t > prev {
            // absolute 1e-12, tightened so tiny integrals keep relative accuracy
            let tol = 1e-12f64.min(1e-10 * f(t) * (t - prev)).max(f64::MIN_POSITIVE);
            integral += adaptive_simpson(&f, prev, t, tol);
            prev = t;
        }
        let e = integral / params.h0;
        let r = e.exp();
        let b = bump_jet(t);
        let g = b.v / params.h0;
        rho.push(Jet::new(r, r * g, r * (b.d1 / params.h0 + g * g)));
        rho2m1.push((2.0 * e).exp_m1());
    }
    Ok(RhoSamples {
        t: t_grid.to_vec(),
        rho,
        rho2_minus_1: rho2m1,
    })
}

/// Result of a verified collar extension.
#[derive(Debug, Clone, PartialEq)]
pub struct LocalExtension {
    pub warped: WarpedProfile,
    pub params: LocalExtensionParams,
    /// Prescribed scalar curvature of the unwarped continuation.
    pub base_scalar: f64,
    pub r_tilde: Vec<f64>,
    pub lower_bound: Vec<f64>,
    pub rho2_minus_1: Vec<f64>,
    pub halvings: usize,
}

impl LocalExtension {
    /// The warped collar as `ρ² dt² + r² dΩ²` in the coordinate `t`.
    pub fn coord_metric(&self) -> Result<CoordMetric> {
        let w = &self.warped;
        let a: Vec<Jet> = (0..w.len()).map(|i| w.rho_node(i) * w.rho_node(i)).collect();
        let r: Vec<Jet> = (0..w.len()).map(|i| w.r_node(i)).collect();
        CoordMetric::from_jets(w.t().to_vec(), &a, &r)
    }

    /// The same warp and continuation carried past `t0` to `t_end` on
    /// `nodes` uniform nodes. Positivity is only certified below `t0`.
    pub fn continued(&self, inner: &RadialProfile, t_end: f64, nodes: usize) -> Result<CoordMetric> {
        if !(t_end > T_MIN) || nodes < 2 {
            return Err(Error::Collar(format!("cannot continue the collar to {t_end}")));
        }
        let mut grid = vec![0.0];
        grid.extend((0..nodes).map(|k| T_MIN + (t_end - T_MIN) * k as f64 / (nodes - 1) as f64));
        let params = LocalExtensionParams {
            t0: t_end * (1.0 + 1e-12),
            ..self.params
        };
        let rho = build_rho(&params, &grid)?;
        let r = continuation(inner, self.base_scalar, &grid)?;
        let a: Vec<Jet> = rho.rho.iter().map(|&p| p * p).collect();
        CoordMetric::from_jets(grid, &a, &r)
    }
}

/// Collar grid: `t = 0` then `COLLAR_NODES − 1` uniform nodes in `[T_MIN, t0)`.
pub fn collar_grid(t0: f64) -> Result<Vec<f64>> {
    if !(t0 > T_MIN) {
        return Err(Error::Collar(format!("collar width {t0} below the smallest node {T_MIN}")));
    }
    let n = COLLAR_NODES - 1;
    let mut g = vec![0.0];
    g.extend((0..n).map(|k| T_MIN + (t0 - T_MIN) * k as f64 / n as f64));
    Ok(g)
}

/// Continuation of the inner profile past its boundary with constant scalar
/// curvature `R₀`, sampled at `t_grid` as jets `(r, r', r'')`.
pub fn continuation(inner: &RadialProfile, r0_scalar: f64, t_grid: &[f64]) -> Result<Vec<Jet>> {
    let (_, s_end) = inner.s_range();
    let start = inner.eval(s_end)?;
    let acc = |r: f64, v: f64| (1.0 - v * v) / (2.0 * r) - 0.25 * r0_scalar * r;
    let (mut r, mut v) = (start.v, start.d1);
    let mut t = 0.0;
    let mut out = Vec::with_capacity(t_grid.len());
    for &target in t_grid {
        let span = target - t;
        let steps = ((span / 2e-4).ceil() as usize).max(1);
        let h = span / steps as f64;
        for _ in 0..steps {
            let (k1r, k1v) = (v, acc(r, v));
            let (k2r, k2v) = (v + 0.5 * h * k1v, acc(r + 0.5 * h * k1r, v + 0.5 * h * k1v));
            let (k3r, k3v) = (v + 0.5 * h * k2v, acc(r + 0.5 * h * k2r, v + 0.5 * h * k2v));
            let (k4r, k4v) = (v + h * k3v, acc(r + h * k3r, v + h * k3v));
            r += h / 6.0 * (k1r + 2.0 * k2r + 2.0 * k3r + k4r);
            v += h / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
        }
        t = target;
        if !(r > 0.0) {
            return Err(Error::Collar(format!("continuation collapses at t = {t}")));
        }
        out.push(Jet::new(r, v, acc(r, v)));
    }
    Ok(out)
}

fn allowable_base(inner: &RadialProfile) -> Result<f64> {
    let (_, s_end) = inner.s_range();
    let b = inner.eval(s_end)?;
    let h = mean_curvature_of(b);
    if !(h > 0.0) {
        return Err(Error::NotAllowable(format!("boundary mean curvature {h} ≤ 0")));
    }
    Ok(scalar_curvature_of(b).max(0.0))
}

/// Unwarped (`ρ ≡ 1`) continuation on `[0, t0)`.
pub fn extend_unwarped(inner: &RadialProfile, t0: f64) -> Result<WarpedProfile> {
    let base = allowable_base(inner)?;
    let grid = collar_grid(t0)?;
    let r = continuation(inner, base, &grid)?;
    let n = grid.len();
    let rho = Hermite5::new(grid.clone(), vec![1.0; n], vec![0.0; n], vec![0.0; n])?;
    let rr = Hermite5::new(
        grid.clone(),
        r.iter().map(|j| j.v).collect(),
        r.iter().map(|j| j.d1).collect(),
        r.iter().map(|j| j.d2).collect(),
    )?;
    WarpedProfile::new(rho, rr, t0)
}

/// Builds and verifies the warped collar at a fixed `t0`.
fn attempt(inner: &RadialProfile, base: f64, t0: f64) -> Result<LocalExtension> {
    let grid = collar_grid(t0)?;
    let r = continuation(inner, base, &grid)?;
    let h0 = r.iter().map(|&j| mean_curvature_of(j)).fold(f64::INFINITY, f64::min);
    let kappa0 = r.iter().map(|&j| gauss_curvature_of(j)).fold(0.0, f64::max);
    if !(h0 > 0.0) {
        return Err(Error::Collar(format!("mean curvature drops to {h0} on the collar")));
    }
    let params = LocalExtensionParams::new(h0, kappa0, t0)?;
    if !params.positivity_margin_holds() {
        return Err(Error::Collar("2 − 8κ₀t/h₀ not positive on the collar".into()));
    }
    let rho = build_rho(&params, &grid)?;
    let mut r_tilde = Vec::with_capacity(grid.len());
    let mut lower = Vec::with_capacity(grid.len());
    for i in 0..grid.len() {
        let t = grid[i];
        let (p, pm1) = (rho.rho[i], rho.rho2_minus_1[i]);
        let (k, h) = (gauss_curvature_of(r[i]), mean_curvature_of(r[i]));
        let rt = (base + 2.0 * k * pm1 + 2.0 * p.d1 / p.v * h) / (p.v * p.v);
        let b = bump_jet(t).v;
        let lb = b / (p.v * p.v) * (2.0 - 8.0 * kappa0 * t / h0);
        if i > 0 && !(rt > 0.0 && rt >= lb * (1.0 - 1e-12) && pm1 <= 4.0 / h0 * t * b * (1.0 + 1e-12)) {
            return Err(Error::Collar(format!("collar bounds fail at t = {t}")));
        }
        r_tilde.push(rt);
        lower.push(lb);
    }
    let split = |v: &[Jet]| {
        (
            v.iter().map(|j| j.v).collect::<Vec<_>>(),
            v.iter().map(|j| j.d1).collect::<Vec<_>>(),
            v.iter().map(|j| j.d2).collect::<Vec<_>>(),
        )
    };
    let (pv, pd1, pd2) = split(&rho.rho);
    let (rv, rd1, rd2) = split(&r);
    let warped = WarpedProfile::new(
        Hermite5::new(grid.clone(), pv, pd1, pd2)?,
        Hermite5::new(grid, rv, rd1, rd2)?,
        t0,
    )?;
    Ok(LocalExtension {
        warped,
        params,
        base_scalar: base,
        r_tilde,
        lower_bound: lower,
        rho2_minus_1: rho.rho2_minus_1,
        halvings: 0,
    })
}

/// Extends `inner` (boundary at its last sample) by a warped collar with
/// strictly positive scalar curvature, halving `t0` until the bounds verify.
pub fn extend_local(inner: &RadialProfile, t0_request: f64) -> Result<LocalExtension> {
    let base = allowable_base(inner)?;
    let mut t0 = t0_request;
    let mut last = None;
    for halvings in 0..MAX_HALVINGS {
        if t0 <= T_MIN {
            break;
        }
        match attempt(inner, base, t0) {
            Ok(mut ext) => {
                ext.halvings = halvings;
                return Ok(ext);
            }
            Err(e) => last = Some(e),
        }
        t0 *= 0.5;
    }
    Err(Error::ConstructionFailed(format!(
        "collar verification failed down to the grid floor{}",
        last.map(|e| format!(" (last: {e})")).unwrap_or_default()
    )))
}

/// Checks the construction at exactly `t0` without halving.
pub fn extend_local_fixed(inner: &RadialProfile, t0: f64) -> Result<LocalExtension> {
    let base = allowable_base(inner)?;
    attempt(inner, base, t0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::radial_geometry::{flat_ball, scalar_curvature_warped, SchwarzschildSlice};

    // ∫₀^{1/2} e^{−1/τ} dτ = e^{−2}/2 − E₁(2)
    const I_HALF: f64 = 0.018_767_130_910_245_226;

    #[test]
    fn bump_values() {
        assert_eq!(bump(0.0).unwrap(), 0.0);
        assert!((bump(1.0).unwrap() - (-1.0f64).exp()).abs() < 1e-16);
        assert!((bump(0.1).unwrap() - (-10.0f64).exp()).abs() < 1e-20);
        assert!(bump(-0.1).is_err());
        assert_eq!(bump(1.0 / 800.0).unwrap(), 0.0);
    }

    #[test]
    fn rho_oracle_and_bounds() {
        let p = LocalExtensionParams::new(1.0, 0.0, 0.65).unwrap();
        let grid: Vec<f64> = (0..61).map(|k| 0.01 * k as f64).collect();
        let rho = build_rho(&p, &grid).unwrap();
        assert_eq!(rho.rho[0].v, 1.0);
        assert!((rho.rho[50].v - I_HALF.exp()).abs() < 1e-12);
        for i in 1..grid.len() {
            assert!(rho.rho[i].v >= rho.rho[i - 1].v);
            let b = bump(grid[i]).unwrap();
            assert!(rho.rho2_minus_1[i] <= 4.0 * grid[i] * b);
        }
        assert!(build_rho(&p, &[0.0, 0.7]).is_err());
    }

    #[test]
    fn flat_ball_collar_is_positive() {
        let inner = flat_ball(1.0, 0.05, 200).unwrap();
        let ext = extend_local(&inner, 0.5).unwrap();
        assert!(ext.params.t0 <= 0.25);
        for i in 1..ext.r_tilde.len() {
            assert!(ext.r_tilde[i] > 0.0);
            assert!(ext.r_tilde[i] >= ext.lower_bound[i] * (1.0 - 1e-12));
        }
        // bit-identical inner region: the extension never touches it
        assert_eq!(inner, flat_ball(1.0, 0.05, 200).unwrap());
    }

    #[test]
    fn schwarzschild_collar_is_positive() {
        let sl = SchwarzschildSlice { mass: 1.0 };
        let inner = sl.on_range(0.0, sl.s_of_r(3.0), 200).unwrap();
        let inner = inner.shifted(inner.s_range().1);
        let ext = extend_local(&inner, 1.0).unwrap();
        assert!(ext.r_tilde[1..].iter().all(|&v| v > 0.0));
    }

    #[test]
    fn unwarped_reduces_to_base() {
        let inner = flat_ball(1.0, 0.05, 200).unwrap();
        let w = extend_unwarped(&inner, 0.2).unwrap();
        for &t in &[0.01, 0.1, 0.19] {
            let r = w.r_at(t).unwrap();
            let base = scalar_curvature_of(r);
            let rt = scalar_curvature_warped(&w, base, gauss_curvature_of(r), mean_curvature_of(r), t).unwrap();
            assert_eq!(rt, base);
        }
    }

    #[test]
    fn non_allowable_and_monotone_failure() {
        let inner = flat_ball(1.0, 0.05, 200).unwrap();
        let flipped = RadialProfile::new(
            inner.s().to_vec(),
            inner.r().iter().rev().cloned().collect(),
            vec![-1.0; inner.len()],
            vec![0.0; inner.len()],
            0.75,
        )
        .unwrap();
        assert!(matches!(extend_local(&flipped, 0.1), Err(Error::NotAllowable(_))));
        let fails: Vec<bool> = [0.1, 0.2, 0.3, 0.4, 0.6, 0.8]
            .iter()
            .map(|&t| extend_local_fixed(&inner, t).is_err())
            .collect();
        let first = fails.iter().position(|&f| f).unwrap();
        assert!(fails[first..].iter().all(|&f| f));
    }
}
