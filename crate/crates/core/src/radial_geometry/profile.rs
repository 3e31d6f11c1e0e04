use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::jet::Jet;
use crate::numerics::{spline_derivatives, Hermite5};

/// Closed-form descriptor carried by generated profiles.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum AnalyticTag {
    Flat,
    Schwarzschild { mass: f64 },
    Custom { name: String },
}

/// Default decay exponent used when none is supplied.
pub const DEFAULT_DECAY_P: f64 = 0.75;

/// A rotationally symmetric metric `ds² + r(s)² dΩ²` sampled on an
/// arc-length grid, with exact (or spline-estimated) node derivatives.
#[derive(Debug, Clone, PartialEq)]
pub struct RadialProfile {
    interp: Hermite5,
    pub decay_p: f64,
    pub analytic: Option<AnalyticTag>,
}

/// Outcome of the tail asymptotic-flatness test.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AfReport {
    pub accepted: bool,
    /// Fitted constant in `|r' − 1| ≈ C r^{−p}`.
    pub c: f64,
    pub residual: f64,
    pub tail_start: usize,
}

impl RadialProfile {
    /// Builds a profile from node values and derivatives `r'`, `r''`.
    pub fn new(s: Vec<f64>, r: Vec<f64>, dr: Vec<f64>, ddr: Vec<f64>, decay_p: f64) -> Result<Self> {
        if !(decay_p > 0.5 && decay_p < 1.0) {
            return Err(Error::InvalidProfile(format!(
                "decay exponent {decay_p} outside (1/2, 1)"
            )));
        }
        if let Some(bad) = r.iter().find(|&&v| !(v > 0.0) || !v.is_finite()) {
            return Err(Error::InvalidProfile(format!("areal radius must be positive (got {bad})")));
        }
        if dr.iter().chain(ddr.iter()).any(|v| !v.is_finite()) {
            return Err(Error::InvalidProfile("non-finite derivative data".into()));
        }
        let interp = Hermite5::new(s, r, dr, ddr)?;
        Ok(RadialProfile {
            interp,
            decay_p,
            analytic: None,
        })
    }

    /// Builds a profile from raw `(s, r)` samples, estimating derivatives
    /// with a not-a-knot cubic spline.
    pub fn from_samples(s: Vec<f64>, r: Vec<f64>, decay_p: f64) -> Result<Self> {
        let (dr, ddr) = spline_derivatives(&s, &r)?;
        Self::new(s, r, dr, ddr, decay_p)
    }

    pub fn with_tag(mut self, tag: AnalyticTag) -> Self {
        self.analytic = Some(tag);
        self
    }

    pub fn len(&self) -> usize {
        self.interp.x.len()
    }

    pub fn is_empty(&self) -> bool {
        self.interp.x.is_empty()
    }

    pub fn s(&self) -> &[f64] {
        &self.interp.x
    }

    pub fn r(&self) -> &[f64] {
        &self.interp.f
    }

    pub fn dr(&self) -> &[f64] {
        &self.interp.d1
    }

    pub fn ddr(&self) -> &[f64] {
        &self.interp.d2
    }

    pub fn s_range(&self) -> (f64, f64) {
        (self.interp.lo(), self.interp.hi())
    }

    pub fn truncation_radius(&self) -> f64 {
        *self.r().last().unwrap()
    }

    pub fn interpolant(&self) -> &Hermite5 {
        &self.interp
    }

    /// `(r, r', r'')` at arc length `s`.
    pub fn eval(&self, s: f64) -> Result<Jet> {
        self.interp.eval(s)
    }

    pub fn node(&self, i: usize) -> Jet {
        self.interp.node(i)
    }

    /// Index of the first sample with `s >= s0`.
    pub fn index_at_or_after(&self, s0: f64) -> usize {
        self.s().partition_point(|&s| s < s0)
    }

    /// Restriction to the samples with `s` in `[lo, hi]` (inclusive).
    pub fn restrict(&self, lo: f64, hi: f64) -> Result<RadialProfile> {
        let idx: Vec<usize> = (0..self.len())
            .filter(|&i| self.s()[i] >= lo && self.s()[i] <= hi)
            .collect();
        self.select(&idx)
    }

    fn select(&self, idx: &[usize]) -> Result<RadialProfile> {
        let pick = |v: &[f64]| idx.iter().map(|&i| v[i]).collect::<Vec<_>>();
        let mut p = RadialProfile::new(
            pick(self.s()),
            pick(self.r()),
            pick(self.dr()),
            pick(self.ddr()),
            self.decay_p,
        )?;
        p.analytic = self.analytic.clone();
        Ok(p)
    }

    /// Same geometry with the arc-length origin moved so that `s_new = s − s0`.
    pub fn shifted(&self, s0: f64) -> RadialProfile {
        let mut p = self.clone();
        for s in p.interp.x.iter_mut() {
            *s -= s0;
        }
        p
    }

    /// Resamples on the union of the current nodes and `extra` points,
    /// taking values from the interpolant.
    pub fn refined(&self, extra: &[f64]) -> Result<RadialProfile> {
        let (lo, hi) = self.s_range();
        let mut xs: Vec<f64> = self.s().to_vec();
        xs.extend(extra.iter().copied().filter(|&x| x > lo && x < hi));
        xs.sort_by(|a, b| a.partial_cmp(b).unwrap());
        xs.dedup_by(|a, b| (*a - *b).abs() <= 1e-14 * b.abs().max(1.0));
        let jets: Vec<Jet> = xs.iter().map(|&x| self.interp.eval_unchecked(x)).collect();
        let mut p = RadialProfile::new(
            xs,
            jets.iter().map(|j| j.v).collect(),
            jets.iter().map(|j| j.d1).collect(),
            jets.iter().map(|j| j.d2).collect(),
            self.decay_p,
        )?;
        p.analytic = self.analytic.clone();
        Ok(p)
    }

    /// Index where the outermost 20% of samples begins.
    pub fn tail_start(&self) -> usize {
        let n = self.len();
        n - (n / 5).max(1)
    }

    /// Tail test `|r' − 1| ≤ C r^{−p}`: least-squares fit of `C` on the
    /// outermost 20% of samples, accepted when the rms residual is below 1e-3
    /// and the tail is expanding.
    pub fn asymptotic_flatness(&self) -> AfReport {
        let start = self.tail_start();
        let basis: Vec<f64> = self.r()[start..].iter().map(|r| r.powf(-self.decay_p)).collect();
        let dev: Vec<f64> = self.dr()[start..].iter().map(|d| (d - 1.0).abs()).collect();
        let sgg: f64 = basis.iter().map(|g| g * g).sum();
        let c = if sgg > 0.0 {
            basis.iter().zip(&dev).map(|(g, d)| g * d).sum::<f64>() / sgg
        } else {
            0.0
        };
        let residual = (basis
            .iter()
            .zip(&dev)
            .map(|(g, d)| (d - c * g).powi(2))
            .sum::<f64>()
            / dev.len() as f64)
            .sqrt();
        let expanding = self.dr()[start..].iter().all(|&d| d > 0.0)
            && dev.iter().all(|&d| d < 0.5);
        AfReport {
            accepted: expanding && residual < 1e-3 && start >= 1,
            c,
            residual,
            tail_start: start,
        }
    }

    /// Outermost arc length with `r(s) = r_target`, by bisection on the
    /// interpolant.
    pub fn s_at_radius(&self, r_target: f64) -> Result<f64> {
        let rs = self.r();
        let k = (1..rs.len())
            .rev()
            .find(|&i| (rs[i - 1] - r_target) * (rs[i] - r_target) <= 0.0)
            .ok_or(Error::Domain {
                x: r_target,
                lo: rs.iter().cloned().fold(f64::INFINITY, f64::min),
                hi: rs.iter().cloned().fold(f64::NEG_INFINITY, f64::max),
            })?;
        let (mut a, mut b) = (self.s()[k - 1], self.s()[k]);
        let up = rs[k] >= rs[k - 1];
        for _ in 0..200 {
            let m = 0.5 * (a + b);
            if (self.interp.eval_unchecked(m).v < r_target) == up {
                a = m;
            } else {
                b = m;
            }
            if b - a <= 1e-15 * b.abs().max(1.0) {
                break;
            }
        }
        Ok(0.5 * (a + b))
    }
}

/// Exact arc-length parametrisation of the zero-scalar-curvature profiles
/// `r'² = 1 − 2m/r`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SchwarzschildSlice {
    pub mass: f64,
}

impl SchwarzschildSlice {
    /// `(s, r, r', r'')` at throat parameter `x` for `m > 0`
    /// (`r = 2m cosh²x`, throat at `s = 0`).
    fn throat_point(&self, x: f64) -> [f64; 4] {
        let m = self.mass;
        let (sh, ch) = (x.sinh(), x.cosh());
        let r = 2.0 * m * ch * ch;
        [2.0 * m * (sh * ch + x), r, x.tanh(), m / (r * r)]
    }

    fn x_of_r(&self, r: f64) -> f64 {
        (r / (2.0 * self.mass)).sqrt().max(1.0).acosh()
    }

    /// Arc length from the throat (m > 0) or from the origin (m ≤ 0)
    /// to areal radius `r` on the expanding branch.
    pub fn s_of_r(&self, r: f64) -> f64 {
        let m = self.mass;
        if m > 0.0 {
            self.throat_point(self.x_of_r(r))[0]
        } else if m == 0.0 {
            r
        } else {
            let f = |r: f64| (r * (r - 2.0 * m)).sqrt() + 2.0 * m * (r.sqrt() + (r - 2.0 * m).sqrt()).ln();
            f(r) - 2.0 * m * (-2.0 * m).sqrt().ln()
        }
    }

    /// Expanding exterior sampled from `r_start` to `r_end` with the
    /// boundary placed at `s = 0`.
    pub fn exterior(&self, r_start: f64, r_end: f64, n: usize) -> Result<RadialProfile> {
        let m = self.mass;
        if !(r_start > 2.0 * m.max(0.0)) || !(r_end > r_start) || n < 4 {
            return Err(Error::InvalidParameter(format!(
                "schwarzschild exterior needs 2m < r_start < r_end and n >= 4 (m={m}, {r_start}..{r_end})"
            )));
        }
        let pts: Vec<[f64; 4]> = if m > 0.0 {
            let (x0, x1) = (self.x_of_r(r_start), self.x_of_r(r_end));
            (0..n)
                .map(|i| self.throat_point(x0 + (x1 - x0) * i as f64 / (n - 1) as f64))
                .collect()
        } else {
            let (l0, l1) = (r_start.ln(), r_end.ln());
            (0..n)
                .map(|i| {
                    let r = (l0 + (l1 - l0) * i as f64 / (n - 1) as f64).exp();
                    [self.s_of_r(r), r, (1.0 - 2.0 * m / r).sqrt(), m / (r * r)]
                })
                .collect()
        };
        let s0 = pts[0][0];
        profile_from_points(&pts, s0)
            .map(|p| p.with_tag(AnalyticTag::Schwarzschild { mass: m }))
    }

    /// Two-sided profile through the throat (m > 0), from areal radius
    /// `r_left` on the contracting side to `r_right` on the expanding side;
    /// the throat sits at `s = 0`.
    pub fn through_throat(&self, r_left: f64, r_right: f64, n: usize) -> Result<RadialProfile> {
        let m = self.mass;
        if !(m > 0.0) || !(r_left > 2.0 * m) || !(r_right > 2.0 * m) || n < 4 {
            return Err(Error::InvalidParameter("through_throat needs m > 0 and radii beyond 2m".into()));
        }
        let (x0, x1) = (-self.x_of_r(r_left), self.x_of_r(r_right));
        let pts: Vec<[f64; 4]> = (0..n)
            .map(|i| self.throat_point(x0 + (x1 - x0) * i as f64 / (n - 1) as f64))
            .collect();
        profile_from_points(&pts, 0.0).map(|p| p.with_tag(AnalyticTag::Schwarzschild { mass: m }))
    }

    /// Samples `n` points uniformly in the natural parameter over the
    /// arc-length window `[s_lo, s_hi]` (throat or origin at `s = 0`).
    pub fn on_range(&self, s_lo: f64, s_hi: f64, n: usize) -> Result<RadialProfile> {
        let m = self.mass;
        if !(s_hi > s_lo) || n < 4 {
            return Err(Error::InvalidParameter("empty or too coarse s_range".into()));
        }
        if m > 0.0 {
            let x_of_s = |s: f64| {
                let (mut a, mut b) = (-60.0f64, 60.0f64);
                for _ in 0..200 {
                    let mid = 0.5 * (a + b);
                    if self.throat_point(mid)[0] < s {
                        a = mid;
                    } else {
                        b = mid;
                    }
                }
                0.5 * (a + b)
            };
            let (x0, x1) = (x_of_s(s_lo), x_of_s(s_hi));
            let pts: Vec<[f64; 4]> = (0..n)
                .map(|i| self.throat_point(x0 + (x1 - x0) * i as f64 / (n - 1) as f64))
                .collect();
            profile_from_points(&pts, 0.0).map(|p| p.with_tag(AnalyticTag::Schwarzschild { mass: m }))
        } else if m == 0.0 {
            flat(s_lo, s_hi, n)
        } else {
            Err(Error::Unsupported("negative-mass slices are generated with `exterior`".into()))
        }
    }
}

fn profile_from_points(pts: &[[f64; 4]], s0: f64) -> Result<RadialProfile> {
    RadialProfile::new(
        pts.iter().map(|p| p[0] - s0).collect(),
        pts.iter().map(|p| p[1]).collect(),
        pts.iter().map(|p| p[2]).collect(),
        pts.iter().map(|p| p[3]).collect(),
        DEFAULT_DECAY_P,
    )
}

/// Flat space `r(s) = s` on `[s_lo, s_hi]`, `s_lo > 0`.
pub fn flat(s_lo: f64, s_hi: f64, n: usize) -> Result<RadialProfile> {
    if !(s_lo > 0.0) || !(s_hi > s_lo) || n < 4 {
        return Err(Error::InvalidParameter("flat profile needs 0 < s_lo < s_hi, n >= 4".into()));
    }
    let s: Vec<f64> = (0..n)
        .map(|i| s_lo + (s_hi - s_lo) * i as f64 / (n - 1) as f64)
        .collect();
    RadialProfile::new(s.clone(), s, vec![1.0; n], vec![0.0; n], DEFAULT_DECAY_P)
        .map(|p| p.with_tag(AnalyticTag::Flat))
}

/// Flat exterior of the ball of radius `r0`, boundary at `s = 0`, nodes
/// geometrically spaced in `r` up to `r_end`.
pub fn flat_exterior(r0: f64, r_end: f64, n: usize) -> Result<RadialProfile> {
    SchwarzschildSlice { mass: 0.0 }
        .exterior(r0, r_end, n)
        .map(|p| p.with_tag(AnalyticTag::Flat))
}

/// Flat ball of radius `r0` written as an inner region on `s ∈ [−(r0 − r_min), 0]`.
pub fn flat_ball(r0: f64, r_min: f64, n: usize) -> Result<RadialProfile> {
    flat(r_min, r0, n).map(|p| p.shifted(r0))
}

/// Round cylinder `r ≡ radius` on `[s_lo, s_hi]`.
pub fn cylinder(radius: f64, s_lo: f64, s_hi: f64, n: usize) -> Result<RadialProfile> {
    if n < 4 || !(s_hi > s_lo) {
        return Err(Error::InvalidParameter("cylinder needs s_hi > s_lo, n >= 4".into()));
    }
    let s: Vec<f64> = (0..n)
        .map(|i| s_lo + (s_hi - s_lo) * i as f64 / (n - 1) as f64)
        .collect();
    RadialProfile::new(s, vec![radius; n], vec![0.0; n], vec![0.0; n], DEFAULT_DECAY_P)
        .map(|p| p.with_tag(AnalyticTag::Custom { name: "cylinder".into() }))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_invariants() {
        assert!(RadialProfile::from_samples(vec![0.0, 1.0, 1.0, 2.0], vec![1.0; 4], 0.75).is_err());
        assert!(RadialProfile::from_samples(vec![0.0, 1.0, 2.0, 3.0], vec![1.0, 0.0, 1.0, 1.0], 0.75).is_err());
        assert!(RadialProfile::from_samples(vec![0.0, 1.0, 2.0, 3.0], vec![1.0; 4], 1.2).is_err());
    }

    #[test]
    fn schwarzschild_arclength_is_consistent() {
        let sl = SchwarzschildSlice { mass: 1.0 };
        let p = sl.exterior(3.0, 50.0, 400).unwrap();
        // ds/dr = 1/sqrt(1-2m/r): compare the slope of s(r) across the grid
        for i in 1..p.len() - 1 {
            let dsdr = (p.s()[i + 1] - p.s()[i - 1]) / (p.r()[i + 1] - p.r()[i - 1]);
            let expect = 1.0 / (1.0 - 2.0 / p.r()[i]).sqrt();
            assert!((dsdr - expect).abs() < 1e-3 * expect);
        }
        assert_eq!(p.s()[0], 0.0);
        assert!((p.r()[0] - 3.0).abs() < 1e-12);
        let neg = SchwarzschildSlice { mass: -0.5 }.exterior(1.0, 20.0, 200).unwrap();
        for i in 1..neg.len() - 1 {
            let dsdr = (neg.s()[i + 1] - neg.s()[i - 1]) / (neg.r()[i + 1] - neg.r()[i - 1]);
            assert!((dsdr - 1.0 / neg.dr()[i]).abs() < 1e-3);
        }
    }

    #[test]
    fn af_check_accepts_flat_and_schwarzschild() {
        assert!(flat_exterior(1.0, 1000.0, 500).unwrap().asymptotic_flatness().accepted);
        let p = SchwarzschildSlice { mass: 1.0 }.exterior(3.0, 1000.0, 2000).unwrap();
        assert!(p.asymptotic_flatness().accepted);
        assert!(!cylinder(1.0, 0.0, 10.0, 50).unwrap().asymptotic_flatness().accepted);
    }

    #[test]
    fn s_at_radius_inverts_tail() {
        let p = SchwarzschildSlice { mass: 1.0 }.exterior(3.0, 1000.0, 2000).unwrap();
        let s = p.s_at_radius(500.0).unwrap();
        assert!((p.eval(s).unwrap().v - 500.0).abs() < 1e-9);
    }
}
