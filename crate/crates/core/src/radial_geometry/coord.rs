use crate::error::{Error, Result};
use crate::jet::Jet;
use crate::numerics::Hermite5;

use super::{hawking_mass_of, mean_curvature_of, scalar_curvature_of, weighted_norm_jets, RadialProfile};

/// A radial metric `A(x) dx² + r(x)² dΩ²` in a general coordinate `x`.
///
/// Deformation steps act on `A` and `r` in a shared coordinate; the
/// arc-length form is recovered with [`CoordMetric::to_profile`].
#[derive(Debug, Clone, PartialEq)]
pub struct CoordMetric {
    a: Hermite5,
    r: Hermite5,
}

/// `(r, dr/ds, d²r/ds²)` from coordinate jets of `A` and `r`.
pub fn arclength_jet(a: Jet, r: Jet) -> Jet {
    let sa = a.v.sqrt();
    Jet::new(r.v, r.d1 / sa, (r.d2 - 0.5 * r.d1 * a.d1 / a.v) / a.v)
}

impl CoordMetric {
    pub fn from_jets(x: Vec<f64>, a: &[Jet], r: &[Jet]) -> Result<Self> {
        if a.iter().any(|j| !(j.v > 0.0)) {
            return Err(Error::InvalidProfile("radial metric coefficient must be positive".into()));
        }
        if r.iter().any(|j| !(j.v > 0.0)) {
            return Err(Error::InvalidProfile("areal radius must be positive".into()));
        }
        let split = |v: &[Jet]| {
            (
                v.iter().map(|j| j.v).collect::<Vec<_>>(),
                v.iter().map(|j| j.d1).collect::<Vec<_>>(),
                v.iter().map(|j| j.d2).collect::<Vec<_>>(),
            )
        };
        let (av, ad1, ad2) = split(a);
        let (rv, rd1, rd2) = split(r);
        Ok(CoordMetric {
            a: Hermite5::new(x.clone(), av, ad1, ad2)?,
            r: Hermite5::new(x, rv, rd1, rd2)?,
        })
    }

    /// The arc-length profile viewed with `x = s`, `A ≡ 1`.
    pub fn from_profile(p: &RadialProfile) -> Self {
        let n = p.len();
        CoordMetric {
            a: Hermite5 {
                x: p.s().to_vec(),
                f: vec![1.0; n],
                d1: vec![0.0; n],
                d2: vec![0.0; n],
            },
            r: p.interpolant().clone(),
        }
    }

    pub fn x(&self) -> &[f64] {
        &self.a.x
    }

    pub fn len(&self) -> usize {
        self.a.x.len()
    }

    pub fn is_empty(&self) -> bool {
        self.a.x.is_empty()
    }

    pub fn range(&self) -> (f64, f64) {
        (self.a.lo(), self.a.hi())
    }

    pub fn a_node(&self, i: usize) -> Jet {
        self.a.node(i)
    }

    pub fn r_node(&self, i: usize) -> Jet {
        self.r.node(i)
    }

    /// `(A, r)` jets at coordinate `x`.
    pub fn eval(&self, x: f64) -> Result<(Jet, Jet)> {
        Ok((self.a.eval(x)?, self.r.eval(x)?))
    }

    pub fn a_interp(&self) -> &Hermite5 {
        &self.a
    }

    pub fn r_interp(&self) -> &Hermite5 {
        &self.r
    }

    /// Cumulative integral over `x` of `f(A, r, x)`, zero at the first node.
    pub fn integrate<F: Fn(Jet, Jet, f64) -> f64>(&self, f: F) -> Vec<f64> {
        self.a.cumulative(|a, x| f(a, self.r.eval_unchecked(x), x))
    }

    pub fn arclength_node(&self, i: usize) -> Jet {
        arclength_jet(self.a.node(i), self.r.node(i))
    }

    pub fn scalar_curvature_node(&self, i: usize) -> f64 {
        scalar_curvature_of(self.arclength_node(i))
    }

    pub fn mean_curvature_node(&self, i: usize) -> f64 {
        mean_curvature_of(self.arclength_node(i))
    }

    pub fn hawking_node(&self, i: usize) -> f64 {
        hawking_mass_of(self.arclength_node(i))
    }

    pub fn scalar_curvature_at(&self, x: f64) -> Result<f64> {
        let (a, r) = self.eval(x)?;
        Ok(scalar_curvature_of(arclength_jet(a, r)))
    }

    /// Arc length measured from the first node.
    pub fn arclength(&self) -> Vec<f64> {
        self.a.cumulative(|a, _| a.v.sqrt())
    }

    /// Converts to an arc-length profile with `s(x₀) = s_first`.
    pub fn to_profile(&self, decay_p: f64, s_first: f64) -> Result<RadialProfile> {
        let s: Vec<f64> = self.arclength().into_iter().map(|v| v + s_first).collect();
        let jets: Vec<Jet> = (0..self.len()).map(|i| self.arclength_node(i)).collect();
        RadialProfile::new(
            s,
            jets.iter().map(|j| j.v).collect(),
            jets.iter().map(|j| j.d1).collect(),
            jets.iter().map(|j| j.d2).collect(),
            decay_p,
        )
    }

    /// Weighted `C^k_{−τ}` size of `other − self`, measured in the
    /// orthonormal frame of `self` at the nodes of `self` accepted by `keep`.
    ///
    /// Components are `(A' − A)/A` and `(r'² − r²)/r²`, differentiated in `x`.
    pub fn deviation<F: Fn(f64) -> bool>(&self, other: &CoordMetric, k: usize, tau: f64, keep: F) -> Result<f64> {
        let mut radii = Vec::new();
        let mut comps = Vec::new();
        for i in 0..self.len() {
            let x = self.x()[i];
            if !keep(x) {
                continue;
            }
            let (a1, r1) = (self.a.node(i), self.r.node(i));
            let (a2, r2) = other.eval(x)?;
            let da = (a2 - a1) / a1;
            let q1 = r1 * r1;
            let dr = (r2 * r2 - q1) / q1;
            radii.push(r1.v);
            radii.push(r1.v);
            comps.push(da);
            comps.push(dr);
        }
        weighted_norm_jets(&radii, &comps, k, tau)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::radial_geometry::{scalar_curvature_nodes, SchwarzschildSlice};

    #[test]
    fn round_trip_through_arclength() {
        let p = SchwarzschildSlice { mass: 1.0 }.exterior(3.0, 40.0, 300).unwrap();
        let c = CoordMetric::from_profile(&p);
        let q = c.to_profile(p.decay_p, 0.0).unwrap();
        for i in 0..p.len() {
            assert!((q.s()[i] - p.s()[i]).abs() < 1e-10);
            assert_eq!(q.dr()[i], p.dr()[i]);
        }
        assert_eq!(c.deviation(&c, 2, 1.0, |_| true).unwrap(), 0.0);
    }

    #[test]
    fn schwarzschild_in_areal_coordinate_has_zero_curvature() {
        // A(r) = 1/(1 − 2m/r), x = r
        let m = 0.7;
        let x: Vec<f64> = (0..200).map(|i| 2.0 + 0.1 * i as f64).collect();
        let a: Vec<Jet> = x.iter().map(|&r| (Jet::constant(1.0) - Jet::var(r).recip().scale(2.0 * m)).recip()).collect();
        let r: Vec<Jet> = x.iter().map(|&v| Jet::var(v)).collect();
        let c = CoordMetric::from_jets(x, &a, &r).unwrap();
        for i in 0..c.len() {
            assert!(c.scalar_curvature_node(i).abs() < 1e-12);
            assert!((c.hawking_node(i) - m).abs() < 1e-12);
        }
        let p = c.to_profile(0.75, 0.0).unwrap();
        let s_expect = SchwarzschildSlice { mass: m };
        let s0 = s_expect.s_of_r(2.0);
        for i in (0..p.len()).step_by(17) {
            let d = p.s()[i] - (s_expect.s_of_r(p.r()[i]) - s0);
            assert!(d.abs() < 1e-6, "{i} {d}");
        }
        assert!(scalar_curvature_nodes(&p).iter().all(|v| v.abs() < 1e-10));
    }
}
