use crate::error::{Error, Result};
use crate::jet::Jet;
use crate::numerics::Hermite5;

use super::{gauss_curvature_of, mean_curvature_of, scalar_curvature_of, warped_scalar_curvature};

/// A collar metric `ρ(t)² dt² + r(t)² dΩ²` on `t ∈ [0, t0]`, where `t` is
/// arc length of the unwarped (`ρ ≡ 1`) continuation.
#[derive(Debug, Clone, PartialEq)]
pub struct WarpedProfile {
    rho: Hermite5,
    r: Hermite5,
    pub t0: f64,
}

impl WarpedProfile {
    pub fn new(rho: Hermite5, r: Hermite5, t0: f64) -> Result<Self> {
        if rho.x != r.x {
            return Err(Error::InvalidWarp("warp and radius grids differ".into()));
        }
        if rho.x[0] != 0.0 || (rho.f[0] - 1.0).abs() > 1e-15 {
            return Err(Error::InvalidWarp("warp must start at t = 0 with ρ = 1".into()));
        }
        if rho.f.windows(2).any(|w| w[1] < w[0]) {
            return Err(Error::InvalidWarp("warp must be nondecreasing".into()));
        }
        if *rho.x.last().unwrap() > t0 * (1.0 + 1e-12) {
            return Err(Error::InvalidWarp("grid extends past t0".into()));
        }
        Ok(WarpedProfile { rho, r, t0 })
    }

    pub fn t(&self) -> &[f64] {
        &self.rho.x
    }

    pub fn rho(&self) -> &[f64] {
        &self.rho.f
    }

    pub fn r(&self) -> &[f64] {
        &self.r.f
    }

    pub fn len(&self) -> usize {
        self.rho.x.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rho.x.is_empty()
    }

    pub fn rho_at(&self, t: f64) -> Result<Jet> {
        self.rho.eval(t)
    }

    pub fn r_at(&self, t: f64) -> Result<Jet> {
        self.r.eval(t)
    }

    pub fn rho_node(&self, i: usize) -> Jet {
        self.rho.node(i)
    }

    pub fn r_node(&self, i: usize) -> Jet {
        self.r.node(i)
    }

    pub fn rho_interp(&self) -> &Hermite5 {
        &self.rho
    }

    pub fn r_interp(&self) -> &Hermite5 {
        &self.r
    }

    /// Warped scalar curvature at node `i`, base quantities from the
    /// unwarped continuation.
    pub fn scalar_curvature_node(&self, i: usize) -> f64 {
        let r = self.r.node(i);
        let rho = self.rho.node(i);
        warped_scalar_curvature(
            rho.v,
            rho.d1,
            scalar_curvature_of(r),
            gauss_curvature_of(r),
            mean_curvature_of(r),
        )
        .unwrap_or(f64::NAN)
    }

    /// Mean curvature of `Σ_t` in the warped metric, `2r'/(ρ r)`.
    pub fn mean_curvature_at(&self, t: f64) -> Result<f64> {
        Ok(mean_curvature_of(self.r.eval(t)?) / self.rho.eval(t)?.v)
    }
}
