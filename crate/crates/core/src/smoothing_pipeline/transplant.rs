use crate::error::{Error, Result};
use crate::jet::Jet;
use crate::numerics::septic_step;
use crate::radial_geometry::CoordMetric;

/// `Φ_t(x) = x + t(1 − S(x/L))` with derivatives up to third order.
/// Sends the sphere `x = 0` to `y = t` and is the identity beyond `L`.
fn shift_map(x: f64, t: f64, l: f64) -> [f64; 4] {
    let s = septic_step(x / l);
    [
        x + t * (1.0 - s[0]),
        1.0 - t * s[1] / l,
        -t * s[2] / (l * l),
        -t * s[3] / (l * l * l),
    ]
}

/// Largest `t/L` keeping `Φ_t` monotone (max of `S'` is 35/16).
pub const MAX_SHIFT_RATIO: f64 = 0.45;

fn check(t: f64, l: f64) -> Result<()> {
    if !(t > 0.0 && l > 0.0 && t <= MAX_SHIFT_RATIO * l) {
        return Err(Error::InvalidParameter(format!(
            "shift t = {t} must lie in (0, {MAX_SHIFT_RATIO}·L] with L = {l}"
        )));
    }
    Ok(())
}

/// Transplanted outer metric at `y ≥ t`, as `(A, r)` jets in `y`.
///
/// `outer` is the outer metric with its boundary at `x = 0`; `collar` is the
/// boundary-side metric `ρ² dy² + r̃² dΩ²`, which must cover `[0, L]`.
/// The result is `g̃ + (Φ_t⁻¹)*(g₊ − g̃)`.
pub fn transplant_at(outer: &CoordMetric, collar: &CoordMetric, t: f64, l: f64, y: f64) -> Result<(Jet, Jet)> {
    check(t, l)?;
    if y < t {
        return Err(Error::Domain { x: y, lo: t, hi: f64::INFINITY });
    }
    if y >= l {
        return outer.eval(y);
    }
    let (mut lo, mut hi) = ((y - t).max(0.0), y);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if shift_map(mid, t, l)[0] < y {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= 1e-16 * y.max(1e-300) {
            break;
        }
    }
    let x = 0.5 * (lo + hi);
    let f = shift_map(x, t, l);
    let (p1, p2, p3) = (f[1], f[2], f[3]);
    let inv = Jet::new(x, 1.0 / p1, -p2 / p1.powi(3));
    let dinv = Jet::new(1.0 / p1, -p2 / p1.powi(3), (3.0 * p2 * p2 - p1 * p3) / p1.powi(5));
    let (ca_x, cr_x) = collar.eval(x)?;
    let (ap, rp) = outer.eval(x)?;
    let eta_a = ap - ca_x;
    let eta_q = rp * rp - cr_x * cr_x;
    let (ca_y, cr_y) = collar.eval(y)?;
    let a = ca_y + inv.compose(eta_a) * dinv * dinv;
    let q = cr_y * cr_y + inv.compose(eta_q);
    if !(a.v > 0.0 && q.v > 0.0) {
        return Err(Error::ConstructionFailed(format!("transplanted metric degenerates at y = {y}")));
    }
    Ok((a, q.sqrt()))
}

/// [`transplant_at`] on a node set starting at `t`.
pub fn transplant(outer: &CoordMetric, collar: &CoordMetric, t: f64, l: f64, nodes: &[f64]) -> Result<CoordMetric> {
    if nodes.first() != Some(&t) {
        return Err(Error::InvalidParameter("transplant nodes must start at t".into()));
    }
    let mut a = Vec::with_capacity(nodes.len());
    let mut r = Vec::with_capacity(nodes.len());
    for &y in nodes {
        let (aj, rj) = transplant_at(outer, collar, t, l, y)?;
        a.push(aj);
        r.push(rj);
    }
    CoordMetric::from_jets(nodes.to_vec(), &a, &r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::radial_geometry::flat_exterior;

    #[test]
    fn shift_map_derivatives() {
        let (t, l) = (0.05, 0.4);
        let h = 1e-5;
        for &x in &[0.03, 0.1, 0.2, 0.33] {
            let f = shift_map(x, t, l);
            let fp = shift_map(x + h, t, l);
            let fm = shift_map(x - h, t, l);
            assert!(((fp[0] - fm[0]) / (2.0 * h) - f[1]).abs() < 1e-8);
            assert!(((fp[1] - fm[1]) / (2.0 * h) - f[2]).abs() < 1e-7);
            assert!(((fp[2] - fm[2]) / (2.0 * h) - f[3]).abs() < 1e-5);
            assert!(f[1] > 0.0);
        }
        assert_eq!(shift_map(0.0, t, l)[0], t);
        assert_eq!(shift_map(0.0, t, l)[1], 1.0);
        assert_eq!(shift_map(0.5, t, l), [0.5, 1.0, 0.0, 0.0]);
    }

    #[test]
    fn identical_metrics_transplant_to_themselves() {
        // g₊ = g̃ = flat: the transplant is the flat metric shifted by t
        let outer = CoordMetric::from_profile(&flat_exterior(1.0, 20.0, 400).unwrap());
        let collar = outer.clone();
        let (t, l) = (0.05, 0.5);
        let nodes: Vec<f64> = (0..50).map(|k| t + 0.02 * k as f64).collect();
        let g = transplant(&outer, &collar, t, l, &nodes).unwrap();
        for i in 0..g.len() {
            assert!((g.a_node(i).v - 1.0).abs() < 1e-14);
            assert!((g.r_node(i).v - (1.0 + nodes[i])).abs() < 1e-12);
            assert!(g.scalar_curvature_node(i).abs() < 1e-9);
        }
        assert!(transplant_at(&outer, &collar, 0.3, 0.5, 0.4).is_err());
    }
}
