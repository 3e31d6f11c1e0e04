//! Interpolation, quadrature and cutoff primitives shared by the geometry code.

use crate::error::{Error, Result};
use crate::jet::Jet;

/// Piecewise quintic Hermite interpolant through `(f, f', f'')` node data.
///
/// The interpolant is C² across nodes and reproduces the node derivatives
/// exactly, so curvature evaluated at nodes carries no interpolation error.
#[derive(Debug, Clone, PartialEq)]
pub struct Hermite5 {
    pub x: Vec<f64>,
    pub f: Vec<f64>,
    pub d1: Vec<f64>,
    pub d2: Vec<f64>,
}

impl Hermite5 {
    pub fn new(x: Vec<f64>, f: Vec<f64>, d1: Vec<f64>, d2: Vec<f64>) -> Result<Self> {
        let n = x.len();
        if n < 2 || f.len() != n || d1.len() != n || d2.len() != n {
            return Err(Error::InvalidProfile(format!(
                "hermite data needs >= 2 nodes with matching lengths (got {n})"
            )));
        }
        if x.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::InvalidProfile("nodes must be strictly increasing".into()));
        }
        Ok(Hermite5 { x, f, d1, d2 })
    }

    pub fn lo(&self) -> f64 {
        self.x[0]
    }

    pub fn hi(&self) -> f64 {
        *self.x.last().unwrap()
    }

    /// Node-aligned jet when `x` hits a node exactly.
    pub fn node(&self, i: usize) -> Jet {
        Jet::new(self.f[i], self.d1[i], self.d2[i])
    }

    fn segment(&self, x: f64) -> usize {
        let n = self.x.len();
        let k = self.x.partition_point(|&xi| xi <= x);
        k.clamp(1, n - 1) - 1
    }

    /// Value and first two derivatives at `x`.
    pub fn eval(&self, x: f64) -> Result<Jet> {
        let (lo, hi) = (self.lo(), self.hi());
        let slack = 1e-12 * (hi - lo).abs().max(1.0);
        if !(x >= lo - slack && x <= hi + slack) {
            return Err(Error::Domain { x, lo, hi });
        }
        Ok(self.eval_unchecked(x.clamp(lo, hi)))
    }

    pub(crate) fn eval_unchecked(&self, x: f64) -> Jet {
        let i = self.segment(x);
        if x == self.x[i] {
            return self.node(i);
        }
        if x == self.x[i + 1] {
            return self.node(i + 1);
        }
        let h = self.x[i + 1] - self.x[i];
        let t = (x - self.x[i]) / h;
        let c0 = self.f[i];
        let c1 = h * self.d1[i];
        let c2 = 0.5 * h * h * self.d2[i];
        let a = self.f[i + 1] - c0 - c1 - c2;
        let b = h * self.d1[i + 1] - c1 - 2.0 * c2;
        let c = h * h * self.d2[i + 1] - 2.0 * c2;
        let c3 = 10.0 * a - 4.0 * b + 0.5 * c;
        let c4 = -15.0 * a + 7.0 * b - c;
        let c5 = 6.0 * a - 3.0 * b + 0.5 * c;
        let p = c0 + t * (c1 + t * (c2 + t * (c3 + t * (c4 + t * c5))));
        let dp = c1 + t * (2.0 * c2 + t * (3.0 * c3 + t * (4.0 * c4 + t * 5.0 * c5)));
        let ddp = 2.0 * c2 + t * (6.0 * c3 + t * (12.0 * c4 + t * 20.0 * c5));
        Jet::new(p, dp / h, ddp / (h * h))
    }

    /// Integral of `g(f(x), x)` over the whole grid by 5-point Gauss-Legendre
    /// per segment, returned as cumulative values at the nodes.
    pub fn cumulative<F: Fn(Jet, f64) -> f64>(&self, g: F) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.x.len());
        let mut acc = 0.0;
        out.push(0.0);
        for i in 0..self.x.len() - 1 {
            let (a, b) = (self.x[i], self.x[i + 1]);
            acc += gauss_legendre(a, b, |x| g(self.eval_unchecked(x), x));
            out.push(acc);
        }
        out
    }
}

/// Cubic spline with not-a-knot ends; used to estimate node derivatives
/// for sampled data that arrives without them.
pub fn spline_derivatives(x: &[f64], y: &[f64]) -> Result<(Vec<f64>, Vec<f64>)> {
    let n = x.len();
    if n < 4 || y.len() != n {
        return Err(Error::InsufficientData(format!(
            "spline needs at least 4 samples (got {n})"
        )));
    }
    let h: Vec<f64> = x.windows(2).map(|w| w[1] - w[0]).collect();
    if h.iter().any(|&hi| !(hi > 0.0)) {
        return Err(Error::InvalidProfile("sample abscissae must be strictly increasing".into()));
    }
    let slope: Vec<f64> = (0..n - 1).map(|i| (y[i + 1] - y[i]) / h[i]).collect();
    // unknowns M_1..M_{n-2}
    let m = n - 2;
    let mut sub = vec![0.0; m];
    let mut diag = vec![0.0; m];
    let mut sup = vec![0.0; m];
    let mut rhs = vec![0.0; m];
    for k in 0..m {
        let i = k + 1;
        sub[k] = h[i - 1];
        diag[k] = 2.0 * (h[i - 1] + h[i]);
        sup[k] = h[i];
        rhs[k] = 6.0 * (slope[i] - slope[i - 1]);
    }
    // not-a-knot: M_0 = M_1 (1 + h0/h1) - M_2 h0/h1, symmetric at the far end
    let (h0, h1) = (h[0], h[1]);
    diag[0] += h0 * (1.0 + h0 / h1);
    if m > 1 {
        sup[0] -= h0 * h0 / h1;
    }
    let (ha, hb) = (h[n - 2], h[n - 3]);
    diag[m - 1] += ha * (1.0 + ha / hb);
    if m > 1 {
        sub[m - 1] -= ha * ha / hb;
    }
    let inner = solve_tridiagonal(&sub, &diag, &sup, &rhs)?;
    let mut mm = vec![0.0; n];
    mm[1..n - 1].copy_from_slice(&inner);
    mm[0] = if m > 1 {
        mm[1] * (1.0 + h0 / h1) - mm[2] * h0 / h1
    } else {
        mm[1]
    };
    mm[n - 1] = if m > 1 {
        mm[n - 2] * (1.0 + ha / hb) - mm[n - 3] * ha / hb
    } else {
        mm[n - 2]
    };
    let mut d1 = vec![0.0; n];
    for i in 0..n - 1 {
        d1[i] = slope[i] - h[i] * (2.0 * mm[i] + mm[i + 1]) / 6.0;
    }
    d1[n - 1] = slope[n - 2] + h[n - 2] * (mm[n - 2] + 2.0 * mm[n - 1]) / 6.0;
    Ok((d1, mm))
}

fn solve_tridiagonal(sub: &[f64], diag: &[f64], sup: &[f64], rhs: &[f64]) -> Result<Vec<f64>> {
    let n = diag.len();
    let mut c = vec![0.0; n];
    let mut d = vec![0.0; n];
    let mut beta = diag[0];
    if beta == 0.0 {
        return Err(Error::InvalidProfile("singular spline system".into()));
    }
    c[0] = sup[0] / beta;
    d[0] = rhs[0] / beta;
    for i in 1..n {
        beta = diag[i] - sub[i] * c[i - 1];
        if beta == 0.0 {
            return Err(Error::InvalidProfile("singular spline system".into()));
        }
        c[i] = sup[i] / beta;
        d[i] = (rhs[i] - sub[i] * d[i - 1]) / beta;
    }
    for i in (0..n - 1).rev() {
        d[i] -= c[i] * d[i + 1];
    }
    Ok(d)
}

const GL_NODES: [f64; 5] = [
    -0.906_179_845_938_664,
    -0.538_469_310_105_683_1,
    0.0,
    0.538_469_310_105_683_1,
    0.906_179_845_938_664,
];
const GL_WEIGHTS: [f64; 5] = [
    0.236_926_885_056_189_08,
    0.478_628_670_499_366_47,
    0.568_888_888_888_888_9,
    0.478_628_670_499_366_47,
    0.236_926_885_056_189_08,
];

pub fn gauss_legendre<F: Fn(f64) -> f64>(a: f64, b: f64, f: F) -> f64 {
    let mid = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    GL_NODES
        .iter()
        .zip(GL_WEIGHTS.iter())
        .map(|(&t, &w)| w * f(mid + half * t))
        .sum::<f64>()
        * half
}

/// Adaptive Simpson quadrature to absolute tolerance `tol`.
pub fn adaptive_simpson<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64) -> f64 {
    if b == a {
        return 0.0;
    }
    let fa = f(a);
    let fb = f(b);
    let m = 0.5 * (a + b);
    let fm = f(m);
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    simpson_step(f, a, b, fa, fm, fb, whole, tol, 50)
}

#[allow(clippy::too_many_arguments)]
fn simpson_step<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> f64 {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= 15.0 * tol {
        return left + right + delta / 15.0;
    }
    simpson_step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)
        + simpson_step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)
}

/// Quintic smoothstep `10u³ − 15u⁴ + 6u⁵`, clamped to `[0, 1]`; C² at both ends.
pub fn smoothstep(u: Jet) -> Jet {
    if u.v <= 0.0 {
        return Jet::constant(0.0);
    }
    if u.v >= 1.0 {
        return Jet::constant(1.0);
    }
    let t = u.v;
    let s = t * t * t * (10.0 + t * (-15.0 + 6.0 * t));
    let ds = 30.0 * t * t * (1.0 - t) * (1.0 - t);
    let dds = 60.0 * t * (1.0 - t) * (1.0 - 2.0 * t);
    u.lift(s, ds, dds)
}

/// C³ septic step on `[0, 1]` with its first three derivatives; clamped outside.
pub fn septic_step(u: f64) -> [f64; 4] {
    if u <= 0.0 {
        return [0.0; 4];
    }
    if u >= 1.0 {
        return [1.0, 0.0, 0.0, 0.0];
    }
    let u2 = u * u;
    let u3 = u2 * u;
    [
        u2 * u2 * (35.0 - 84.0 * u + 70.0 * u2 - 20.0 * u3),
        140.0 * u3 * (1.0 - u).powi(3),
        420.0 * u2 * (1.0 - u).powi(2) * (1.0 - 2.0 * u),
        840.0 * u * (1.0 - u) * (1.0 - 5.0 * u + 5.0 * u2),
    ]
}

/// Least-squares fit of `y ≈ a + b·g(x)`; returns `(a, b, rms residual)`.
pub fn linear_fit(basis: &[f64], y: &[f64]) -> (f64, f64, f64) {
    let n = y.len() as f64;
    let mg = basis.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let mut sgg = 0.0;
    let mut sgy = 0.0;
    for (g, v) in basis.iter().zip(y) {
        sgg += (g - mg) * (g - mg);
        sgy += (g - mg) * (v - my);
    }
    let b = if sgg > 0.0 { sgy / sgg } else { 0.0 };
    let a = my - b * mg;
    let rss: f64 = basis
        .iter()
        .zip(y)
        .map(|(g, v)| (v - a - b * g).powi(2))
        .sum();
    (a, b, (rss / n).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hermite_reproduces_quintic() {
        let p = |x: f64| 1.0 + x - 2.0 * x.powi(3) + 0.5 * x.powi(5);
        let dp = |x: f64| 1.0 - 6.0 * x * x + 2.5 * x.powi(4);
        let ddp = |x: f64| -12.0 * x + 10.0 * x.powi(3);
        let xs = vec![0.0, 0.7, 1.3, 2.0];
        let h = Hermite5::new(
            xs.clone(),
            xs.iter().map(|&x| p(x)).collect(),
            xs.iter().map(|&x| dp(x)).collect(),
            xs.iter().map(|&x| ddp(x)).collect(),
        )
        .unwrap();
        for &x in &[0.1, 0.55, 1.0, 1.9] {
            let j = h.eval(x).unwrap();
            assert!((j.v - p(x)).abs() < 1e-12);
            assert!((j.d1 - dp(x)).abs() < 1e-11);
            assert!((j.d2 - ddp(x)).abs() < 1e-10);
        }
        assert!(matches!(h.eval(2.5), Err(Error::Domain { .. })));
    }

    #[test]
    fn spline_derivatives_exact_for_cubics() {
        let xs: Vec<f64> = (0..9).map(|i| (i as f64 * 0.37).powf(1.2)).collect();
        let ys: Vec<f64> = xs.iter().map(|&x| 2.0 - x + 0.3 * x * x * x).collect();
        let (d1, d2) = spline_derivatives(&xs, &ys).unwrap();
        for i in 0..xs.len() {
            let x = xs[i];
            assert!((d1[i] - (-1.0 + 0.9 * x * x)).abs() < 1e-9, "{i}");
            assert!((d2[i] - 1.8 * x).abs() < 1e-8, "{i}");
        }
    }

    #[test]
    fn adaptive_simpson_hits_tolerance() {
        let v = adaptive_simpson(&|t: f64| t.sin(), 0.0, std::f64::consts::PI, 1e-12);
        assert!((v - 2.0).abs() < 1e-11);
    }

    #[test]
    fn smoothstep_is_c2_at_ends() {
        let a = smoothstep(Jet::var(1e-9));
        let b = smoothstep(Jet::var(1.0 - 1e-9));
        assert!(a.d1.abs() < 1e-12 && a.d2.abs() < 1e-6);
        assert!(b.d1.abs() < 1e-12 && b.d2.abs() < 1e-6);
    }
}
