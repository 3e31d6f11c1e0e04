//! Second-order forward-mode jets.
//!
//! A [`Jet`] carries `(f, f', f'')` of a scalar function of one variable.
//! Arithmetic propagates the chain rule exactly, so compositions of
//! interpolants, cutoffs and diffeomorphisms keep exact node derivatives.

use std::ops::{Add, Div, Mul, Neg, Sub};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Jet {
    pub v: f64,
    pub d1: f64,
    pub d2: f64,
}

impl Jet {
    pub const fn new(v: f64, d1: f64, d2: f64) -> Self {
        Jet { v, d1, d2 }
    }

    pub const fn constant(v: f64) -> Self {
        Jet { v, d1: 0.0, d2: 0.0 }
    }

    /// The independent variable evaluated at `x`.
    pub const fn var(x: f64) -> Self {
        Jet { v: x, d1: 1.0, d2: 0.0 }
    }

    /// Applies a scalar function given its value and first two derivatives
    /// at `self.v`.
    pub fn lift(self, f: f64, df: f64, d2f: f64) -> Jet {
        Jet {
            v: f,
            d1: df * self.d1,
            d2: d2f * self.d1 * self.d1 + df * self.d2,
        }
    }

    /// Composition `outer(self)` where `outer` is itself a jet in its argument.
    pub fn compose(self, outer: Jet) -> Jet {
        self.lift(outer.v, outer.d1, outer.d2)
    }

    pub fn sqrt(self) -> Jet {
        let s = self.v.sqrt();
        self.lift(s, 0.5 / s, -0.25 / (s * self.v))
    }

    pub fn exp(self) -> Jet {
        let e = self.v.exp();
        self.lift(e, e, e)
    }

    pub fn ln(self) -> Jet {
        self.lift(self.v.ln(), 1.0 / self.v, -1.0 / (self.v * self.v))
    }

    pub fn powi(self, n: i32) -> Jet {
        let nf = n as f64;
        let p = self.v.powi(n);
        let d = if n == 0 { 0.0 } else { nf * self.v.powi(n - 1) };
        let dd = if n <= 1 {
            0.0
        } else {
            nf * (nf - 1.0) * self.v.powi(n - 2)
        };
        self.lift(p, d, dd)
    }

    pub fn recip(self) -> Jet {
        let r = 1.0 / self.v;
        self.lift(r, -r * r, 2.0 * r * r * r)
    }

    pub fn scale(self, k: f64) -> Jet {
        Jet::new(self.v * k, self.d1 * k, self.d2 * k)
    }
}

impl Add for Jet {
    type Output = Jet;
    fn add(self, o: Jet) -> Jet {
        Jet::new(self.v + o.v, self.d1 + o.d1, self.d2 + o.d2)
    }
}

impl Sub for Jet {
    type Output = Jet;
    fn sub(self, o: Jet) -> Jet {
        Jet::new(self.v - o.v, self.d1 - o.d1, self.d2 - o.d2)
    }
}

impl Mul for Jet {
    type Output = Jet;
    fn mul(self, o: Jet) -> Jet {
        Jet::new(
            self.v * o.v,
            self.d1 * o.v + self.v * o.d1,
            self.d2 * o.v + 2.0 * self.d1 * o.d1 + self.v * o.d2,
        )
    }
}

impl Div for Jet {
    type Output = Jet;
    fn div(self, o: Jet) -> Jet {
        self * o.recip()
    }
}

impl Neg for Jet {
    type Output = Jet;
    fn neg(self) -> Jet {
        Jet::new(-self.v, -self.d1, -self.d2)
    }
}

impl Add<f64> for Jet {
    type Output = Jet;
    fn add(self, c: f64) -> Jet {
        Jet::new(self.v + c, self.d1, self.d2)
    }
}

impl Sub<f64> for Jet {
    type Output = Jet;
    fn sub(self, c: f64) -> Jet {
        Jet::new(self.v - c, self.d1, self.d2)
    }
}

impl Mul<f64> for Jet {
    type Output = Jet;
    fn mul(self, c: f64) -> Jet {
        self.scale(c)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fd(f: impl Fn(f64) -> f64, x: f64) -> (f64, f64) {
        let h = 1e-4;
        (
            (f(x + h) - f(x - h)) / (2.0 * h),
            (f(x + h) - 2.0 * f(x) + f(x - h)) / (h * h),
        )
    }

    #[test]
    fn chain_rule_matches_finite_differences() {
        let g = |x: Jet| (x * x + 1.0).sqrt().ln() / (x.exp() + 2.0);
        let gf = |x: f64| (x * x + 1.0).sqrt().ln() / (x.exp() + 2.0);
        for &x in &[0.3, 1.1, 2.7] {
            let j = g(Jet::var(x));
            let (d1, d2) = fd(gf, x);
            assert!((j.v - gf(x)).abs() < 1e-14);
            assert!((j.d1 - d1).abs() < 1e-7, "{} {}", j.d1, d1);
            assert!((j.d2 - d2).abs() < 1e-5, "{} {}", j.d2, d2);
        }
    }

    #[test]
    fn powi_and_recip() {
        let x = Jet::var(1.7);
        let p = x.powi(3);
        assert!((p.d1 - 3.0 * 1.7f64.powi(2)).abs() < 1e-12);
        assert!((p.d2 - 6.0 * 1.7).abs() < 1e-12);
        let r = x.recip();
        assert!((r.d2 - 2.0 / 1.7f64.powi(3)).abs() < 1e-12);
    }
}
