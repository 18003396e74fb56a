//! Second-order forward-mode jets.
//!
//! A [`Jet`] carries a value together with its first and second derivative with
//! respect to a single scalar variable. Arithmetic propagates both derivatives
//! exactly, so profile expressions get `w, w', w''` from one evaluation.

use std::ops::{Add, Div, Mul, Neg, Sub};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Jet {
    pub v: f64,
    pub d1: f64,
    pub d2: f64,
}

impl Jet {
    pub const fn new(v: f64, d1: f64, d2: f64) -> Self {
        Self { v, d1, d2 }
    }

    pub const fn constant(v: f64) -> Self {
        Self::new(v, 0.0, 0.0)
    }

    /// The independent variable evaluated at `t`.
    pub const fn var(t: f64) -> Self {
        Self::new(t, 1.0, 0.0)
    }

    /// Compose with a scalar function given its value and first two derivatives at `self.v`.
    #[inline]
    pub fn chain(self, g: f64, g1: f64, g2: f64) -> Self {
        Self::new(g, g1 * self.d1, g2 * self.d1 * self.d1 + g1 * self.d2)
    }

    pub fn exp(self) -> Self {
        let e = self.v.exp();
        self.chain(e, e, e)
    }

    pub fn ln(self) -> Self {
        let x = self.v;
        self.chain(x.ln(), 1.0 / x, -1.0 / (x * x))
    }

    pub fn sin(self) -> Self {
        let (s, c) = self.v.sin_cos();
        self.chain(s, c, -s)
    }

    pub fn cos(self) -> Self {
        let (s, c) = self.v.sin_cos();
        self.chain(c, -s, -c)
    }

    pub fn sinh(self) -> Self {
        let (s, c) = (self.v.sinh(), self.v.cosh());
        self.chain(s, c, s)
    }

    pub fn cosh(self) -> Self {
        let (s, c) = (self.v.sinh(), self.v.cosh());
        self.chain(c, s, c)
    }

    pub fn sqrt(self) -> Self {
        let r = self.v.sqrt();
        self.chain(r, 0.5 / r, -0.25 / (r * self.v))
    }

    /// `self^k` for a constant exponent. Integer exponents accept negative bases.
    pub fn powf(self, k: f64) -> Self {
        let x = self.v;
        if k == 0.0 {
            return Self::constant(1.0);
        }
        if k.fract() == 0.0 && k.abs() < 1.0e9 {
            let ki = k as i32;
            let g = x.powi(ki);
            let g1 = k * x.powi(ki - 1);
            let g2 = k * (k - 1.0) * x.powi(ki - 2);
            return self.chain(g, g1, g2);
        }
        let g = x.powf(k);
        self.chain(g, k * x.powf(k - 1.0), k * (k - 1.0) * x.powf(k - 2.0))
    }

    /// General power `self^rhs` through `exp(rhs * ln self)`; falls back to
    /// [`Jet::powf`] when the exponent carries no derivative.
    pub fn pow(self, rhs: Jet) -> Self {
        if rhs.d1 == 0.0 && rhs.d2 == 0.0 {
            self.powf(rhs.v)
        } else {
            (rhs * self.ln()).exp()
        }
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
        let inv = Jet::new(1.0 / o.v, 0.0, 0.0);
        let r = o.chain(inv.v, -inv.v * inv.v, 2.0 * inv.v * inv.v * inv.v);
        self * r
    }
}

impl Neg for Jet {
    type Output = Jet;
    fn neg(self) -> Jet {
        Jet::new(-self.v, -self.d1, -self.d2)
    }
}

impl Mul<f64> for Jet {
    type Output = Jet;
    fn mul(self, k: f64) -> Jet {
        Jet::new(self.v * k, self.d1 * k, self.d2 * k)
    }
}

impl Add<f64> for Jet {
    type Output = Jet;
    fn add(self, k: f64) -> Jet {
        Jet::new(self.v + k, self.d1, self.d2)
    }
}
