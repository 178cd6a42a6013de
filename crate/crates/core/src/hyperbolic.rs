//! Hyperbolic functions in exponent-shifted form.
//!
//! `cosh(2 N L)` overflows an `f64` once `N L` passes ~355, yet the ratios the
//! solvers need are bounded. A [`Scaled`] value keeps `mantissa * e^exponent`
//! with the exponential left unevaluated; products and quotients combine the
//! exponents exactly and only the final ratio is exponentiated.

use std::ops::{Div, Mul};

#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct Scaled {
    pub mantissa: f64,
    pub exponent: f64,
}

impl Scaled {
    pub fn value(self) -> f64 {
        if self.mantissa == 0.0 {
            return 0.0;
        }
        self.mantissa * self.exponent.exp()
    }
}

impl Mul for Scaled {
    type Output = Scaled;

    fn mul(self, rhs: Scaled) -> Scaled {
        Scaled {
            mantissa: self.mantissa * rhs.mantissa,
            exponent: self.exponent + rhs.exponent,
        }
    }
}

impl Div for Scaled {
    type Output = Scaled;

    fn div(self, rhs: Scaled) -> Scaled {
        Scaled {
            mantissa: self.mantissa / rhs.mantissa,
            exponent: self.exponent - rhs.exponent,
        }
    }
}

/// `cosh(z) = e^|z| (1 + e^{-2|z|}) / 2`.
pub(crate) fn cosh(z: f64) -> Scaled {
    let a = z.abs();
    Scaled {
        mantissa: 0.5 * (1.0 + (-2.0 * a).exp()),
        exponent: a,
    }
}

/// `sinh(z) = e^z (1 - e^{-2z}) / 2` for `z >= 0`; odd extension otherwise.
pub(crate) fn sinh(z: f64) -> Scaled {
    let a = z.abs();
    Scaled {
        mantissa: (-0.5 * (-2.0 * a).exp_m1()).copysign(z),
        exponent: a,
    }
}

/// `2 cosh(z)`, i.e. `lambda^(a + 1/2) + lambda^-(a + 1/2)` when `z = (2a + 1) L`.
pub(crate) fn two_cosh(z: f64) -> Scaled {
    let c = cosh(z);
    Scaled {
        mantissa: 2.0 * c.mantissa,
        exponent: c.exponent,
    }
}

/// `2 sinh(z)`, i.e. `lambda^k - lambda^-k` when `z = 2 k L`.
pub(crate) fn two_sinh(z: f64) -> Scaled {
    let c = sinh(z);
    Scaled {
        mantissa: 2.0 * c.mantissa,
        exponent: c.exponent,
    }
}
