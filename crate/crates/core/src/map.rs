//! The one-dimensional Chialvo map `f(x) = x² exp(r − x) + k` and its
//! derivatives.
//!
//! Every derivative below is written in closed form and shares the single
//! `exp(r − x)` factor computed by [`MapParams::jet`], so identities such as
//! `∂²f/∂x∂r = f'` hold bit for bit.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The critical point of `f` on `(0, ∞)`; independent of `r` and `k`.
pub const CRITICAL_POINT: f64 = 2.0;

/// Largest exponent accepted by [`MapParams::eval`] before reporting a
/// numeric-range error.
pub const EXP_ARG_LIMIT: f64 = 700.0;

/// Parameters `(r, k)` of the reduced map. `k` is never negative.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MapParams {
    r: f64,
    k: f64,
}

/// Value and partial derivatives of `f` at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Jet {
    pub value: f64,
    pub dx: f64,
    pub dxx: f64,
    pub dxxx: f64,
    pub dr: f64,
    pub dxr: f64,
}

impl MapParams {
    pub fn new(r: f64, k: f64) -> Result<Self> {
        if !r.is_finite() || !k.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "parameters must be finite (r = {r}, k = {k})"
            )));
        }
        if k < 0.0 {
            return Err(Error::InvalidParameter(format!("k must be >= 0, got {k}")));
        }
        Ok(Self { r, k })
    }

    pub fn r(&self) -> f64 {
        self.r
    }

    pub fn k(&self) -> f64 {
        self.k
    }

    pub fn with_r(&self, r: f64) -> Result<Self> {
        Self::new(r, self.k)
    }

    pub fn with_k(&self, k: f64) -> Result<Self> {
        Self::new(self.r, k)
    }

    fn exp_factor(&self, x: f64) -> Result<f64> {
        if !x.is_finite() {
            return Err(Error::NotFinite { x, fx: x });
        }
        let exponent = self.r - x;
        if exponent > EXP_ARG_LIMIT {
            return Err(Error::NumericRange { exponent });
        }
        Ok(exponent.exp())
    }

    /// `x² exp(r − x)`, evaluated in log space once `x²` itself would overflow.
    fn quadratic_term(&self, x: f64, e: f64) -> f64 {
        if x.abs() > 1e150 {
            (2.0 * x.abs().ln() + self.r - x).exp()
        } else {
            x * x * e
        }
    }

    pub fn eval(&self, x: f64) -> Result<f64> {
        let e = self.exp_factor(x)?;
        Ok(self.quadratic_term(x, e) + self.k)
    }

    /// All closed-form derivatives at `x`, sharing one exponential.
    pub fn jet(&self, x: f64) -> Result<Jet> {
        let e = self.exp_factor(x)?;
        let sq = self.quadratic_term(x, e);
        let slope = x * (2.0 - x) * e;
        Ok(Jet {
            value: sq + self.k,
            dx: slope,
            dxx: e * (x * x - 4.0 * x + 2.0),
            dxxx: e * (-x * x + 6.0 * x - 6.0),
            dr: sq,
            dxr: slope,
        })
    }

    pub fn deriv_x(&self, x: f64) -> Result<f64> {
        Ok(self.jet(x)?.dx)
    }

    pub fn deriv2_x(&self, x: f64) -> Result<f64> {
        Ok(self.jet(x)?.dxx)
    }

    pub fn deriv3_x(&self, x: f64) -> Result<f64> {
        Ok(self.jet(x)?.dxxx)
    }

    /// `∂f/∂r = x² exp(r − x)`.
    pub fn deriv_r(&self, x: f64) -> Result<f64> {
        Ok(self.jet(x)?.dr)
    }

    /// `∂f/∂k` is identically one.
    pub fn deriv_k(&self, _x: f64) -> Result<f64> {
        Ok(1.0)
    }

    pub fn deriv_xr(&self, x: f64) -> Result<f64> {
        Ok(self.jet(x)?.dxr)
    }

    /// `∂²f/∂x∂k` vanishes, so `k` can never drive a flip.
    pub fn deriv_xk(&self, _x: f64) -> Result<f64> {
        Ok(0.0)
    }

    /// Schwarzian derivative. It does not depend on `(r, k)`.
    pub fn schwarzian(&self, x: f64) -> f64 {
        schwarzian(x)
    }

    /// `n`-fold iterate of `x`.
    pub fn iterate_n(&self, mut x: f64, n: usize) -> Result<f64> {
        for _ in 0..n {
            x = self.eval(x)?;
        }
        Ok(x)
    }

    /// `(f(c), f²(c), f³(c))` for the critical point `c = 2`.
    pub fn critical_triple(&self) -> Result<(f64, f64, f64)> {
        let f1 = self.eval(CRITICAL_POINT)?;
        let f2 = self.eval(f1)?;
        let f3 = self.eval(f2)?;
        Ok((f1, f2, f3))
    }
}

/// Closed-form Schwarzian derivative
/// `−½ (x⁴ − 8x³ + 24x² − 24x + 12) / (2x − x²)²`.
///
/// Returns `f64::NEG_INFINITY` at the zeros of `f'` (`x = 0` and `x = 2`).
pub fn schwarzian(x: f64) -> f64 {
    let denom = 2.0 * x - x * x;
    if denom == 0.0 {
        return f64::NEG_INFINITY;
    }
    let num = (((x - 8.0) * x + 24.0) * x - 24.0) * x + 12.0;
    -0.5 * num / (denom * denom)
}
