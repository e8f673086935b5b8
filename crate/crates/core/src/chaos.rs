//! The sufficient condition `f²(c) < f³(c) < c < f(c)` for topological chaos
//! and its scan over the `(r, k)` plane.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::map::{MapParams, CRITICAL_POINT, EXP_ARG_LIMIT};
use crate::par::{self, grid, Execution};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChaosScanCell {
    pub r: f64,
    pub k: f64,
    pub satisfied: bool,
    /// `f(c) − c`
    pub margin_fc: f64,
    /// `c − f³(c)`
    pub margin_f3c: f64,
    /// `f³(c) − f²(c)`
    pub margin_order: f64,
    pub margin_min: f64,
}

/// Evaluates the inequality chain with exact comparisons; the margins are
/// kept so callers can apply their own safety band.
pub fn chaos_condition(p: &MapParams) -> Result<ChaosScanCell> {
    let (f1, f2, f3) = p.critical_triple()?;
    let margin_fc = f1 - CRITICAL_POINT;
    let margin_f3c = CRITICAL_POINT - f3;
    let margin_order = f3 - f2;
    let margin_min = margin_fc.min(margin_f3c).min(margin_order);
    Ok(ChaosScanCell {
        r: p.r(),
        k: p.k(),
        satisfied: margin_fc > 0.0 && margin_f3c > 0.0 && margin_order > 0.0,
        margin_fc,
        margin_f3c,
        margin_order,
        margin_min,
    })
}

/// `f³(2) = 256 exp(7r − 8 − 8e^{r−2} − 16 exp(3r − 4 − 4e^{r−2}))` for `k = 0`.
pub fn f3_closed_form_k0(r: f64) -> Result<f64> {
    if !r.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "r must be finite, got {r}"
        )));
    }
    let e = (r - 2.0).exp();
    let inner = 3.0 * r - 4.0 - 4.0 * e;
    if inner > EXP_ARG_LIMIT {
        return Err(Error::NumericRange { exponent: inner });
    }
    let outer = 7.0 * r - 8.0 - 8.0 * e - 16.0 * inner.exp();
    if outer > EXP_ARG_LIMIT {
        return Err(Error::NumericRange { exponent: outer });
    }
    Ok(256.0 * outer.exp())
}

/// `(h, g) = (f³(2) − 2, f²(2) − f³(2))` at `k = 0`.
pub fn h_and_g(r: f64) -> Result<(f64, f64)> {
    let (_, f2, f3) = MapParams::new(r, 0.0)?.critical_triple()?;
    Ok((f3 - CRITICAL_POINT, f2 - f3))
}

/// Every cell of the grid, row-major with `k` outer and `r` inner.
pub fn chaos_scan(
    r_range: (f64, f64),
    r_step: f64,
    k_range: (f64, f64),
    k_step: f64,
    exec: Execution,
) -> Result<Vec<ChaosScanCell>> {
    if !(r_step > 0.0 && k_step > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "steps must be positive (r_step = {r_step}, k_step = {k_step})"
        )));
    }
    let rs = grid(r_range.0, r_range.1, r_step);
    let ks = grid(k_range.0, k_range.1, k_step);
    let cells: Vec<(f64, f64)> = ks
        .iter()
        .flat_map(|&k| rs.iter().map(move |&r| (r, k)))
        .collect();
    par::map(exec, &cells, |&(r, k)| {
        chaos_condition(&MapParams::new(r, k)?)
    })
    .into_iter()
    .collect()
}
