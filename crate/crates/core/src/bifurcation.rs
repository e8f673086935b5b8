//! Flip and fold bifurcations of fixed points.
//!
//! Closed forms give the bifurcating fixed point and parameter value; the
//! transversality expressions of the normal-form theorem are reported as raw
//! numbers (a value with magnitude below [`VIOLATION_TOL`] signals that the
//! condition fails). [`detect_bifurcation_numerically`] locates the same
//! points without the closed forms, as a cross-check.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fixed_points::{right_fixed_point, turning_points};
use crate::map::MapParams;
use crate::roots::brent;

pub const VIOLATION_TOL: f64 = 1e-8;

/// Upper end (exclusive) of the `k` range admitting a fold in `r`.
pub fn fold_k_limit() -> f64 {
    3.0 - 2.0 * std::f64::consts::SQRT_2
}

/// Lower end (exclusive) of the `r` range admitting a fold in `k`.
pub fn fold_in_k_threshold() -> f64 {
    let s2 = std::f64::consts::SQRT_2;
    2.0 - s2 - (2.0 * s2 - 2.0).ln()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BifurcationKind {
    Flip,
    Fold,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Parameter {
    R,
    K,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Criticality {
    Supercritical,
    Subcritical,
    NotApplicable,
}

/// Values of the fold (A.1, A.2) and flip (B.1, B.2) transversality
/// expressions. Only the pair matching the bifurcation kind is filled.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Conditions {
    /// `∂²f/∂x²`
    pub a1: Option<f64>,
    /// `∂f/∂(parameter)`
    pub a2: Option<f64>,
    /// `½ (∂²f/∂x²)² + ⅓ ∂³f/∂x³`
    pub b1: Option<f64>,
    /// `∂²f/∂x∂(parameter)`
    pub b2: Option<f64>,
}

impl Conditions {
    pub fn all_satisfied(&self) -> bool {
        [self.a1, self.a2, self.b1, self.b2]
            .into_iter()
            .flatten()
            .all(|v| v.abs() >= VIOLATION_TOL)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BifurcationPoint {
    pub kind: BifurcationKind,
    pub wrt: Parameter,
    /// The bifurcating fixed point.
    pub x0: f64,
    /// Bifurcation value of the parameter named by `wrt`.
    pub param0: f64,
    /// Map parameters at the bifurcation.
    pub params: MapParams,
    pub multiplier: f64,
    /// `Qf = ½ f''² + ⅓ f'''` for flips.
    pub criticality_value: Option<f64>,
    pub criticality: Criticality,
    pub conditions: Conditions,
}

fn flip_at(params: MapParams, x0: f64) -> Result<BifurcationPoint> {
    let j = params.jet(x0)?;
    let q = 0.5 * j.dxx * j.dxx + j.dxxx / 3.0;
    let criticality = if q > 0.0 {
        Criticality::Supercritical
    } else {
        Criticality::Subcritical
    };
    Ok(BifurcationPoint {
        kind: BifurcationKind::Flip,
        wrt: Parameter::R,
        x0,
        param0: params.r(),
        params,
        multiplier: j.dx,
        criticality_value: Some(q),
        criticality,
        conditions: Conditions {
            b1: Some(q),
            b2: Some(j.dxr),
            ..Default::default()
        },
    })
}

fn fold_at(params: MapParams, x0: f64, wrt: Parameter) -> Result<BifurcationPoint> {
    let j = params.jet(x0)?;
    let a2 = match wrt {
        Parameter::R => j.dr,
        Parameter::K => params.deriv_k(x0)?,
    };
    Ok(BifurcationPoint {
        kind: BifurcationKind::Fold,
        wrt,
        x0,
        param0: match wrt {
            Parameter::R => params.r(),
            Parameter::K => params.k(),
        },
        params,
        multiplier: j.dx,
        criticality_value: None,
        criticality: Criticality::NotApplicable,
        conditions: Conditions {
            a1: Some(j.dxx),
            a2: Some(a2),
            ..Default::default()
        },
    })
}

fn check_k(k: f64) -> Result<()> {
    if !(k >= 0.0 && k.is_finite()) {
        return Err(Error::InvalidParameter(format!("k must be >= 0, got {k}")));
    }
    Ok(())
}

/// Period-doubling point for fixed `k`: `x0 = (k + 3 + √(k² − 2k + 9)) / 2`,
/// `r0 = x0 − ln(x0 (x0 − 2))`.
pub fn flip_point(k: f64) -> Result<BifurcationPoint> {
    check_k(k)?;
    let x0 = (k + 3.0 + (k * k - 2.0 * k + 9.0).sqrt()) / 2.0;
    let r0 = x0 - (x0 * (x0 - 2.0)).ln();
    flip_at(MapParams::new(r0, k)?, x0)
}

/// Saddle-node points in `r` for fixed `0 ≤ k < 3 − 2√2`.
pub fn fold_points(k: f64) -> Result<Vec<BifurcationPoint>> {
    check_k(k)?;
    if k >= fold_k_limit() {
        return Err(Error::Domain(format!(
            "fold in r requires k < 3 - 2*sqrt(2) ~ {:.6}, got {k}",
            fold_k_limit()
        )));
    }
    let r_of = |x: f64| x - ((2.0 - x) * x).ln();
    if k == 0.0 {
        return Ok(vec![fold_at(MapParams::new(1.0, 0.0)?, 1.0, Parameter::R)?]);
    }
    let disc = (k * k - 6.0 * k + 1.0).sqrt();
    [(k + 1.0 - disc) / 2.0, (k + 1.0 + disc) / 2.0]
        .into_iter()
        .map(|x| fold_at(MapParams::new(r_of(x), k)?, x, Parameter::R))
        .collect()
}

/// Saddle-node point in `k` for fixed `r` above [`fold_in_k_threshold`].
pub fn fold_in_k(r: f64) -> Result<BifurcationPoint> {
    let threshold = fold_in_k_threshold();
    if !(r > threshold) {
        return Err(Error::Domain(format!(
            "fold in k requires r > {threshold:.6}, got {r}"
        )));
    }
    let hi = 2.0 - std::f64::consts::SQRT_2 - 1e-12;
    let x = brent(
        |x| Ok((2.0 * x - x * x) * (r - x).exp() - 1.0),
        1e-12,
        hi,
        0.0,
    )
    .map_err(|e| match e {
        Error::NoSignChange { .. } => {
            Error::Domain(format!("r = {r} is too close to the threshold"))
        }
        other => other,
    })?;
    let k_star = x - x / (2.0 - x);
    fold_at(MapParams::new(r, k_star)?, x, Parameter::K)
}

/// Locates a flip or fold in `r` on `r_bracket` without the closed forms.
///
/// Flip: the fixed point on the decreasing branch is re-solved at every
/// trial `r` and Brent's method is run on `μ(r) + 1`. Fold: the fixed-point
/// pair is born or dies at a turning point of `g = f − id` (where `μ = 1`),
/// so the residual is `g` evaluated at the turning point; the local maximum
/// is tried first, then the local minimum.
pub fn detect_bifurcation_numerically(
    k: f64,
    r_bracket: (f64, f64),
    kind: BifurcationKind,
) -> Result<BifurcationPoint> {
    check_k(k)?;
    let (lo, hi) = r_bracket;
    let params = |r: f64| MapParams::new(r, k);
    match kind {
        BifurcationKind::Flip => {
            let branch = |r: f64| -> Result<f64> {
                let p = params(r)?;
                right_fixed_point(&p)?.ok_or_else(|| {
                    Error::NoBracket(format!("no fixed point above c = 2 at r = {r}"))
                })
            };
            let residual = |r: f64| -> Result<f64> { Ok(params(r)?.deriv_x(branch(r)?)? + 1.0) };
            let r0 = brent(residual, lo, hi, 1e-15)?;
            flip_at(params(r0)?, branch(r0)?)
        }
        BifurcationKind::Fold => {
            let mut last_err = None;
            for pick_max in [true, false] {
                let turning = |r: f64| -> Result<f64> {
                    let p = params(r)?;
                    let turns = turning_points(&p)?;
                    let pick = if pick_max {
                        turns.last()
                    } else {
                        turns.first()
                    };
                    pick.copied()
                        .ok_or_else(|| Error::NoBracket(format!("f' < 1 everywhere at r = {r}")))
                };
                let residual = |r: f64| -> Result<f64> {
                    let x = turning(r)?;
                    Ok(params(r)?.eval(x)? - x)
                };
                match brent(residual, lo, hi, 1e-15) {
                    Ok(r0) => return fold_at(params(r0)?, turning(r0)?, Parameter::R),
                    Err(e) => last_err = Some(e),
                }
            }
            Err(last_err.expect("both turning points tried"))
        }
    }
}
