//! Misiurewicz parameters: values `r*` at which the critical orbit lands on
//! the unstable fixed point `z > 2` after exactly three steps,
//! `f³(c) = z(r*)`, together with the transversality term
//! `Γ = dζ/dr − ∂f/∂r(c, r*)`.
//!
//! Only the three-step landing is searched; above `k = 0.58` it no longer
//! yields a parameter, and requests there fail with [`Error::Capability`].

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fixed_points::right_fixed_point;
use crate::map::{MapParams, CRITICAL_POINT};
use crate::par::{self, grid, Execution};
use crate::roots::brent;

/// Largest `k` handled by the three-step landing search.
pub const MAX_K: f64 = 0.58;
/// `|f³(c) − z|` accepted at a refined `r*`.
pub const LANDING_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MisiurewiczResult {
    pub k: f64,
    pub r_star: f64,
    /// Unstable fixed point `z(r*) > 2`.
    pub z: f64,
    /// `ζ = f(c)`.
    pub zeta: f64,
    /// `ζ₁ = f(ζ)`.
    pub zeta1: f64,
    pub dzeta_dr: f64,
    /// `∂f/∂r(c, r*) = 4 exp(r* − 2)`.
    pub df_dr_at_c: f64,
    pub gamma: f64,
}

impl MisiurewiczResult {
    /// `f³(c) − z` at the stored parameters.
    pub fn landing_residual(&self) -> Result<f64> {
        let p = MapParams::new(self.r_star, self.k)?;
        Ok(p.eval(self.zeta1)? - self.z)
    }

    pub fn multiplier_at_z(&self) -> Result<f64> {
        MapParams::new(self.r_star, self.k)?.deriv_x(self.z)
    }
}

fn check_k(k: f64) -> Result<()> {
    if !(k >= 0.0) {
        return Err(Error::InvalidParameter(format!("k must be >= 0, got {k}")));
    }
    if k > MAX_K + 1e-12 {
        return Err(Error::Capability(format!(
            "three-step Misiurewicz landing is only searched for k <= {MAX_K}, got {k}"
        )));
    }
    Ok(())
}

/// `d(r) = f³(c) − x_f(r)`, or `None` when no fixed point above `c` exists.
pub fn landing_distance(k: f64, r: f64) -> Result<Option<f64>> {
    let p = MapParams::new(r, k)?;
    let Some(z) = right_fixed_point(&p)? else {
        return Ok(None);
    };
    let (_, _, f3) = p.critical_triple()?;
    Ok(Some(f3 - z))
}

/// Derivative of the fixed-point branch `z(r)` with respect to `r`.
///
/// `z / (z − 1)` for `k = 0`, `z² / (exp(z − r) + z² − 2z)` otherwise.
pub fn dz_dr(k: f64, r: f64, z: f64) -> Result<f64> {
    let (num, den) = if k == 0.0 {
        (z, z - 1.0)
    } else {
        (z * z, (z - r).exp() + z * z - 2.0 * z)
    };
    if den.abs() < 1e-14 {
        return Err(Error::Singular(format!(
            "dz/dr denominator vanishes at z = {z}"
        )));
    }
    Ok(num / den)
}

/// `dζ/dr` from implicit differentiation of `f²(ζ(r), r) = z(r)`.
pub fn dzeta_dr(r: f64, zeta: f64, zeta1: f64, dz: f64) -> Result<f64> {
    let a = 2.0 - zeta;
    let b = 2.0 - zeta1;
    if a.abs() < 1e-12 || b.abs() < 1e-12 || zeta == 0.0 || zeta1 == 0.0 {
        return Err(Error::Singular(format!(
            "dζ/dr is singular at ζ = {zeta}, ζ₁ = {zeta1}"
        )));
    }
    Ok(dz * (zeta + zeta1 - 2.0 * r).exp() / (zeta * zeta1 * a * b)
        - zeta1 * (zeta - r).exp() / (zeta * a * b)
        - zeta / a)
}

/// `Γ = dζ/dr − ∂f/∂r(c, r*)`, recomputed from the stored triple.
pub fn gamma(res: &MisiurewiczResult) -> Result<f64> {
    let dz = dz_dr(res.k, res.r_star, res.z)?;
    let dzeta = dzeta_dr(res.r_star, res.zeta, res.zeta1, dz)?;
    let p = MapParams::new(res.r_star, res.k)?;
    Ok(dzeta - p.deriv_r(CRITICAL_POINT)?)
}

/// Fills every field of a [`MisiurewiczResult`] at the given `r`, without
/// requiring `r` to be an exact landing parameter.
pub fn evaluate_at(k: f64, r: f64) -> Result<MisiurewiczResult> {
    let p = MapParams::new(r, k)?;
    let z = right_fixed_point(&p)?
        .ok_or_else(|| Error::NoBracket(format!("no fixed point above c = 2 at r = {r}")))?;
    let zeta = p.eval(CRITICAL_POINT)?;
    let zeta1 = p.eval(zeta)?;
    let dzeta = dzeta_dr(r, zeta, zeta1, dz_dr(k, r, z)?)?;
    let df_dr_at_c = p.deriv_r(CRITICAL_POINT)?;
    Ok(MisiurewiczResult {
        k,
        r_star: r,
        z,
        zeta,
        zeta1,
        dzeta_dr: dzeta,
        df_dr_at_c,
        gamma: dzeta - df_dr_at_c,
    })
}

/// Refines a Misiurewicz parameter inside `r_bracket`.
pub fn misiurewicz_search(k: f64, r_bracket: (f64, f64)) -> Result<MisiurewiczResult> {
    check_k(k)?;
    let d = |r: f64| {
        landing_distance(k, r)?
            .ok_or_else(|| Error::NoBracket(format!("no fixed point above c = 2 at r = {r}")))
    };
    let r_star = brent(d, r_bracket.0, r_bracket.1, 1e-15)?;
    let res = evaluate_at(k, r_star)?;
    let residual = res.landing_residual()?;
    if residual.abs() > LANDING_TOL {
        return Err(Error::NoBracket(format!(
            "landing residual {residual:e} above tolerance at r = {r_star}"
        )));
    }
    let mu = res.multiplier_at_z()?;
    if mu.abs() <= 1.0 {
        return Err(Error::NotUnstable {
            z: res.z,
            multiplier: mu,
        });
    }
    Ok(res)
}

/// All grid cells of `r_range` on which `d(r)` changes sign.
pub fn bracket_scan_for_misiurewicz(
    k: f64,
    r_range: (f64, f64),
    step: f64,
) -> Result<Vec<(f64, f64)>> {
    check_k(k)?;
    if !(step > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "step must be > 0, got {step}"
        )));
    }
    let mut out = Vec::new();
    let mut prev: Option<(f64, f64)> = None;
    for r in grid(r_range.0, r_range.1, step) {
        let cur = landing_distance(k, r)?.map(|d| (r, d));
        if let (Some((r0, d0)), Some((r1, d1))) = (prev, cur) {
            if d0 == 0.0 || d0.signum() != d1.signum() {
                out.push((r0, r1));
            }
        }
        prev = cur;
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GammaRow {
    pub k: f64,
    pub result: std::result::Result<MisiurewiczResult, String>,
}

/// `r*` and `Γ` along `k ∈ [0, k_max]`.
///
/// A serial pass seeds each bracket from the previous row's `r*`; the
/// refinements then run under `exec`.
pub fn gamma_curve(k_max: f64, step: f64, exec: Execution) -> Result<Vec<GammaRow>> {
    check_k(k_max)?;
    if !(step > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "step must be > 0, got {step}"
        )));
    }
    let ks: Vec<f64> = grid(0.0, k_max, step)
        .into_iter()
        .map(|k| k.min(MAX_K))
        .collect();

    let mut brackets = Vec::with_capacity(ks.len());
    let mut seed: Option<f64> = None;
    for &k in &ks {
        let found = match seed {
            None => bracket_scan_for_misiurewicz(k, (2.0, 3.2), 1e-3)?
                .first()
                .copied(),
            Some(r) => {
                let near = bracket_scan_for_misiurewicz(k, (r - 5e-3, r + 5e-2), 5e-4)?;
                near.first().copied()
            }
        };
        if let Some((lo, hi)) = found {
            seed = Some(0.5 * (lo + hi));
        }
        brackets.push(found);
    }

    let jobs: Vec<(f64, Option<(f64, f64)>)> = ks.into_iter().zip(brackets).collect();
    Ok(par::map(exec, &jobs, |&(k, bracket)| GammaRow {
        k,
        result: match bracket {
            Some(b) => misiurewicz_search(k, b).map_err(|e| e.to_string()),
            None => Err("no sign change of f^3(c) - z near the previous r*".to_string()),
        },
    }))
}
