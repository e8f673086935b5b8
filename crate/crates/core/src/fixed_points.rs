//! Fixed points of `f_{r,k}` on `[0, ∞)` and the dynamical core.
//!
//! `g(x) = f(x) − x` has at most two turning points, both on `(0, 2)` where
//! `f'(x) = 1`. Splitting `[0, X]` at those turning points leaves monotone
//! pieces with at most one root each, so every root is bracketed exactly
//! once; a turning point where `|g| < 1e-12` is a tangency (fold in
//! progress) and is reported once with the degenerate flag.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::map::{MapParams, CRITICAL_POINT};
use crate::roots::brent;

/// Width of the band `|1 − |μ|| ≤ NEUTRAL_BAND` classified as neutral.
pub const NEUTRAL_BAND: f64 = 1e-9;
/// `|g|` below this at a turning point of `g` counts as a double root.
pub const TANGENCY_TOL: f64 = 1e-12;
/// Two roots closer than this are reported as one degenerate root.
pub const COINCIDENCE_TOL: f64 = 1e-8;
/// Relative residual accepted by [`classify_stability`].
pub const FIXED_POINT_TOL: f64 = 1e-10;

const INFLECTION: f64 = 2.0 - std::f64::consts::SQRT_2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Stability {
    Superattracting,
    Attracting,
    Neutral,
    Repelling,
}

impl Stability {
    pub fn from_multiplier(mu: f64) -> Self {
        let m = mu.abs();
        if m <= 1e-12 {
            Stability::Superattracting
        } else if (1.0 - m).abs() <= NEUTRAL_BAND {
            Stability::Neutral
        } else if m < 1.0 {
            Stability::Attracting
        } else {
            Stability::Repelling
        }
    }

    /// Neutral orbits attract for maps with negative Schwarzian derivative.
    pub fn is_attracting(self) -> bool {
        !matches!(self, Stability::Repelling)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Branch {
    Left,
    Critical,
    Right,
}

impl Branch {
    pub fn of(x: f64) -> Self {
        if (x - CRITICAL_POINT).abs() <= 1e-12 {
            Branch::Critical
        } else if x < CRITICAL_POINT {
            Branch::Left
        } else {
            Branch::Right
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FixedPoint {
    pub x: f64,
    pub multiplier: f64,
    pub stability: Stability,
    pub branch: Branch,
}

/// All fixed points on `[0, ∞)`, ascending.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FixedPointConfiguration {
    pub points: Vec<FixedPoint>,
    /// Set when a double root (tangency) was detected.
    pub degenerate: bool,
}

impl FixedPointConfiguration {
    pub fn count(&self) -> usize {
        self.points.len()
    }

    pub fn largest(&self) -> &FixedPoint {
        self.points
            .last()
            .expect("a fixed point always exists on [0, f(2)]")
    }

    pub fn xs(&self) -> Vec<f64> {
        self.points.iter().map(|p| p.x).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CoreCase {
    /// All fixed points lie left of `c`; the largest attracts the critical orbit.
    TrivialGlobalAttractor,
    /// `k ≥ 2`: the dynamics lives on the decreasing branch.
    DecreasingBranchOnly,
    /// `[f²(c), f(c)]`.
    CoreF2cFc,
    /// `[x0, y0]` with `y0` the right preimage of the leftmost fixed point.
    CoreX0Y0,
    /// The critical orbit falls below the middle fixed point; the returned
    /// interval contains the attracting left fixed point.
    LeftFixedPointInside,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DynamicalCore {
    pub lo: f64,
    pub hi: f64,
    pub case_tag: CoreCase,
    pub contains_unique_fixed_point: bool,
}

impl DynamicalCore {
    pub fn contains(&self, x: f64) -> bool {
        x >= self.lo && x <= self.hi
    }

    /// Checks `f([lo, hi]) ⊆ [lo, hi]` on `samples` evenly spaced points,
    /// allowing a relative slack of `1e-12` for rounding at the endpoints.
    pub fn is_invariant(&self, p: &MapParams, samples: usize) -> Result<bool> {
        let slack = 1e-12 * self.hi.abs().max(1.0);
        let n = samples.max(2);
        for i in 0..n {
            let x = self.lo + (self.hi - self.lo) * i as f64 / (n - 1) as f64;
            let y = p.eval(x)?;
            if y < self.lo - slack || y > self.hi + slack {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

fn g(p: &MapParams, x: f64) -> Result<f64> {
    Ok(p.eval(x)? - x)
}

/// Turning points of `g` (solutions of `f'(x) = 1`), ascending.
pub(crate) fn turning_points(p: &MapParams) -> Result<Vec<f64>> {
    let peak = p.deriv_x(INFLECTION)? - 1.0;
    if peak < 0.0 {
        return Ok(Vec::new());
    }
    if peak == 0.0 {
        return Ok(vec![INFLECTION]);
    }
    let h = |x: f64| Ok(p.deriv_x(x)? - 1.0);
    let a = brent(h, 0.0, INFLECTION, 0.0)?;
    let b = brent(h, INFLECTION, CRITICAL_POINT, 0.0)?;
    Ok(vec![a, b])
}

/// Upper end of the root search interval; `f(x) ≤ f(2)` bounds every root.
pub fn search_upper_bound(p: &MapParams) -> Result<f64> {
    Ok((p.eval(CRITICAL_POINT)? + 1.0).max(10.0))
}

pub fn classify_stability(p: &MapParams, x: f64) -> Result<FixedPoint> {
    let jet = p.jet(x)?;
    let residual = jet.value - x;
    if residual.abs() > FIXED_POINT_TOL * x.abs().max(1.0) {
        return Err(Error::NotAFixedPoint { x, residual });
    }
    Ok(FixedPoint {
        x,
        multiplier: jet.dx,
        stability: Stability::from_multiplier(jet.dx),
        branch: Branch::of(x),
    })
}

pub fn find_fixed_points(p: &MapParams) -> Result<FixedPointConfiguration> {
    let upper = search_upper_bound(p)?;
    let turns = turning_points(p)?;
    let tangent: Vec<bool> = turns
        .iter()
        .map(|&t| g(p, t).map(|v| v.abs() < TANGENCY_TOL))
        .collect::<Result<_>>()?;

    let mut roots: Vec<(f64, bool)> = Vec::new();
    if p.k() == 0.0 {
        roots.push((0.0, false));
    }

    let mut breaks = vec![0.0];
    breaks.extend(turns.iter().copied());
    breaks.push(upper);
    let is_tangent = |x: f64| turns.iter().zip(&tangent).any(|(&t, &is_t)| is_t && t == x);

    for w in breaks.windows(2) {
        let (s, t) = (w[0], w[1]);
        // g(0) = 0 when k = 0 and g decreases away from it.
        if p.k() == 0.0 && s == 0.0 {
            continue;
        }
        // A monotone piece touching a tangency has no root besides it.
        if is_tangent(s) || is_tangent(t) {
            continue;
        }
        let (gs, gt) = (g(p, s)?, g(p, t)?);
        if gs == 0.0 {
            roots.push((s, false));
        } else if gs.signum() != gt.signum() && gt != 0.0 {
            roots.push((brent(|x| g(p, x), s, t, 0.0)?, false));
        }
    }
    for (&t, &is_t) in turns.iter().zip(&tangent) {
        if is_t {
            roots.push((t, true));
        }
    }
    roots.sort_by(|a, b| a.0.total_cmp(&b.0));

    let mut merged: Vec<(f64, bool)> = Vec::with_capacity(roots.len());
    for (x, deg) in roots {
        match merged.last_mut() {
            Some(last) if (x - last.0).abs() <= COINCIDENCE_TOL => {
                last.1 = true;
                if deg {
                    last.0 = x;
                }
            }
            _ => merged.push((x, deg)),
        }
    }

    let degenerate = merged.iter().any(|&(_, d)| d);
    let points = merged
        .into_iter()
        .map(|(x, _)| classify_stability(p, x))
        .collect::<Result<Vec<_>>>()?;
    Ok(FixedPointConfiguration { points, degenerate })
}

/// The unique fixed point on the decreasing branch, if `f(2) > 2`.
pub fn right_fixed_point(p: &MapParams) -> Result<Option<f64>> {
    let top = p.eval(CRITICAL_POINT)?;
    if top <= CRITICAL_POINT {
        return Ok(None);
    }
    // g(2) > 0 and g(f(2)) = f(f(2)) − f(2) ≤ 0; g is strictly decreasing here.
    brent(|x| g(p, x), CRITICAL_POINT, top, 0.0).map(Some)
}

/// `f²(c) < c < f(c)`.
pub fn core_condition(p: &MapParams) -> Result<bool> {
    let (f1, f2, _) = p.critical_triple()?;
    Ok(f2 < CRITICAL_POINT && CRITICAL_POINT < f1)
}

/// The point `y ≥ 2` with `f(y) = target`, found on the decreasing branch.
pub fn right_preimage(p: &MapParams, target: f64) -> Result<f64> {
    let top = p.eval(CRITICAL_POINT)?;
    if target == top {
        return Ok(CRITICAL_POINT);
    }
    if target > top {
        return Err(Error::NoBracket(format!(
            "target {target} exceeds the maximum f(2) = {top}"
        )));
    }
    if target <= p.k() {
        return Err(Error::NoBracket(format!(
            "target {target} is not above the infimum k = {}",
            p.k()
        )));
    }
    let mut far = 2.0 * CRITICAL_POINT;
    while p.eval(far)? >= target {
        far *= 2.0;
        if far > 1e6 {
            return Err(Error::NoBracket(format!(
                "f stays above {target} on [2, 1e6]"
            )));
        }
    }
    brent(|y| Ok(p.eval(y)? - target), CRITICAL_POINT, far, 0.0)
}

fn count_inside(points: &[FixedPoint], lo: f64, hi: f64) -> usize {
    let slack = 1e-12 * hi.abs().max(1.0);
    points
        .iter()
        .filter(|fp| fp.x >= lo - slack && fp.x <= hi + slack)
        .count()
}

pub fn dynamical_core(p: &MapParams) -> Result<DynamicalCore> {
    let (f1, f2, _) = p.critical_triple()?;
    if f2 < 0.0 {
        return Err(Error::Domain(format!("f²(2) = {f2} is negative")));
    }
    if p.k() >= 2.0 {
        return Ok(DynamicalCore {
            lo: f2,
            hi: f1,
            case_tag: CoreCase::DecreasingBranchOnly,
            contains_unique_fixed_point: true,
        });
    }

    let config = find_fixed_points(p)?;
    let pts = &config.points;
    let x_max = config.largest().x;

    let core = |lo: f64, hi: f64, case_tag| DynamicalCore {
        lo,
        hi,
        case_tag,
        contains_unique_fixed_point: count_inside(pts, lo, hi) == 1,
    };

    if x_max <= CRITICAL_POINT {
        return Ok(core(x_max, f1, CoreCase::TrivialGlobalAttractor));
    }
    let left: Vec<f64> = pts.iter().map(|fp| fp.x).filter(|&x| x < x_max).collect();
    let (Some(&leftmost), Some(&middle)) = (left.first(), left.last()) else {
        return Ok(core(f2, f1, CoreCase::CoreF2cFc));
    };
    if f2 >= middle {
        return Ok(core(f2, f1, CoreCase::CoreF2cFc));
    }
    if p.k() == 0.0 {
        return Ok(core(0.0, f1, CoreCase::LeftFixedPointInside));
    }
    // [x0, y0] is forward invariant exactly when f(2) ≤ y0, i.e. f²(2) ≥ x0.
    if f2 >= leftmost {
        let y0 = right_preimage(p, leftmost)?;
        Ok(core(leftmost, y0, CoreCase::CoreX0Y0))
    } else {
        Ok(core(f2, f1, CoreCase::LeftFixedPointInside))
    }
}
