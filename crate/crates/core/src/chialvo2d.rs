//! The full two-dimensional model
//!
//! ```text
//! x ← x² exp(y − x) + k
//! y ← a y − b x + c
//! ```
//!
//! whose slow variable `y` plays the role of `r` in the reduced map.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fixed_points::find_fixed_points;
use crate::map::MapParams;
use crate::orbit::{iterate, Orbit};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FullParams {
    a: f64,
    b: f64,
    c: f64,
    k: f64,
}

impl FullParams {
    pub fn new(a: f64, b: f64, c: f64, k: f64) -> Result<Self> {
        if !(a > 0.0 && a < 1.0) {
            return Err(Error::InvalidParameter(format!(
                "a must lie in (0, 1), got {a}"
            )));
        }
        if !(0.0..1.0).contains(&b) {
            return Err(Error::InvalidParameter(format!(
                "b must lie in [0, 1), got {b}"
            )));
        }
        if !(c > 0.0 && c.is_finite()) {
            return Err(Error::InvalidParameter(format!("c must be > 0, got {c}")));
        }
        if !(k >= 0.0 && k.is_finite()) {
            return Err(Error::InvalidParameter(format!("k must be >= 0, got {k}")));
        }
        Ok(Self { a, b, c, k })
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    pub fn k(&self) -> f64 {
        self.k
    }

    /// `c / (1 − a)`, the fixed value of `y` when `b = 0`.
    pub fn y_rest(&self) -> f64 {
        self.c / (1.0 - self.a)
    }

    pub fn step(&self, x: f64, y: f64) -> Result<(f64, f64)> {
        let x1 = MapParams::new(y, self.k)?.eval(x)?;
        let y1 = self.a * y - self.b * x + self.c;
        Ok((x1, y1))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Trajectory2D {
    /// `n + 1` states, starting with the initial one.
    pub states: Vec<(f64, f64)>,
    pub params: FullParams,
}

impl Trajectory2D {
    pub fn xs(&self) -> Vec<f64> {
        self.states.iter().map(|s| s.0).collect()
    }

    pub fn ys(&self) -> Vec<f64> {
        self.states.iter().map(|s| s.1).collect()
    }
}

pub fn iterate2d(fp: &FullParams, x0: f64, y0: f64, n: usize) -> Result<Trajectory2D> {
    if n == 0 {
        return Err(Error::InvalidParameter("n must be >= 1".into()));
    }
    let mut states = Vec::with_capacity(n + 1);
    let (mut x, mut y) = (x0, y0);
    states.push((x, y));
    for _ in 0..n {
        (x, y) = fp.step(x, y)?;
        states.push((x, y));
    }
    Ok(Trajectory2D {
        states,
        params: *fp,
    })
}

/// Fixed points `(x, y)` with `x ≥ 0`, ascending in `x`.
///
/// With `y = (c − b x)/(1 − a)` the `x` equation becomes
/// `x = x² exp(α − βx) + k`, where `α = c/(1 − a)` and `β = 1 + b/(1 − a)`.
/// Setting `u = βx` turns this into the fixed-point equation of the reduced
/// map at `r = α − ln β`, `k' = βk`, so the one-dimensional solver applies.
pub fn fixed_points_2d(fp: &FullParams) -> Result<Vec<(f64, f64)>> {
    let alpha = fp.y_rest();
    let beta = 1.0 + fp.b / (1.0 - fp.a);
    let reduced = MapParams::new(alpha - beta.ln(), beta * fp.k)?;
    let config = find_fixed_points(&reduced)?;
    Ok(config
        .points
        .iter()
        .map(|pt| {
            let x = pt.x / beta;
            (x, (fp.c - fp.b * x) / (1.0 - fp.a))
        })
        .collect())
}

/// Mean of `y` over the last `window` states if their peak-to-peak spread
/// is at most `tol`.
pub fn slow_plateau(tr: &Trajectory2D, window: usize, tol: f64) -> Result<Option<f64>> {
    if window == 0 || window > tr.states.len() {
        return Err(Error::InvalidParameter(format!(
            "window {window} must lie in 1..={}",
            tr.states.len()
        )));
    }
    let tail = &tr.states[tr.states.len() - window..];
    let (lo, hi) = tail
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), s| {
            (lo.min(s.1), hi.max(s.1))
        });
    if hi - lo > tol {
        return Ok(None);
    }
    Ok(Some(tail.iter().map(|s| s.1).sum::<f64>() / window as f64))
}

/// Voltage trace of the reduced map for mixed-mode oscillation plots.
pub fn mmo_trace(p: &MapParams, x0: f64, n: usize) -> Result<Orbit> {
    iterate(p, x0, n, 0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::orbit::detect_attractor_from;

    fn fp(a: f64, b: f64, c: f64, k: f64) -> FullParams {
        FullParams::new(a, b, c, k).unwrap()
    }

    #[test]
    fn validates_ranges() {
        assert!(FullParams::new(1.0, 0.0, 0.28, 0.0).is_err());
        assert!(FullParams::new(0.5, 1.0, 0.28, 0.0).is_err());
        assert!(FullParams::new(0.5, 0.0, 0.0, 0.0).is_err());
        assert!(FullParams::new(0.5, 0.0, 0.28, -1.0).is_err());
        assert!(FullParams::new(0.5, 0.0, 0.28, 0.0).is_ok());
    }

    #[test]
    fn period_four_bursting_at_b0() {
        let tr = iterate2d(&fp(0.876, 0.0, 0.28, 0.0), 5.0, 3.0, 80).unwrap();
        let y = slow_plateau(&tr, 20, 1e-3).unwrap().unwrap();
        assert!((y - 2.258).abs() < 0.01);
        let xs = tr.xs();
        assert!((xs[80] - xs[76]).abs() < 1e-2);
        assert!((xs[80] - xs[78]).abs() > 0.3 && (xs[80] - xs[79]).abs() > 1.0);
    }

    #[test]
    fn resting_state_with_b() {
        let tr = iterate2d(&fp(0.876, 0.02, 0.28, 0.0), 5.0, 3.0, 80).unwrap();
        let y = slow_plateau(&tr, 20, 1e-3).unwrap().unwrap();
        assert!((y - 1.8).abs() < 0.01);
        assert!((tr.states[80].0 - 2.84).abs() < 0.01);
    }

    #[test]
    fn origin_rest_state_is_fixed() {
        let p = fp(0.876, 0.02, 0.28, 0.0);
        let tr = iterate2d(&p, 0.0, p.y_rest(), 50).unwrap();
        assert!(tr.states.iter().all(|&s| s == (0.0, p.y_rest())));
    }

    #[test]
    fn fixed_points_examples() {
        let p = fp(0.876, 0.02, 0.28, 0.0);
        let pts = fixed_points_2d(&p).unwrap();
        assert_eq!(pts[0], (0.0, p.y_rest()));
        assert!(pts.iter().any(|&(x, _)| (x - 2.845).abs() < 0.01));
        for &(x, y) in &pts {
            let (x1, y1) = p.step(x, y).unwrap();
            assert!((x1 - x).abs() < 1e-9 * x.max(1.0) && (y1 - y).abs() < 1e-9);
        }

        let p = fp(0.876, 0.0, 0.28, 0.1);
        let xs: Vec<f64> = fixed_points_2d(&p).unwrap().iter().map(|s| s.0).collect();
        let one_d = find_fixed_points(&MapParams::new(p.y_rest(), 0.1).unwrap()).unwrap();
        assert_eq!(xs, one_d.xs());
    }

    #[test]
    fn plateau_rejects_wandering_y() {
        let tr = Trajectory2D {
            states: (0..40)
                .map(|i| (0.0, if i % 2 == 0 { 1.0 } else { 1.5 }))
                .collect(),
            params: fp(0.5, 0.0, 1.0, 0.0),
        };
        assert_eq!(slow_plateau(&tr, 20, 1e-3).unwrap(), None);
        assert!(slow_plateau(&tr, 41, 1e-3).is_err());
    }

    #[test]
    fn mmo_traces() {
        let regular = MapParams::new(2.45, 0.2).unwrap();
        let rep = detect_attractor_from(&regular, 2.25, 64, 100_000).unwrap();
        assert!(rep.period().is_some());
        let cyc = rep.cycle.unwrap();
        assert!(cyc.iter().any(|&x| x > 4.0) && cyc.iter().any(|&x| x < 2.0));

        let chaotic = MapParams::new(2.45, 0.1).unwrap();
        assert!(detect_attractor_from(&chaotic, 2.2, 64, 100_000)
            .unwrap()
            .period()
            .is_none());

        let m = MapParams::new(1.8, 0.0).unwrap();
        let xf = find_fixed_points(&m).unwrap().largest().x;
        let o = mmo_trace(&m, xf, 20).unwrap();
        assert!(o.points.iter().all(|&x| (x - xf).abs() < 1e-12));
    }
}
