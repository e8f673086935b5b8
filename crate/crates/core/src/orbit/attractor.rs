use serde::{Deserialize, Serialize};

use super::{birkhoff_histogram, lyapunov_raw, Histogram};
use crate::error::Result;
use crate::map::{MapParams, CRITICAL_POINT};

pub const TRANSIENT: usize = 10_000;
pub const DEFAULT_N_ITER: usize = 100_000;
pub const DEFAULT_MAX_PERIOD: usize = 64;
/// `|f^n(x) − x|` accepted as cycle closure.
pub const CLOSURE_TOL: f64 = 1e-9;
const INTERVAL_LYAPUNOV: f64 = 0.01;
const RECHECK_EVERY: usize = 1_000;
const HISTOGRAM_BINS: usize = 100;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum AttractorKind {
    Periodic {
        period: usize,
    },
    /// No cycle closed and the Lyapunov estimate is clearly positive. This is
    /// a heuristic label; Cantor attractors are never claimed.
    IntervalCandidate,
    Undetermined,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AttractorReport {
    pub kind: AttractorKind,
    /// Cycle points starting from the smallest, in orbit order.
    pub cycle: Option<Vec<f64>>,
    pub lyapunov: f64,
    pub histogram: Option<Histogram>,
}

impl AttractorReport {
    pub fn period(&self) -> Option<usize> {
        match self.kind {
            AttractorKind::Periodic { period } => Some(period),
            _ => None,
        }
    }

    /// Same period and every cycle point of `self` within `tol` of one of
    /// `other`'s.
    pub fn same_cycle(&self, other: &AttractorReport, tol: f64) -> bool {
        match (&self.cycle, &other.cycle) {
            (Some(a), Some(b)) => {
                a.len() == b.len() && a.iter().all(|x| b.iter().any(|y| (x - y).abs() <= tol))
            }
            _ => false,
        }
    }
}

/// Smallest `q ≤ max_period` for which the orbit of `x` closes into an
/// attracting cycle, together with its points and multiplier.
fn close_cycle(p: &MapParams, x: f64, max_period: usize) -> Result<Option<(Vec<f64>, f64)>> {
    let mut ys = Vec::with_capacity(2 * max_period + 1);
    ys.push(x);
    for i in 0..2 * max_period {
        ys.push(p.eval(ys[i])?);
    }
    for q in 1..=max_period {
        if (0..q).all(|i| (ys[i + q] - ys[i]).abs() <= CLOSURE_TOL) {
            let mut mu = 1.0;
            for &y in &ys[..q] {
                mu *= p.deriv_x(y)?;
            }
            if mu.abs() <= 1.0 + 1e-9 {
                return Ok(Some((ys[..q].to_vec(), mu)));
            }
        }
    }
    Ok(None)
}

fn rotate_to_min(mut cycle: Vec<f64>) -> Vec<f64> {
    let start = (0..cycle.len())
        .min_by(|&a, &b| cycle[a].total_cmp(&cycle[b]))
        .unwrap_or(0);
    cycle.rotate_left(start);
    cycle
}

/// Follows the orbit of `x0` past [`TRANSIENT`] iterates and then looks for
/// an attracting cycle of period `≤ max_period` for up to `n_iter` further
/// iterates.
pub fn detect_attractor_from(
    p: &MapParams,
    x0: f64,
    max_period: usize,
    n_iter: usize,
) -> Result<AttractorReport> {
    let max_period = max_period.max(1);
    let mut x = p.iterate_n(x0, TRANSIENT)?;
    let mut used = 0;
    loop {
        if let Some((cycle, mu)) = close_cycle(p, x, max_period)? {
            let period = cycle.len();
            return Ok(AttractorReport {
                kind: AttractorKind::Periodic { period },
                cycle: Some(rotate_to_min(cycle)),
                lyapunov: mu.abs().ln() / period as f64,
                histogram: None,
            });
        }
        if used >= n_iter {
            break;
        }
        let step = RECHECK_EVERY.min(n_iter - used);
        x = p.iterate_n(x, step)?;
        used += step;
    }

    let lyapunov = lyapunov_raw(p, x, n_iter.max(1), 0)?;
    if lyapunov > INTERVAL_LYAPUNOV {
        let histogram = birkhoff_histogram(p, x, n_iter.max(1), HISTOGRAM_BINS).ok();
        Ok(AttractorReport {
            kind: AttractorKind::IntervalCandidate,
            cycle: None,
            lyapunov,
            histogram,
        })
    } else {
        Ok(AttractorReport {
            kind: AttractorKind::Undetermined,
            cycle: None,
            lyapunov,
            histogram: None,
        })
    }
}

/// Attractor reached by the critical orbit. By Singer's theorem this is the
/// only candidate for a periodic attractor.
pub fn detect_periodic_attractor(
    p: &MapParams,
    max_period: usize,
    n_iter: usize,
) -> Result<AttractorReport> {
    detect_attractor_from(p, CRITICAL_POINT, max_period, n_iter)
}
