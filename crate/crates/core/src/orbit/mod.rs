//! Orbits, Lyapunov exponents and orbit histograms.

mod attractor;
mod symbolic;

pub use attractor::{
    detect_attractor_from, detect_periodic_attractor, AttractorKind, AttractorReport, CLOSURE_TOL,
    DEFAULT_MAX_PERIOD, DEFAULT_N_ITER, TRANSIENT,
};
pub use symbolic::{itinerary, kneading, orbit_order_signature, Itinerary, Symbol, C_TOL};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fixed_points::dynamical_core;
use crate::map::{MapParams, CRITICAL_POINT};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Orbit {
    pub initial: f64,
    pub points: Vec<f64>,
    pub params: MapParams,
}

/// Discards `transient` iterates of `x0` and returns the next `n`, the first
/// of which is `f^transient(x0)`.
pub fn iterate(p: &MapParams, x0: f64, n: usize, transient: usize) -> Result<Orbit> {
    let mut x = p.iterate_n(x0, transient)?;
    let mut points = Vec::with_capacity(n);
    for i in 0..n {
        if i > 0 {
            x = p.eval(x)?;
        }
        points.push(x);
    }
    Ok(Orbit {
        initial: x0,
        points,
        params: *p,
    })
}

fn log_slope(p: &MapParams, x: f64) -> Result<f64> {
    if (x - CRITICAL_POINT).abs() <= 1e-300 {
        return Ok(f64::NEG_INFINITY);
    }
    Ok(p.deriv_x(x)?.abs().ln())
}

/// Plain Birkhoff average of `log|f'|` over `n` post-transient iterates.
pub fn lyapunov_raw(p: &MapParams, x0: f64, n: usize, transient: usize) -> Result<f64> {
    if n == 0 {
        return Err(Error::InvalidParameter("n must be >= 1".into()));
    }
    let mut x = p.iterate_n(x0, transient)?;
    let mut sum = 0.0;
    for _ in 0..n {
        sum += log_slope(p, x)?;
        if sum == f64::NEG_INFINITY {
            return Ok(sum);
        }
        x = p.eval(x)?;
    }
    Ok(sum / n as f64)
}

const LOCK_MAX_PERIOD: usize = 64;
const LOCK_REPEATS: usize = 3;
const LOCK_TOL: f64 = 1e-10;

/// Period `q` with which the tail of `hist` has repeated `LOCK_REPEATS` times.
fn locked_period(hist: &[f64]) -> Option<usize> {
    let j = hist.len().checked_sub(1)?;
    let x = hist[j];
    let tol = LOCK_TOL * x.abs().max(1.0);
    (1..=LOCK_MAX_PERIOD).find(|&q| {
        j >= LOCK_REPEATS * q
            && (0..LOCK_REPEATS * q).all(|i| (hist[j - i] - hist[j - i - q]).abs() <= tol)
    })
}

/// Lyapunov exponent along the orbit of `x0`.
///
/// Once the orbit repeats itself with some period `q ≤ 64` to a relative
/// `1e-10` over three consecutive periods, the remaining iterates are taken
/// from that cycle instead of the floating-point orbit. This keeps an orbit
/// that lands exactly on an unstable cycle (for instance the critical orbit
/// at a Misiurewicz parameter) on that cycle, where rounding would otherwise
/// push it off. Chaotic and attracting orbits are unaffected in practice;
/// [`lyapunov_raw`] gives the unmodified average.
///
/// Returns `-∞` when the orbit hits the critical point.
pub fn lyapunov(p: &MapParams, x0: f64, n: usize, transient: usize) -> Result<f64> {
    if n == 0 {
        return Err(Error::InvalidParameter("n must be >= 1".into()));
    }
    let window = (LOCK_REPEATS + 1) * LOCK_MAX_PERIOD + 1;
    let mut hist: Vec<f64> = Vec::with_capacity(2 * window);
    let mut x = x0;
    let mut sum = 0.0;
    let total = transient + n;
    let mut i = 0;
    while i < total {
        hist.push(x);
        if let Some(q) = locked_period(&hist) {
            let cycle = &hist[hist.len() - q..];
            let logs = cycle
                .iter()
                .map(|&y| log_slope(p, y))
                .collect::<Result<Vec<_>>>()?;
            // hist.last() is iterate i; cycle[q - 1] is its value.
            for m in i.max(transient)..total {
                sum += logs[(q - 1 + m - i) % q];
            }
            return Ok(sum / n as f64);
        }
        if hist.len() >= 2 * window {
            hist.drain(..window);
        }
        if i >= transient {
            sum += log_slope(p, x)?;
            if sum == f64::NEG_INFINITY {
                return Ok(sum);
            }
        }
        i += 1;
        if i < total {
            x = p.eval(x)?;
        }
    }
    Ok(sum / n as f64)
}

/// Orbit frequencies binned over the dynamical core.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Histogram {
    pub lo: f64,
    pub hi: f64,
    /// Fraction of iterates per bin.
    pub mass: Vec<f64>,
    /// Fraction of iterates outside `[lo, hi]`.
    pub outside: f64,
}

impl Histogram {
    pub fn bin_edges(&self) -> Vec<f64> {
        let n = self.mass.len();
        (0..=n)
            .map(|i| self.lo + (self.hi - self.lo) * i as f64 / n as f64)
            .collect()
    }

    pub fn l1_distance(&self, other: &Histogram) -> f64 {
        self.mass
            .iter()
            .zip(&other.mass)
            .map(|(a, b)| (a - b).abs())
            .sum::<f64>()
            + (self.outside - other.outside).abs()
    }
}

/// Iterates discarded before [`birkhoff_histogram`] starts counting.
pub const HISTOGRAM_TRANSIENT: usize = 1_000;

pub fn birkhoff_histogram(p: &MapParams, x0: f64, n: usize, bins: usize) -> Result<Histogram> {
    if n == 0 || bins == 0 {
        return Err(Error::InvalidParameter("n and bins must be >= 1".into()));
    }
    let core = dynamical_core(p)?;
    let (lo, hi) = (core.lo, core.hi);
    let width = hi - lo;
    let mut counts = vec![0u64; bins];
    let mut outside = 0u64;
    let mut x = p.iterate_n(x0, HISTOGRAM_TRANSIENT)?;
    for _ in 0..n {
        if x < lo || x > hi {
            outside += 1;
        } else if width == 0.0 {
            counts[0] += 1;
        } else {
            let b = (((x - lo) / width) * bins as f64) as usize;
            counts[b.min(bins - 1)] += 1;
        }
        x = p.eval(x)?;
    }
    let total = n as f64;
    Ok(Histogram {
        lo,
        hi,
        mass: counts.iter().map(|&c| c as f64 / total).collect(),
        outside: outside as f64 / total,
    })
}
