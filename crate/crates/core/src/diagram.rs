//! Bifurcation-diagram samples and cobweb segments.

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::map::{MapParams, CRITICAL_POINT};
use crate::par::{self, Execution};

pub const DEFAULT_TRANSIENT: usize = 1_000;
pub const DEFAULT_RECORD: usize = 200;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiagramColumn {
    pub r: f64,
    pub k: f64,
    /// Recorded critical-orbit points, or the reason the column was skipped.
    pub samples: std::result::Result<Vec<f64>, String>,
}

impl DiagramColumn {
    /// Number of clusters among the samples when points closer than `tol`
    /// are merged.
    pub fn distinct(&self, tol: f64) -> usize {
        let Ok(xs) = &self.samples else { return 0 };
        let mut xs = xs.clone();
        xs.sort_by(f64::total_cmp);
        let mut count = 0;
        let mut last = f64::NEG_INFINITY;
        for x in xs {
            if x - last > tol {
                count += 1;
            }
            last = x;
        }
        count
    }
}

fn column(p: &MapParams, transient: usize, record: usize) -> Result<Vec<f64>> {
    let mut x = p.iterate_n(CRITICAL_POINT, transient)?;
    let mut out = Vec::with_capacity(record);
    for _ in 0..record {
        x = p.eval(x)?;
        out.push(x);
    }
    Ok(out)
}

/// Critical-orbit samples for each parameter pair, in input order.
pub fn bifdiag(
    params: &[MapParams],
    transient: usize,
    record: usize,
    exec: Execution,
) -> Vec<DiagramColumn> {
    par::map(exec, params, |p| DiagramColumn {
        r: p.r(),
        k: p.k(),
        samples: column(p, transient, record).map_err(|e| e.to_string()),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Segment {
    pub x0: f64,
    pub y0: f64,
    pub x1: f64,
    pub y1: f64,
}

/// `2n` segments: vertical `(x_i, x_i) → (x_i, x_{i+1})` followed by
/// horizontal `(x_i, x_{i+1}) → (x_{i+1}, x_{i+1})`.
pub fn cobweb(p: &MapParams, x0: f64, n: usize) -> Result<Vec<Segment>> {
    let mut out = Vec::with_capacity(2 * n);
    let mut x = x0;
    for _ in 0..n {
        let fx = p.eval(x)?;
        out.push(Segment {
            x0: x,
            y0: x,
            x1: x,
            y1: fx,
        });
        out.push(Segment {
            x0: x,
            y0: fx,
            x1: fx,
            y1: fx,
        });
        x = fx;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bifurcation::flip_point;

    #[test]
    fn flip_splits_one_branch_into_two() {
        let r0 = flip_point(0.05).unwrap().param0;
        let ps = [
            MapParams::new(r0 - 0.01, 0.05).unwrap(),
            MapParams::new(r0 + 0.01, 0.05).unwrap(),
        ];
        let cols = bifdiag(&ps, DEFAULT_TRANSIENT, DEFAULT_RECORD, Execution::Parallel);
        assert_eq!(cols[0].distinct(1e-6), 1);
        assert_eq!(cols[1].distinct(1e-6), 2);
    }

    #[test]
    fn chaotic_column_has_many_values() {
        let cols = bifdiag(
            &[
                MapParams::new(2.6, 0.0).unwrap(),
                MapParams::new(2.75, 0.0).unwrap(),
            ],
            DEFAULT_TRANSIENT,
            DEFAULT_RECORD,
            Execution::Sequential,
        );
        // r = 2.6 sits in a period-3 window; r = 2.75 is a chaotic band.
        assert_eq!(cols[0].distinct(1e-6), 3);
        assert!(cols[1].distinct(1e-6) > 50);
    }

    #[test]
    fn failed_column_is_flagged() {
        let cols = bifdiag(
            &[MapParams::new(800.0, 0.0).unwrap()],
            10,
            10,
            Execution::Sequential,
        );
        assert!(cols[0].samples.is_err());
    }

    #[test]
    fn cobweb_shapes() {
        let m = MapParams::new(1.0, 0.0).unwrap();
        let segs = cobweb(&m, 1.0, 3).unwrap();
        assert_eq!(segs.len(), 6);
        assert!(segs
            .iter()
            .all(|s| s.x0 == 1.0 && s.x1 == 1.0 && s.y0 == 1.0 && s.y1 == 1.0));

        let m = MapParams::new(2.0, 0.0).unwrap();
        let segs = cobweb(&m, 2.0, 400).unwrap();
        let last = &segs[segs.len() - 4..];
        assert!((last[0].x0 - last[3].x1).abs() < 1e-9);
        assert!((last[0].x0 - last[1].x1).abs() > 0.1);
    }
}
