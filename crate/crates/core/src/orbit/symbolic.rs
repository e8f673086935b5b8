use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::map::{MapParams, CRITICAL_POINT};

/// Distance from `c` at which a point is read as the critical symbol.
pub const C_TOL: f64 = 1e-12;
const TIE_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Symbol {
    Zero,
    One,
    C,
}

impl Symbol {
    pub fn of(x: f64) -> Self {
        if (x - CRITICAL_POINT).abs() <= C_TOL {
            Symbol::C
        } else if x < CRITICAL_POINT {
            Symbol::Zero
        } else {
            Symbol::One
        }
    }

    pub fn as_char(self) -> char {
        match self {
            Symbol::Zero => '0',
            Symbol::One => '1',
            Symbol::C => 'C',
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Itinerary {
    pub symbols: Vec<Symbol>,
}

impl fmt::Display for Itinerary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.symbols
            .iter()
            .try_for_each(|s| write!(f, "{}", s.as_char()))
    }
}

/// Symbols of `x0, f(x0), …, f^{n-1}(x0)`.
pub fn itinerary(p: &MapParams, x0: f64, n: usize) -> Result<Itinerary> {
    let mut symbols = Vec::with_capacity(n);
    let mut x = x0;
    for i in 0..n {
        if i > 0 {
            x = p.eval(x)?;
        }
        symbols.push(Symbol::of(x));
    }
    Ok(Itinerary { symbols })
}

/// The itinerary of the critical value `f(c)`.
pub fn kneading(p: &MapParams, n: usize) -> Result<Itinerary> {
    itinerary(p, p.eval(CRITICAL_POINT)?, n)
}

/// 1-based rank of each of `f(c), …, f^depth(c)` among those points.
///
/// Differing signatures certify that two maps are not combinatorially
/// equivalent; equal signatures at finite depth prove nothing.
pub fn orbit_order_signature(p: &MapParams, depth: usize) -> Result<Vec<usize>> {
    let mut pts = Vec::with_capacity(depth);
    let mut x = CRITICAL_POINT;
    for _ in 0..depth {
        x = p.eval(x)?;
        pts.push(x);
    }
    let mut order: Vec<usize> = (0..depth).collect();
    order.sort_by(|&a, &b| pts[a].total_cmp(&pts[b]));
    for w in order.windows(2) {
        if (pts[w[1]] - pts[w[0]]).abs() <= TIE_TOL {
            let (i, j) = (w[0].min(w[1]) + 1, w[0].max(w[1]) + 1);
            return Err(Error::Tie { i, j });
        }
    }
    let mut rank = vec![0; depth];
    for (pos, &idx) in order.iter().enumerate() {
        rank[idx] = pos + 1;
    }
    Ok(rank)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(r: f64, k: f64) -> MapParams {
        MapParams::new(r, k).unwrap()
    }

    #[test]
    fn fixed_critical_point_gives_all_c() {
        // f(2) = 4 exp(r − 2) = 2.
        let m = p(2.0 - 2f64.ln(), 0.0);
        assert_eq!(kneading(&m, 5).unwrap().to_string(), "CCCCC");
        let m = p(2.0 + (1.5f64 / 4.0).ln(), 0.5);
        assert_eq!(kneading(&m, 3).unwrap().to_string(), "CCC");
    }

    #[test]
    fn critical_itinerary_starts_c_then_one() {
        // f(2) > 2, so the critical point sits left of the fixed point above it.
        let it = itinerary(&p(2.7, 0.0), CRITICAL_POINT, 6)
            .unwrap()
            .to_string();
        assert!(it.starts_with("C1"), "{it}");
        assert!(kneading(&p(2.7, 0.0), 4)
            .unwrap()
            .to_string()
            .starts_with('1'));
    }

    #[test]
    fn kneading_prefix_is_stable() {
        let m = p(2.65, 0.1);
        let a = kneading(&m, 30).unwrap().to_string();
        let b = kneading(&m, 31).unwrap().to_string();
        assert!(b.starts_with(&a));
    }

    #[test]
    fn signatures() {
        let a = orbit_order_signature(&p(2.258, 0.0), 12).unwrap();
        let b = orbit_order_signature(&p(1.8, 0.0), 12).unwrap();
        assert_ne!(a, b);
        assert_eq!(a, orbit_order_signature(&p(2.258, 0.0), 12).unwrap());
        // Attracting 2-cycle against attracting 3-cycle.
        let c2 = orbit_order_signature(&p(2.1, 0.0), 6).unwrap();
        let c3 = orbit_order_signature(&p(2.6, 0.0), 6).unwrap();
        assert_ne!(c2, c3);
    }

    #[test]
    fn tie_on_a_fixed_critical_orbit() {
        let m = p(2.0 - 2f64.ln(), 0.0);
        assert!(matches!(
            orbit_order_signature(&m, 3),
            Err(Error::Tie { .. })
        ));
    }
}
