use chialvo_core::bifurcation::{
    detect_bifurcation_numerically, flip_point, fold_in_k, fold_points, BifurcationKind,
    BifurcationPoint,
};
use chialvo_core::chaos::chaos_scan;
use chialvo_core::chialvo2d::{iterate2d, mmo_trace, FullParams};
use chialvo_core::diagram::{bifdiag, cobweb};
use chialvo_core::fixed_points::{dynamical_core, find_fixed_points};
use chialvo_core::misiurewicz::{bracket_scan_for_misiurewicz, gamma_curve, misiurewicz_search};
use chialvo_core::orbit::{
    birkhoff_histogram, detect_periodic_attractor, itinerary, lyapunov, lyapunov_raw, AttractorKind,
};
use chialvo_core::par::grid;
use chialvo_core::table::{Table, Value};
use chialvo_core::{Error, Execution, MapParams, CRITICAL_POINT};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::args::{BifdiagArgs, Command, Global, KindArg, Point};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Core(Error::Io(_)) => 1,
            CliError::Core(e) if e.is_domain() => 3,
            CliError::Core(_) => 4,
        }
    }
}

type Result<T> = std::result::Result<T, CliError>;

fn range(name: &str, lo: f64, hi: f64) -> Result<()> {
    if lo.is_finite() && hi.is_finite() && lo <= hi {
        Ok(())
    } else {
        Err(CliError::Usage(format!("empty {name} range [{lo}, {hi}]")))
    }
}

fn params(p: &Point) -> Result<MapParams> {
    Ok(MapParams::new(p.r, p.k)?)
}

fn opt(x: Option<f64>) -> Value {
    Value::Float(x.unwrap_or(f64::NAN))
}

fn kebab<T: Serialize>(v: &T) -> String {
    match serde_json::to_value(v) {
        Ok(serde_json::Value::String(s)) => s,
        Ok(other) => other.to_string(),
        Err(_) => String::new(),
    }
}

fn bifurcation_table(points: &[BifurcationPoint]) -> Table {
    let mut t = Table::new([
        "kind",
        "wrt",
        "x0",
        "param0",
        "r",
        "k",
        "multiplier",
        "criticality_value",
        "criticality",
        "a1",
        "a2",
        "b1",
        "b2",
        "conditions_satisfied",
    ]);
    for b in points {
        t.push(vec![
            kebab(&b.kind).into(),
            kebab(&b.wrt).into(),
            b.x0.into(),
            b.param0.into(),
            b.params.r().into(),
            b.params.k().into(),
            b.multiplier.into(),
            opt(b.criticality_value),
            kebab(&b.criticality).into(),
            opt(b.conditions.a1),
            opt(b.conditions.a2),
            opt(b.conditions.b1),
            opt(b.conditions.b2),
            b.conditions.all_satisfied().into(),
        ]);
    }
    t
}

const GAMMA_COLUMNS: [&str; 9] = [
    "k",
    "r_star",
    "z",
    "zeta",
    "zeta1",
    "dzeta_dr",
    "df_dr_at_c",
    "gamma",
    "status",
];

fn bifdiag_table(a: &BifdiagArgs, exec: Execution) -> Result<Table> {
    let ps: Vec<MapParams> = match (a.r, a.k) {
        (None, Some(k)) => {
            range("r", a.r_min, a.r_max)?;
            grid(a.r_min, a.r_max, a.r_step)
                .into_iter()
                .map(|r| MapParams::new(r, k))
                .collect::<chialvo_core::Result<_>>()?
        }
        (Some(r), None) => {
            range("k", a.k_min, a.k_max)?;
            grid(a.k_min, a.k_max, a.k_step)
                .into_iter()
                .map(|k| MapParams::new(r, k))
                .collect::<chialvo_core::Result<_>>()?
        }
        _ => return Err(CliError::Usage("give exactly one of --r and --k".into())),
    };
    let mut t = Table::new(["r", "k", "i", "x", "flag"]);
    for col in bifdiag(&ps, a.transient, a.record, exec) {
        match &col.samples {
            Ok(xs) => {
                for (i, &x) in xs.iter().enumerate() {
                    t.push(vec![
                        col.r.into(),
                        col.k.into(),
                        i.into(),
                        x.into(),
                        "ok".into(),
                    ]);
                }
            }
            Err(msg) => t.push(vec![
                col.r.into(),
                col.k.into(),
                0usize.into(),
                f64::NAN.into(),
                msg.as_str().into(),
            ]),
        }
    }
    Ok(t)
}

/// Runs one analysis and returns its table.
pub fn build(cmd: &Command, global: &Global) -> Result<Table> {
    let exec = if global.sequential {
        Execution::Sequential
    } else {
        Execution::default()
    };
    let table = match cmd {
        Command::FixedPoints(pt) => {
            let cfg = find_fixed_points(&params(pt)?)?;
            let mut t = Table::new(["x", "multiplier", "stability", "branch", "degenerate"]);
            for fp in &cfg.points {
                t.push(vec![
                    fp.x.into(),
                    fp.multiplier.into(),
                    kebab(&fp.stability).into(),
                    kebab(&fp.branch).into(),
                    cfg.degenerate.into(),
                ]);
            }
            t
        }
        Command::Core(pt) => {
            let core = dynamical_core(&params(pt)?)?;
            let mut t = Table::new(["lo", "hi", "case", "contains_unique_fixed_point"]);
            t.push(vec![
                core.lo.into(),
                core.hi.into(),
                kebab(&core.case_tag).into(),
                core.contains_unique_fixed_point.into(),
            ]);
            t
        }
        Command::Flip { k } => bifurcation_table(&[flip_point(*k)?]),
        Command::Fold { k } => bifurcation_table(&fold_points(*k)?),
        Command::FoldK { r } => bifurcation_table(&[fold_in_k(*r)?]),
        Command::BifurcateNumeric {
            k,
            r_lo,
            r_hi,
            kind,
        } => {
            let kind = match kind {
                KindArg::Flip => BifurcationKind::Flip,
                KindArg::Fold => BifurcationKind::Fold,
            };
            bifurcation_table(&[detect_bifurcation_numerically(*k, (*r_lo, *r_hi), kind)?])
        }
        Command::Misiurewicz { k, r_lo, r_hi } => {
            let bracket = match (r_lo, r_hi) {
                (Some(lo), Some(hi)) => (*lo, *hi),
                _ => bracket_scan_for_misiurewicz(*k, (2.0, 3.2), 1e-3)?
                    .first()
                    .copied()
                    .ok_or_else(|| {
                        Error::NoBracket(format!("no Misiurewicz bracket in [2, 3.2] for k = {k}"))
                    })?,
            };
            let m = misiurewicz_search(*k, bracket)?;
            let mut t = Table::new(GAMMA_COLUMNS);
            t.push(vec![
                m.k.into(),
                m.r_star.into(),
                m.z.into(),
                m.zeta.into(),
                m.zeta1.into(),
                m.dzeta_dr.into(),
                m.df_dr_at_c.into(),
                m.gamma.into(),
                "ok".into(),
            ]);
            t
        }
        Command::GammaTable { k_max, k_step } => {
            let mut t = Table::new(GAMMA_COLUMNS);
            for row in gamma_curve(*k_max, *k_step, exec)? {
                match row.result {
                    Ok(m) => t.push(vec![
                        m.k.into(),
                        m.r_star.into(),
                        m.z.into(),
                        m.zeta.into(),
                        m.zeta1.into(),
                        m.dzeta_dr.into(),
                        m.df_dr_at_c.into(),
                        m.gamma.into(),
                        "ok".into(),
                    ]),
                    Err(msg) => {
                        let mut r = vec![Value::Float(row.k)];
                        r.extend(std::iter::repeat_n(Value::Float(f64::NAN), 7));
                        r.push(msg.into());
                        t.push(r);
                    }
                }
            }
            t
        }
        Command::ChaosScan {
            r_min,
            r_max,
            r_step,
            k_min,
            k_max,
            k_step,
        } => {
            range("r", *r_min, *r_max)?;
            range("k", *k_min, *k_max)?;
            let cells = chaos_scan((*r_min, *r_max), *r_step, (*k_min, *k_max), *k_step, exec)?;
            let mut t = Table::new([
                "r",
                "k",
                "satisfied",
                "margin_fc",
                "margin_f3c",
                "margin_order",
                "margin_min",
            ]);
            for c in cells {
                t.push(vec![
                    c.r.into(),
                    c.k.into(),
                    c.satisfied.into(),
                    c.margin_fc.into(),
                    c.margin_f3c.into(),
                    c.margin_order.into(),
                    c.margin_min.into(),
                ]);
            }
            t
        }
        Command::Kneading { point, n, x0 } => {
            let p = params(point)?;
            let start = match x0 {
                Some(x) => *x,
                None => p.eval(CRITICAL_POINT)?,
            };
            let it = itinerary(&p, start, *n)?;
            let mut t = Table::new(["i", "x", "symbol"]);
            let mut x = start;
            for (i, s) in it.symbols.iter().enumerate() {
                if i > 0 {
                    x = p.eval(x)?;
                }
                t.push(vec![i.into(), x.into(), s.as_char().to_string().into()]);
            }
            t
        }
        Command::Attractor {
            point,
            max_period,
            n_iter,
        } => {
            let rep = detect_periodic_attractor(&params(point)?, *max_period, *n_iter)?;
            let (kind, period) = match rep.kind {
                AttractorKind::Periodic { period } => ("periodic", period),
                AttractorKind::IntervalCandidate => ("interval_candidate", 0),
                AttractorKind::Undetermined => ("undetermined", 0),
            };
            let cycle = rep
                .cycle
                .as_ref()
                .map(|c| {
                    c.iter()
                        .map(|&x| chialvo_core::table::format_g17(x))
                        .collect::<Vec<_>>()
                        .join(" ")
                })
                .unwrap_or_default();
            let mut t = Table::new(["kind", "period", "lyapunov", "cycle"]);
            t.push(vec![
                kind.into(),
                period.into(),
                rep.lyapunov.into(),
                cycle.into(),
            ]);
            t
        }
        Command::Lyapunov {
            point,
            x0,
            n,
            transient,
            samples,
            raw,
        } => {
            let p = params(point)?;
            let f = if *raw { lyapunov_raw } else { lyapunov };
            let x0s: Vec<f64> = if *samples == 0 {
                vec![*x0]
            } else {
                let core = dynamical_core(&p)?;
                let mut rng = ChaCha8Rng::seed_from_u64(global.seed);
                (0..*samples)
                    .map(|_| {
                        if core.hi > core.lo {
                            rng.gen_range(core.lo..core.hi)
                        } else {
                            core.lo
                        }
                    })
                    .collect()
            };
            let values = chialvo_core::par::map(exec, &x0s, |&x| f(&p, x, *n, *transient));
            let mut t = Table::new(["x0", "lyapunov"]);
            for (x, v) in x0s.iter().zip(values) {
                t.push(vec![(*x).into(), v?.into()]);
            }
            t
        }
        Command::Histogram { point, x0, n, bins } => {
            let h = birkhoff_histogram(&params(point)?, *x0, *n, *bins)?;
            let edges = h.bin_edges();
            let mut t = Table::new(["bin", "lo", "hi", "mass"]);
            for (i, m) in h.mass.iter().enumerate() {
                t.push(vec![
                    i.to_string().into(),
                    edges[i].into(),
                    edges[i + 1].into(),
                    (*m).into(),
                ]);
            }
            t.push(vec![
                "outside".into(),
                f64::NAN.into(),
                f64::NAN.into(),
                h.outside.into(),
            ]);
            t
        }
        Command::Bifdiag(a) => bifdiag_table(a, exec)?,
        Command::Cobweb { point, x0, n } => {
            let segs = cobweb(&params(point)?, *x0, *n)?;
            let mut t = Table::new(["segment", "x0", "y0", "x1", "y1"]);
            for (i, s) in segs.iter().enumerate() {
                t.push(vec![
                    i.into(),
                    s.x0.into(),
                    s.y0.into(),
                    s.x1.into(),
                    s.y1.into(),
                ]);
            }
            t
        }
        Command::Simulate2d {
            a,
            b,
            c,
            k,
            x0,
            y0,
            n,
        } => {
            let fp = FullParams::new(*a, *b, *c, *k)?;
            let tr = iterate2d(&fp, *x0, *y0, *n)?;
            let mut t = Table::new(["n", "x", "y"]);
            for (i, (x, y)) in tr.states.iter().enumerate() {
                t.push(vec![i.into(), (*x).into(), (*y).into()]);
            }
            t
        }
        Command::Mmo { r, k, x0, n } => {
            let o = mmo_trace(&MapParams::new(*r, *k)?, *x0, *n)?;
            let mut t = Table::new(["n", "x"]);
            for (i, x) in o.points.iter().enumerate() {
                t.push(vec![i.into(), (*x).into()]);
            }
            t
        }
        Command::Replay { .. } => {
            return Err(CliError::Usage("replay cannot be nested".into()));
        }
    };
    Ok(table)
}
