//! Long-run outcome of a budget and the critical budget `M₀`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::evolution::{simulate, simulate_until, EvolutionTrace};
use crate::geometry::RoundedSet;

/// Relative margin in the escape test `2√(πa) > M(1 + ε)`.
pub const ESCAPE_MARGIN: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum OutcomeKind {
    Extinct { t_star: f64 },
    /// The isoperimetric bound forces unbounded growth from `t_escape` on.
    Grows { t_escape: f64 },
    Undetermined { horizon: f64 },
}

#[derive(Clone, Debug)]
pub struct Outcome {
    pub kind: OutcomeKind,
    pub trace: EvolutionTrace,
}

impl Outcome {
    pub fn is_extinct(&self) -> bool {
        matches!(self.kind, OutcomeKind::Extinct { .. })
    }

    pub fn grows(&self) -> bool {
        matches!(self.kind, OutcomeKind::Grows { .. })
    }
}

fn escapes(a: f64, m: f64) -> bool {
    2.0 * (PI * a).sqrt() > m * (1.0 + ESCAPE_MARGIN)
}

pub fn classify(domain: &RoundedSet, m: f64, horizon: f64, dt: f64) -> Result<Outcome> {
    let trace = simulate_until(domain, m, horizon, dt, |s| escapes(s.a, m))?;
    let last = trace.last();
    let kind = if let Some(t_star) = trace.t_star() {
        OutcomeKind::Extinct { t_star }
    } else if escapes(last.a, m) {
        OutcomeKind::Grows { t_escape: last.t }
    } else {
        OutcomeKind::Undetermined { horizon }
    };
    Ok(Outcome { kind, trace })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ThresholdReport {
    #[serde(rename = "M0")]
    pub m0: f64,
    pub bracket: [f64; 2],
    pub iterations: usize,
    #[serde(rename = "T_dagger")]
    pub t_dagger: Option<f64>,
    /// Bisection points still undetermined after doubling the horizon; the
    /// sign of the final rate decided their side.
    pub undetermined: usize,
}

/// Bisection for `M₀ = inf{M : a_M bounded}` between a growing and an
/// extinct budget.
///
/// The lower witness is `M = 1e-6`; the upper starts at `2√(π|Ω₀|) + 1` and
/// doubles until extinction is observed.
pub fn find_m0(domain: &RoundedSet, tol: f64, horizon: f64, dt: f64) -> Result<ThresholdReport> {
    if !(tol > 0.0) {
        return Err(Error::BadConfig(format!("tolerance must be positive, got {tol}")));
    }
    if domain.is_empty() {
        return Err(Error::DegenerateDomain("empty domain".into()));
    }
    let mut lo = 1e-6;
    if !classify(domain, lo, horizon, dt)?.grows() {
        return Err(Error::DegenerateDomain(format!("no growth even at M = {lo}; the domain has area {}", domain.area())));
    }
    let mut hi = 2.0 * (PI * domain.area()).sqrt() + 1.0;
    let mut doublings = 0;
    while !classify(domain, hi, horizon, dt)?.is_extinct() {
        lo = lo.max(hi);
        hi *= 2.0;
        doublings += 1;
        if doublings > 60 {
            return Err(Error::DegenerateDomain("no extinct budget found".into()));
        }
    }
    let mut iterations = 0;
    let mut undetermined = 0;
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        let mut out = classify(domain, mid, horizon, dt)?;
        if matches!(out.kind, OutcomeKind::Undetermined { .. }) {
            out = classify(domain, mid, 2.0 * horizon, dt)?;
        }
        let grows = match out.kind {
            OutcomeKind::Grows { .. } => true,
            OutcomeKind::Extinct { .. } => false,
            OutcomeKind::Undetermined { .. } => {
                undetermined += 1;
                out.trace.rate(out.trace.last()) > 0.0
            }
        };
        if grows {
            lo = mid;
        } else {
            hi = mid;
        }
        iterations += 1;
    }
    let m0 = 0.5 * (lo + hi);
    let t_dagger = simulate(domain, m0, horizon, dt)?.t_dagger();
    Ok(ThresholdReport { m0, bracket: [lo, hi], iterations, t_dagger, undetermined })
}

/// Relative mismatch `|2πr − M| / M` tolerated for the ball at `T†`.
pub const CRITICAL_BALL_TOL: f64 = 1e-2;

/// Ball time of a budget at (or numerically near) `M₀`.
///
/// Fails with [`Error::NotCritical`] if the trace goes extinct, never becomes
/// a ball, or becomes a ball that is far from stationary.
pub fn ball_time_at_m0(domain: &RoundedSet, m: f64, horizon: f64, dt: f64) -> Result<f64> {
    let trace = simulate(domain, m, horizon, dt)?;
    if let Some(ts) = trace.t_star() {
        return Err(Error::NotCritical(format!("extinct at t = {ts}")));
    }
    let td = trace.t_dagger().ok_or_else(|| Error::NotCritical("never becomes a ball".into()))?;
    let a = trace.area_at(td)?;
    let mismatch = (2.0 * (PI * a).sqrt() - m).abs() / m;
    if mismatch > CRITICAL_BALL_TOL {
        let verdict = if 2.0 * (PI * a).sqrt() > m { "grows" } else { "shrinks" };
        return Err(Error::NotCritical(format!(
            "{verdict}: ball of perimeter {} at T = {td} against budget {m}",
            2.0 * (PI * a).sqrt()
        )));
    }
    Ok(td)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{ConvexPolygon, Point2};

    #[test]
    fn ball_classification() {
        let b = RoundedSet::ball(Point2::ORIGIN, 1.0);
        let out = classify(&b, 7.0, 50.0, 1e-3).unwrap();
        assert!(out.is_extinct());
        assert!(out.trace.t_star().is_some());
        let out = classify(&b, 6.0, 50.0, 1e-3).unwrap();
        assert!(matches!(out.kind, OutcomeKind::Grows { t_escape } if t_escape == 0.0));
    }

    #[test]
    fn ball_threshold() {
        let b = RoundedSet::ball(Point2::new(1.0, 2.0), 1.0);
        let rep = find_m0(&b, 1e-3, 50.0, 1e-3).unwrap();
        assert!((rep.m0 - 2.0 * PI).abs() <= 1e-3, "{rep:?}");
        assert!(rep.bracket[0] <= 2.0 * PI && 2.0 * PI <= rep.bracket[1] + 1e-12);
    }

    #[test]
    fn degenerate_domain() {
        let seg = RoundedSet::polygon(ConvexPolygon::segment(Point2::ORIGIN, Point2::new(1.0, 0.0)));
        assert!(matches!(find_m0(&seg, 1e-3, 10.0, 1e-3), Err(Error::DegenerateDomain(_))));
        assert!(matches!(find_m0(&RoundedSet::empty(), 1e-3, 10.0, 1e-3), Err(Error::DegenerateDomain(_))));
        assert!(matches!(find_m0(&seg, 0.0, 10.0, 1e-3), Err(Error::BadConfig(_))));
    }

    #[test]
    fn stationary_ball_time() {
        let b = RoundedSet::ball(Point2::ORIGIN, 0.7);
        assert_eq!(ball_time_at_m0(&b, 2.0 * PI * 0.7, 10.0, 1e-3).unwrap(), 0.0);
        assert!(matches!(ball_time_at_m0(&b, 5.0, 10.0, 1e-3), Err(Error::NotCritical(_))));
    }
}
