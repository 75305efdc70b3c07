//! Optimal shrinking strategy: integration of `a'(t) = P(Ω₀ᵗ, a) − M`.
//!
//! The right-hand side has square-root behaviour at the regime boundaries,
//! so each regime is integrated in the coordinate where it is smooth:
//!
//! * Opening: the opening radius `ρ` is the independent variable and time
//!   the state, `dt/dρ = 2cρ / (2cρ + M)` with `c = Σ tan(θᵢ/2) − π` of the
//!   current erosion phase.
//! * Stadium, growing ball: time is the independent variable, area the state.
//! * Shrinking ball with `2πr < M/2`: the ball radius `r` runs down to 0 with
//!   `dt/dr = 2πr / (2πr − M)`, which lands exactly on the extinction time.
//!
//! Every step is classical RK4; events are located by bisection on the step
//! length.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{support_excess, RoundedSet};
use crate::isoperimetric::{IsoperimetricSolution, OpeningProfile, Regime};
use crate::morphology::dilate;

/// One stored point of a trajectory.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Sample {
    pub t: f64,
    pub a: f64,
    pub perimeter: f64,
    pub regime: Regime,
    pub rho: f64,
}

#[derive(Clone, Debug)]
pub struct EvolutionTrace {
    domain: RoundedSet,
    profile: OpeningProfile,
    budget: f64,
    horizon: f64,
    dt: f64,
    samples: Vec<Sample>,
    t_star: Option<f64>,
    t_dagger: Option<f64>,
    stopped_early: bool,
}

/// `1e-3 · max(1, diameter)`.
pub fn default_dt(domain: &RoundedSet) -> f64 {
    1e-3 * domain.diameter().max(1.0)
}

/// `P(Ω̃(Ω₀ᵗ, a)) − M`.
pub fn area_rate(domain: &RoundedSet, t: f64, a: f64, m: f64) -> Result<f64> {
    if domain.is_empty() {
        return Err(Error::EmptySet);
    }
    let p = OpeningProfile::new(domain.kernel()).perimeter(domain.radius() + t, a)?;
    Ok(p - m)
}

pub fn simulate(domain: &RoundedSet, m: f64, horizon: f64, dt: f64) -> Result<EvolutionTrace> {
    simulate_until(domain, m, horizon, dt, |_| false)
}

/// Like [`simulate`], but stops after the first sample for which `stop` holds.
pub fn simulate_until<F>(domain: &RoundedSet, m: f64, horizon: f64, dt: f64, stop: F) -> Result<EvolutionTrace>
where
    F: FnMut(&Sample) -> bool,
{
    if domain.is_empty() {
        return Err(Error::EmptySet);
    }
    if !(dt > 0.0 && dt.is_finite()) {
        return Err(Error::BadConfig(format!("dt must be positive and finite, got {dt}")));
    }
    if !(horizon > 0.0 && horizon.is_finite()) {
        return Err(Error::BadConfig(format!("horizon must be positive and finite, got {horizon}")));
    }
    if !(m >= 0.0 && m.is_finite()) {
        return Err(Error::BadConfig(format!("budget must be non-negative and finite, got {m}")));
    }
    let profile = OpeningProfile::new(domain.kernel());
    let mut run = Run {
        profile: &profile,
        s0: domain.radius(),
        m,
        horizon,
        dt,
        samples: Vec::new(),
        t_star: None,
        t_dagger: None,
        stop,
        stopped: false,
    };
    run.go();
    let Run { samples, t_star, t_dagger, stopped, .. } = run;
    Ok(EvolutionTrace {
        domain: domain.clone(),
        profile,
        budget: m,
        horizon,
        dt,
        samples,
        t_star,
        t_dagger,
        stopped_early: stopped,
    })
}

fn rk4<F: Fn(f64, f64) -> f64>(x: f64, y: f64, h: f64, f: &F) -> f64 {
    let k1 = f(x, y);
    let k2 = f(x + 0.5 * h, y + 0.5 * h * k1);
    let k3 = f(x + 0.5 * h, y + 0.5 * h * k2);
    let k4 = f(x + h, y + h * k3);
    y + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
}

/// Smallest step in `(0, h]` for which `crossed` holds, given that it holds at `h`.
fn land<F: Fn(f64) -> bool>(h: f64, crossed: F) -> f64 {
    let (mut lo, mut hi) = (0.0, h);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if crossed(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    hi
}

enum Next {
    Stadium(f64, f64),
    Ball(f64, f64),
    Done,
}

struct Run<'p, F> {
    profile: &'p OpeningProfile,
    s0: f64,
    m: f64,
    horizon: f64,
    dt: f64,
    samples: Vec<Sample>,
    t_star: Option<f64>,
    t_dagger: Option<f64>,
    stop: F,
    stopped: bool,
}

impl<F: FnMut(&Sample) -> bool> Run<'_, F> {
    /// Records a sample; returns true when integration must end.
    fn push(&mut self, s: Sample) -> bool {
        self.samples.push(s);
        if (self.stop)(&s) {
            self.stopped = true;
        }
        self.stopped
    }

    fn r_bar(&self, t: f64) -> f64 {
        self.profile.inner_radius(self.s0 + t)
    }

    fn go(&mut self) {
        let a0 = self.profile.domain_area(self.s0);
        let r0 = self.r_bar(0.0);
        let tol = 1e-12 * a0;
        let mut next = if self.profile.schedule().max_depth() > 0.0 {
            self.opening(0.0, self.s0)
        } else if self.profile.locus_length() > 0.0 && a0 > PI * r0 * r0 + tol {
            Next::Stadium(0.0, a0)
        } else {
            Next::Ball(0.0, a0)
        };
        loop {
            next = match next {
                Next::Stadium(t, a) => self.stadium(t, a),
                Next::Ball(t, a) => {
                    self.ball(t, a);
                    Next::Done
                }
                Next::Done => break,
            };
        }
    }

    fn opening_sample(&self, t: f64, rho: f64) -> Sample {
        let s = self.s0 + t;
        Sample {
            t,
            a: self.profile.opening_area(s, rho),
            perimeter: self.profile.opening_perimeter(s, rho),
            regime: Regime::Opening,
            rho,
        }
    }

    fn opening(&mut self, mut t: f64, mut rho: f64) -> Next {
        let sched = self.profile.schedule();
        let d_max = sched.max_depth();
        let starts: Vec<f64> = sched.phase_starts().collect();
        let (s0, m, horizon) = (self.s0, self.m, self.horizon);
        if self.push(self.opening_sample(t, rho)) {
            return Next::Done;
        }
        loop {
            let d = rho - s0 - t;
            let k = sched.phase_index(d);
            let c = sched.tan_sum(d) - PI;
            let d_next = starts.get(k + 1).copied().unwrap_or(d_max);
            let g = move |r: f64, _t: f64| if m == 0.0 { 1.0 } else { 2.0 * c * r / (2.0 * c * r + m) };
            let step = |h: f64| rk4(rho, t, h, &g);
            let h = self.dt;
            let t1 = step(h);
            let hit_phase = m > 0.0 && rho + h - s0 - t1 >= d_next;
            let hit_horizon = t1 >= horizon;
            if !hit_phase && !hit_horizon {
                rho += h;
                t = t1;
                if self.push(self.opening_sample(t, rho)) {
                    return Next::Done;
                }
                continue;
            }
            let h_phase = if hit_phase { land(h, |h| rho + h - s0 - step(h) >= d_next) } else { f64::INFINITY };
            let h_horizon = if hit_horizon { land(h, |h| step(h) >= horizon) } else { f64::INFINITY };
            if h_horizon <= h_phase {
                rho += h_horizon;
                self.push(self.opening_sample(horizon, rho));
                return Next::Done;
            }
            t = step(h_phase);
            rho += h_phase;
            if k + 1 < starts.len() {
                if self.push(self.opening_sample(t, rho)) {
                    return Next::Done;
                }
                continue;
            }
            // Reached the maximal opening: the stadium over the whole locus.
            let s = s0 + t;
            let r = self.r_bar(t);
            let a = self.profile.plateau_area(s);
            let stadium = self.profile.locus_length() > 0.0;
            let sample = Sample {
                t,
                a,
                perimeter: 2.0 * self.profile.locus_length() + 2.0 * PI * r,
                regime: if stadium { Regime::Stadium } else { Regime::Ball },
                rho: r,
            };
            if stadium {
                if self.push(sample) {
                    return Next::Done;
                }
                return Next::Stadium(t, a);
            }
            return Next::Ball(t, a);
        }
    }

    fn stadium(&mut self, mut t: f64, mut a: f64) -> Next {
        let r0 = self.r_bar(0.0);
        let (m, horizon) = (self.m, self.horizon);
        let f = move |t: f64, a: f64| {
            let r = r0 + t;
            (a - PI * r * r) / r + 2.0 * PI * r - m
        };
        let sample = |t: f64, a: f64| {
            let r = r0 + t;
            let len = (a - PI * r * r) / (2.0 * r);
            Sample { t, a, perimeter: 2.0 * len + 2.0 * PI * r, regime: Regime::Stadium, rho: r }
        };
        if self.samples.last().map_or(true, |s| s.t != t) && self.push(sample(t, a)) {
            return Next::Done;
        }
        let below = move |t: f64, a: f64| a < PI * (r0 + t) * (r0 + t);
        loop {
            let h = self.dt;
            let a1 = rk4(t, a, h, &f);
            let hit_ball = below(t + h, a1);
            let hit_horizon = t + h >= horizon;
            if !hit_ball && !hit_horizon {
                t += h;
                a = a1;
                if self.push(sample(t, a)) {
                    return Next::Done;
                }
                continue;
            }
            let h_ball = if hit_ball { land(h, |h| below(t + h, rk4(t, a, h, &f))) } else { f64::INFINITY };
            let h_horizon = if hit_horizon { horizon - t } else { f64::INFINITY };
            if h_horizon <= h_ball {
                a = rk4(t, a, h_horizon, &f);
                self.push(sample(horizon, a));
                return Next::Done;
            }
            a = rk4(t, a, h_ball, &f);
            t += h_ball;
            return Next::Ball(t, a);
        }
    }

    fn ball(&mut self, mut t: f64, mut a: f64) {
        let (m, horizon) = (self.m, self.horizon);
        self.t_dagger = Some(t);
        let sample = |t: f64, a: f64| {
            let r = (a / PI).sqrt();
            Sample { t, a, perimeter: 2.0 * PI * r, regime: Regime::Ball, rho: r }
        };
        if self.push(sample(t, a)) {
            return;
        }
        // Switch to radius stepping once r < M/(4π).
        let a_switch = m * m / (16.0 * PI);
        let f = move |_t: f64, a: f64| 2.0 * (PI * a.max(0.0)).sqrt() - m;
        while m == 0.0 || a >= a_switch {
            let h = self.dt;
            let a1 = rk4(t, a, h, &f);
            let hit_switch = m > 0.0 && a1 < a_switch;
            let hit_horizon = t + h >= horizon;
            if !hit_switch && !hit_horizon {
                t += h;
                a = a1;
                if self.push(sample(t, a)) {
                    return;
                }
                continue;
            }
            let h_switch = if hit_switch { land(h, |h| rk4(t, a, h, &f) < a_switch) } else { f64::INFINITY };
            let h_horizon = if hit_horizon { horizon - t } else { f64::INFINITY };
            if h_horizon <= h_switch {
                a = rk4(t, a, h_horizon, &f);
                self.push(sample(horizon, a));
                return;
            }
            a = rk4(t, a, h_switch, &f);
            t += h_switch;
            if self.push(sample(t, a)) {
                return;
            }
        }
        self.terminal(t, (a / PI).sqrt());
    }

    fn terminal(&mut self, mut t: f64, mut r: f64) {
        let (m, horizon) = (self.m, self.horizon);
        let g = move |r: f64, _t: f64| 2.0 * PI * r / (2.0 * PI * r - m);
        let sample = |t: f64, r: f64| Sample { t, a: PI * r * r, perimeter: 2.0 * PI * r, regime: Regime::Ball, rho: r };
        while r > 0.0 {
            let h = -self.dt.min(r);
            let t1 = rk4(r, t, h, &g);
            if t1 >= horizon {
                let hh = -land(-h, |x| rk4(r, t, -x, &g) >= horizon);
                self.push(sample(horizon, r + hh));
                return;
            }
            t = t1;
            r = if -h >= r { 0.0 } else { r + h };
            if r == 0.0 {
                self.t_star = Some(t);
            }
            if self.push(sample(t, r)) {
                return;
            }
        }
    }
}

fn hermite(s0: &Sample, s1: &Sample, m: f64, t: f64) -> f64 {
    let h = s1.t - s0.t;
    if h <= 0.0 {
        return s1.a;
    }
    let u = (t - s0.t) / h;
    let (d0, d1) = ((s0.perimeter - m) * h, (s1.perimeter - m) * h);
    let u2 = u * u;
    let u3 = u2 * u;
    (2.0 * u3 - 3.0 * u2 + 1.0) * s0.a + (u3 - 2.0 * u2 + u) * d0 + (-2.0 * u3 + 3.0 * u2) * s1.a + (u3 - u2) * d1
}

impl EvolutionTrace {
    pub fn domain(&self) -> &RoundedSet {
        &self.domain
    }

    pub fn budget(&self) -> f64 {
        self.budget
    }

    pub fn horizon(&self) -> f64 {
        self.horizon
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn samples(&self) -> &[Sample] {
        &self.samples
    }

    /// Extinction time, if the area reached zero.
    pub fn t_star(&self) -> Option<f64> {
        self.t_star
    }

    /// Time the minimizer first became a ball.
    pub fn t_dagger(&self) -> Option<f64> {
        self.t_dagger
    }

    /// True if a stop predicate ended the run before the horizon.
    pub fn stopped_early(&self) -> bool {
        self.stopped_early
    }

    pub fn end_time(&self) -> f64 {
        self.samples.last().map_or(0.0, |s| s.t)
    }

    pub fn last(&self) -> &Sample {
        self.samples.last().expect("trace has at least one sample")
    }

    pub fn rate(&self, s: &Sample) -> f64 {
        s.perimeter - self.budget
    }

    pub fn profile(&self) -> &OpeningProfile {
        &self.profile
    }

    fn check_time(&self, t: f64) -> Result<()> {
        let end = self.end_time();
        if !(t >= 0.0 && t <= end) {
            return Err(Error::OutOfRange { t, end });
        }
        Ok(())
    }

    /// `a(t)` by cubic Hermite interpolation of the samples.
    pub fn area_at(&self, t: f64) -> Result<f64> {
        if self.t_star.is_some_and(|ts| t >= ts) && t <= self.horizon {
            return Ok(0.0);
        }
        self.check_time(t)?;
        let i = self.samples.partition_point(|s| s.t <= t);
        if i == 0 {
            return Ok(self.samples[0].a);
        }
        if i == self.samples.len() {
            return Ok(self.samples[i - 1].a);
        }
        Ok(hermite(&self.samples[i - 1], &self.samples[i], self.budget, t))
    }

    /// Minimizer `Ω̃(Ω₀ᵗ, a(t))`.
    pub fn solution_at(&self, t: f64) -> Result<Option<IsoperimetricSolution>> {
        let a = self.area_at(t)?;
        let s = self.domain.radius() + t;
        if a <= 0.0 {
            return Ok(None);
        }
        let a = a.min(self.profile.domain_area(s));
        self.profile.solve(s, a).map(Some)
    }

    /// `A(t)`; empty at and after the extinction time.
    pub fn set_at(&self, t: f64) -> Result<RoundedSet> {
        Ok(self.solution_at(t)?.map_or_else(RoundedSet::empty, |s| s.set))
    }
}

pub fn reconstruct_set(trace: &EvolutionTrace, t: f64) -> Result<RoundedSet> {
    trace.set_at(t)
}

/// `c₁ ∫₀ᵀ a dt + c₂ a(T)`, with Simpson's rule on each Hermite piece.
pub fn compute_cost(trace: &EvolutionTrace, c1: f64, c2: f64, t_end: f64) -> Result<f64> {
    let terminal = trace.area_at(t_end)?;
    let upto = trace.t_star.map_or(t_end, |ts| ts.min(t_end));
    let mut integral = 0.0;
    for w in trace.samples.windows(2) {
        let (lo, hi) = (w[0].t, w[1].t.min(upto));
        if hi <= lo {
            break;
        }
        let mid = hermite(&w[0], &w[1], trace.budget, 0.5 * (lo + hi));
        let end = hermite(&w[0], &w[1], trace.budget, hi);
        integral += (hi - lo) / 6.0 * (w[0].a + 4.0 * mid + end);
    }
    Ok(c1 * integral + c2 * terminal)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AdmissibilityReport {
    pub admissible: bool,
    /// `max (h_{A(t+δ)} − h_{A(t)^δ}) / δ` over all checked samples.
    pub max_containment_gap: f64,
    /// `max |(|A(t)^δ| − a(t+δ))/δ − M|`.
    pub max_effort_error: f64,
    /// Smallest `C` with `effort error ≤ tol + C δ` at every sample.
    pub constant: f64,
    pub checked: usize,
    pub first_failure: Option<f64>,
}

/// Discrete check of `A(t+δ) ⊆ A(t)^δ` and `(|A(t)^δ| − |A(t+δ)|)/δ ≈ M`.
///
/// At each sample the effort error may be `tol + (π + |Δrate|/δ) δ`, the
/// second-order terms of the area expansion.
pub fn check_admissible(trace: &EvolutionTrace, delta: f64, tol: f64) -> AdmissibilityReport {
    let m = trace.budget;
    let end = trace.t_star.unwrap_or(trace.end_time()).min(trace.end_time());
    let mut rep = AdmissibilityReport {
        admissible: true,
        max_containment_gap: 0.0,
        max_effort_error: 0.0,
        constant: 0.0,
        checked: 0,
        first_failure: None,
    };
    for s in &trace.samples {
        let t = s.t;
        if t + delta > end {
            break;
        }
        let (Ok(now), Ok(later)) = (trace.set_at(t), trace.set_at(t + delta)) else {
            rep.admissible = false;
            rep.first_failure.get_or_insert(t);
            continue;
        };
        let grown = dilate(&now, delta);
        let gap = if later.is_empty() { 0.0 } else { support_excess(&grown, &later).unwrap_or(f64::INFINITY).max(0.0) };
        let a_next = trace.area_at(t + delta).unwrap_or(f64::NAN);
        let err = ((grown.area() - a_next) / delta - m).abs();
        let rate_next = trace
            .area_at(t + delta)
            .ok()
            .and_then(|_| trace.solution_at(t + delta).ok().flatten())
            .map_or(-m, |sol| sol.perimeter - m);
        let c = PI + (rate_next - (s.perimeter - m)).abs() / delta;
        rep.checked += 1;
        rep.max_containment_gap = rep.max_containment_gap.max(gap / delta);
        rep.max_effort_error = rep.max_effort_error.max(err);
        rep.constant = rep.constant.max(c);
        if !(gap <= tol * delta && err <= tol + c * delta) {
            rep.admissible = false;
            rep.first_failure.get_or_insert(t);
        }
    }
    rep
}
