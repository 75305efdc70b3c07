//! Named self-checks: structural invariants and raster-oracle agreement.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::geometry::{boundary_length_in_disk, contains, hausdorff, Point2, RoundedSet};
use crate::isoperimetric::{perimeter_of_area, solve_tilde};
use crate::morphology::{dilate, duality_gap, erode, inner_radius, opening};
use crate::random::random_rounded_set;
use crate::raster::{rasterize, raster_dilate, raster_erode, raster_opening};

pub const SUITES: [&str; 2] = ["invariants", "raster"];

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ValidateOptions {
    pub suites: Vec<String>,
    pub seed: u64,
    /// Relative error injected into every exact reference value.
    pub perturb: f64,
    pub raster_sets: usize,
    /// Cell size as a fraction of each set's diameter.
    pub raster_resolution: f64,
}

impl Default for ValidateOptions {
    fn default() -> Self {
        Self { suites: SUITES.iter().map(|s| s.to_string()).collect(), seed: 0, perturb: 0.0, raster_sets: 10, raster_resolution: 1e-3 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    pub cases: usize,
    /// Largest observed ratio of error to allowance; at most 1 when passing.
    pub worst: f64,
}

struct Tally {
    cases: usize,
    worst: f64,
}

impl Tally {
    fn new() -> Self {
        Self { cases: 0, worst: 0.0 }
    }

    fn add(&mut self, err: f64, allowed: f64) {
        self.cases += 1;
        let ratio = if err <= allowed { err / allowed.max(f64::MIN_POSITIVE) } else { (err / allowed).max(1.0 + f64::EPSILON) };
        self.worst = self.worst.max(if ratio.is_nan() { f64::INFINITY } else { ratio });
    }

    fn finish(self, name: &str) -> CheckResult {
        CheckResult { name: name.into(), passed: self.worst <= 1.0, cases: self.cases, worst: self.worst }
    }
}

pub fn run(opts: &ValidateOptions) -> Vec<CheckResult> {
    let mut out = Vec::new();
    for suite in &opts.suites {
        match suite.as_str() {
            "invariants" => out.extend(invariants(opts)),
            "raster" => out.extend(raster(opts)),
            other => out.push(CheckResult { name: format!("unknown suite {other}"), passed: false, cases: 0, worst: f64::INFINITY }),
        }
    }
    out
}

fn sets(rng: &mut ChaCha8Rng, n: usize) -> Vec<RoundedSet> {
    (0..n).map(|_| random_rounded_set(rng)).collect()
}

fn invariants(opts: &ValidateOptions) -> Vec<CheckResult> {
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let bump = 1.0 + opts.perturb;
    let mut results = Vec::new();

    let mut t = Tally::new();
    for s in sets(&mut rng, 200) {
        let r: f64 = rng.gen_range(0.0..2.0);
        let exact = (s.area() + r * s.perimeter() + PI * r * r) * bump;
        t.add((dilate(&s, r).area() - exact).abs(), 1e-12 * exact);
    }
    results.push(t.finish("steiner"));

    let mut t = Tally::new();
    for s in sets(&mut rng, 200) {
        let bound = 2.0 * (PI * s.area()).sqrt() * bump;
        t.add((bound - s.perimeter()).max(0.0), 1e-12 * bound);
    }
    results.push(t.finish("isoperimetric_inequality"));

    let mut t = Tally::new();
    for s in sets(&mut rng, 20) {
        let d = s.diameter();
        for _ in 0..20 {
            let c = Point2::new(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
            let r = rng.gen_range(0.01..1.0) * d;
            let len = boundary_length_in_disk(&s, c, r) * bump;
            t.add((len - 2.0 * PI * r).max(0.0), 1e-9);
        }
    }
    results.push(t.finish("local_perimeter_bound"));

    let mut t = Tally::new();
    for s in sets(&mut rng, 50) {
        let r = rng.gen_range(0.0..5.0);
        t.add(duality_gap(&s, r) + opts.perturb, 1e-9);
    }
    results.push(t.finish("duality_gap"));

    let mut t = Tally::new();
    for s in sets(&mut rng, 50) {
        let (r_bar, _) = inner_radius(&s).expect("nonempty");
        let rho = rng.gen_range(0.0..r_bar);
        let o = opening(&s, rho);
        t.add(if contains(&s, &o, 1e-9) { 0.0 } else { 1.0 }, 0.5);
        let again = opening(&o, rho);
        t.add(hausdorff(&again, &o).unwrap() + opts.perturb, 1e-9);
    }
    results.push(t.finish("opening_inclusion_idempotence"));

    let mut t = Tally::new();
    for s in sets(&mut rng, 100) {
        let (f1, f2): (f64, f64) = (rng.gen_range(0.01..1.0), rng.gen_range(0.01..1.0));
        let (lo, hi) = (f1.min(f2) * s.area(), f1.max(f2) * s.area() * bump);
        let (a, b) = (solve_tilde(&s, lo).unwrap(), solve_tilde(&s, hi.min(s.area())).unwrap());
        let gap = crate::geometry::support_excess(&b.set, &a.set).unwrap().max(0.0);
        t.add(gap, 1e-8);
    }
    results.push(t.finish("monotone_inclusion"));

    let mut t = Tally::new();
    for s in sets(&mut rng, 100) {
        let a = rng.gen_range(0.01..1.0) * s.area();
        let r = rng.gen_range(0.0..1.0);
        let grown = dilate(&solve_tilde(&s, a).unwrap().set, r);
        let other = solve_tilde(&dilate(&s, r), grown.area() * bump.min(1.0)).unwrap();
        t.add(hausdorff(&grown, &other.set).unwrap() + opts.perturb, 1e-8);
    }
    results.push(t.finish("r_commutation"));

    let mut t = Tally::new();
    for s in sets(&mut rng, 20) {
        let area = s.area();
        let (r_bar, locus) = inner_radius(&s).unwrap();
        let transitions = [PI * r_bar * r_bar, 4.0 * r_bar * locus.half_length + PI * r_bar * r_bar, area];
        let mut a;
        loop {
            a = rng.gen_range(0.0..1.0) * area;
            if transitions.iter().all(|&b| (a - b).abs() >= 1e-3 * area) && a >= 1e-3 * area {
                break;
            }
        }
        let da = 1e-6 * area;
        let fd = (perimeter_of_area(&s, a + da).unwrap() - perimeter_of_area(&s, a - da).unwrap()) / (2.0 * da);
        let kappa = solve_tilde(&s, a).unwrap().max_curvature * bump;
        t.add((fd - kappa).abs(), 1e-3 * kappa);
    }
    results.push(t.finish("curvature_law"));
    results
}

fn raster(opts: &ValidateOptions) -> Vec<CheckResult> {
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed ^ 0x5eed);
    let cases: Vec<(RoundedSet, f64, f64)> = (0..opts.raster_sets)
        .map(|_| {
            let s = random_rounded_set(&mut rng);
            let half = 0.5 * s.diameter();
            (s, rng.gen_range(0.0..half), rng.gen_range(0.0..half))
        })
        .collect();
    let errs: Vec<[(f64, f64); 3]> = cases
        .par_iter()
        .map(|(s, r, rho)| {
            let h = opts.raster_resolution * s.diameter();
            let g = rasterize(s, h);
            let pair = |exact: RoundedSet, area: f64| {
                ((area - exact.area() * (1.0 + opts.perturb)).abs(), 5.0 * h * exact.perimeter())
            };
            [
                pair(dilate(s, *r), raster_dilate(&g, *r).area()),
                pair(erode(s, *r), raster_erode(&g, *r).area()),
                pair(opening(s, *rho), raster_opening(&g, *rho).area()),
            ]
        })
        .collect();
    let mut out = Vec::new();
    for (k, name) in ["raster_dilate", "raster_erode", "raster_opening"].iter().enumerate() {
        let mut t = Tally::new();
        for e in &errs {
            // An empty exact erosion must rasterize to (almost) nothing.
            t.add(e[k].0, e[k].1.max(1e-12));
        }
        out.push(t.finish(name));
    }
    out
}
