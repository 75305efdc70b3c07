//! Disk dilation, erosion and opening of rounded sets.
//!
//! Erosion of a convex polygon by a disk moves every edge inward at unit
//! speed. While no edge vanishes the vertices travel along straight lines,
//! so area and perimeter are quadratic/linear in the depth. An
//! [`ErosionSchedule`] records those phases once per kernel, after which any
//! depth is evaluated in closed form. [`polygon_erode_clipped`] is an
//! independent half-plane clipping route kept for cross-checks.

use crate::error::{Error, Result};
use crate::geometry::{hausdorff, ConvexPolygon, KernelKind, Point2, RoundedSet, CANON_EPS};

#[derive(Clone, Debug)]
struct Phase {
    start: f64,
    vertices: Vec<Point2>,
    velocity: Vec<Point2>,
    area: f64,
    perimeter: f64,
    /// Σ tan(θᵢ/2) over the exterior angles θᵢ.
    tan_sum: f64,
}

impl Phase {
    fn new(start: f64, poly: &ConvexPolygon) -> Self {
        let v = poly.vertices().to_vec();
        let normals = poly.edge_normals();
        let n = v.len();
        let mut velocity = Vec::with_capacity(n);
        let mut tan_sum = 0.0;
        for i in 0..n {
            let a = normals[(i + n - 1) % n];
            let b = normals[i];
            let denom = 1.0 + a.dot(b);
            velocity.push(-(a + b) * (1.0 / denom));
            tan_sum += a.cross(b) / denom;
        }
        Self { start, area: poly.area(), perimeter: poly.perimeter(), vertices: v, velocity, tan_sum }
    }

    fn at(&self, d: f64) -> ConvexPolygon {
        let delta = d - self.start;
        let pts: Vec<Point2> = self.vertices.iter().zip(&self.velocity).map(|(&v, &w)| v + w * delta).collect();
        ConvexPolygon::hull(&pts)
    }
}

/// Piecewise closed-form description of `d ↦ kernel ⊖ B_d`.
#[derive(Clone, Debug)]
pub struct ErosionSchedule {
    phases: Vec<Phase>,
    depth: f64,
    locus: ConvexPolygon,
    tol: f64,
}

impl ErosionSchedule {
    pub fn new(kernel: &ConvexPolygon) -> Self {
        let diam = kernel.diameter();
        let tol = CANON_EPS * diam.max(f64::MIN_POSITIVE);
        if kernel.kind() != KernelKind::Polygon {
            return Self { phases: Vec::new(), depth: 0.0, locus: kernel.clone(), tol };
        }
        let mut phases = Vec::new();
        let mut poly = kernel.clone();
        let mut d = 0.0;
        // Each phase removes at least one edge.
        for _ in 0..=kernel.len() {
            let phase = Phase::new(d, &poly);
            let v = &phase.vertices;
            let n = v.len();
            let mut edge_event = f64::INFINITY;
            for i in 0..n {
                let j = (i + 1) % n;
                let e = v[j] - v[i];
                let len = e.norm();
                let rate = (phase.velocity[j] - phase.velocity[i]).dot(e) / len;
                if rate < 0.0 {
                    edge_event = edge_event.min(len / -rate);
                }
            }
            let (a, p, t) = (phase.area, phase.perimeter, phase.tan_sum);
            let area_root = 2.0 * a / (p + (p * p - 4.0 * a * t).max(0.0).sqrt());
            phases.push(phase);
            let last = phases.last().unwrap();

            // Collapse always coincides with an edge event; the area root is
            // only a fallback since it is ill-conditioned at a double root.
            if area_root < edge_event * (1.0 - 1e-6) {
                let locus = snap(last.at(d + area_root), diam);
                return Self { depth: d + area_root, locus, phases, tol };
            }
            d += edge_event;
            poly = last.at(d);
            if poly.kind() != KernelKind::Polygon || 2.0 * poly.area() / poly.perimeter() <= 1e-11 * diam {
                return Self { depth: d, locus: snap(poly, diam), phases, tol };
            }
        }
        unreachable!("erosion schedule did not terminate")
    }

    /// Largest depth with a nonempty erosion: the kernel's inner radius.
    pub fn max_depth(&self) -> f64 {
        self.depth
    }

    /// The erosion at maximal depth: a point or a segment.
    pub fn locus(&self) -> &ConvexPolygon {
        &self.locus
    }

    pub fn tolerance(&self) -> f64 {
        self.tol
    }

    pub fn phase_count(&self) -> usize {
        self.phases.len()
    }

    /// Depths at which the combinatorics change, starting with 0.
    pub fn phase_starts(&self) -> impl Iterator<Item = f64> + '_ {
        self.phases.iter().map(|p| p.start)
    }

    /// Index of the phase containing depth `d`.
    pub fn phase_index(&self, d: f64) -> usize {
        self.phases.partition_point(|p| p.start <= d).saturating_sub(1)
    }

    /// `Σ tan(θᵢ/2)` of the eroded polygon at depth `d`.
    pub fn tan_sum(&self, d: f64) -> f64 {
        self.phases.get(self.phase_index(d)).map_or(std::f64::consts::PI, |p| p.tan_sum)
    }

    pub fn area_at(&self, d: f64) -> f64 {
        if self.phases.is_empty() || d >= self.depth {
            return 0.0;
        }
        let p = &self.phases[self.phase_index(d)];
        let delta = d - p.start;
        (p.area - p.perimeter * delta + p.tan_sum * delta * delta).max(0.0)
    }

    pub fn perimeter_at(&self, d: f64) -> f64 {
        if self.phases.is_empty() || d >= self.depth {
            return self.locus.perimeter();
        }
        let p = &self.phases[self.phase_index(d)];
        p.perimeter - 2.0 * p.tan_sum * (d - p.start)
    }

    /// `kernel ⊖ B_d`, snapped to the locus within tolerance of the maximal depth.
    pub fn erode(&self, d: f64) -> ConvexPolygon {
        if d > self.depth + self.tol {
            return ConvexPolygon::empty();
        }
        if d >= self.depth - self.tol || self.phases.is_empty() {
            return self.locus.clone();
        }
        self.phases[self.phase_index(d)].at(d.max(0.0))
    }
}

/// Reduces a numerically collapsed polygon to a point or segment.
fn snap(p: ConvexPolygon, scale: f64) -> ConvexPolygon {
    let spine = flatten(p);
    if spine.kind() == KernelKind::Segment && spine.diameter() <= 1e-9 * scale {
        let v = spine.vertices();
        return ConvexPolygon::point(v[0].midpoint(v[1]));
    }
    spine
}

/// Reduces a numerically flat polygon to its spine.
fn flatten(p: ConvexPolygon) -> ConvexPolygon {
    if p.kind() != KernelKind::Polygon {
        return p;
    }
    let v = p.vertices();
    let mut best = (v[0], v[0], -1.0);
    for i in 0..v.len() {
        for j in i + 1..v.len() {
            let d = v[i].dist(v[j]);
            if d > best.2 {
                best = (v[i], v[j], d);
            }
        }
    }
    ConvexPolygon::segment(best.0, best.1)
}

/// Centers of the maximal inscribed balls, `{b + h e : |h| ≤ half_length}`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct InnerBallLocus {
    pub radius: f64,
    pub center: Point2,
    pub direction: Point2,
    pub half_length: f64,
}

impl InnerBallLocus {
    pub fn from_polygon(locus: &ConvexPolygon, radius: f64) -> Self {
        let v = locus.vertices();
        match v.len() {
            1 => Self { radius, center: v[0], direction: Point2::new(1.0, 0.0), half_length: 0.0 },
            2 => {
                let mut e = (v[1] - v[0]).normalized();
                if e.x < 0.0 || (e.x == 0.0 && e.y < 0.0) {
                    e = -e;
                }
                Self { radius, center: v[0].midpoint(v[1]), direction: e, half_length: 0.5 * v[0].dist(v[1]) }
            }
            _ => panic!("inner-ball locus must be a point or a segment"),
        }
    }

    pub fn segment(&self) -> ConvexPolygon {
        if self.half_length == 0.0 {
            ConvexPolygon::point(self.center)
        } else {
            let h = self.direction * self.half_length;
            ConvexPolygon::segment(self.center - h, self.center + h)
        }
    }
}

pub fn dilate(s: &RoundedSet, r: f64) -> RoundedSet {
    if s.is_empty() {
        return RoundedSet::empty();
    }
    RoundedSet::from_parts(s.kernel().clone(), s.radius() + r)
}

/// `{x : B_d(x) ⊆ P}` for a convex polygon.
pub fn polygon_erode(p: &ConvexPolygon, d: f64) -> ConvexPolygon {
    if d <= 0.0 {
        return p.clone();
    }
    ErosionSchedule::new(p).erode(d)
}

/// `{x : B_r(x) ⊆ S}`.
pub fn erode(s: &RoundedSet, r: f64) -> RoundedSet {
    if s.is_empty() {
        return RoundedSet::empty();
    }
    if r <= s.radius() {
        RoundedSet::from_parts(s.kernel().clone(), s.radius() - r)
    } else {
        RoundedSet::polygon(polygon_erode(s.kernel(), r - s.radius()))
    }
}

/// Union of all `ρ`-balls contained in `S`: erosion followed by dilation.
pub fn opening(s: &RoundedSet, rho: f64) -> RoundedSet {
    if s.is_empty() || rho <= s.radius() {
        return s.clone();
    }
    dilate(&erode(s, rho), rho)
}

/// Inner radius and the locus of maximal inscribed balls.
pub fn inner_radius(s: &RoundedSet) -> Result<(f64, InnerBallLocus)> {
    if s.is_empty() {
        return Err(Error::EmptySet);
    }
    let sched = ErosionSchedule::new(s.kernel());
    let r = sched.max_depth() + s.radius();
    Ok((r, InnerBallLocus::from_polygon(sched.locus(), r)))
}

/// Hausdorff distance between `E` and `(E ⊕ B_r) ⊖ B_r`.
pub fn duality_gap(e: &RoundedSet, r: f64) -> f64 {
    if e.is_empty() {
        return 0.0;
    }
    let back = erode(&dilate(e, r), r);
    hausdorff(e, &back).unwrap_or(f64::INFINITY)
}

/// Half-plane route: clip the polygon by every edge line moved inward by `d`.
///
/// No snapping is applied, so near the maximal depth the result is a thin
/// sliver rather than the exact locus. Returns the empty polygon once the
/// half-planes stop intersecting.
pub fn clip_erode(p: &ConvexPolygon, d: f64) -> ConvexPolygon {
    if p.kind() != KernelKind::Polygon {
        return if d <= 0.0 { p.clone() } else { ConvexPolygon::empty() };
    }
    let mut poly: Vec<Point2> = p.vertices().to_vec();
    for (n, c) in p.half_planes() {
        let c = c - d;
        let mut next = Vec::with_capacity(poly.len() + 1);
        let m = poly.len();
        for i in 0..m {
            let a = poly[i];
            let b = poly[(i + 1) % m];
            let fa = n.dot(a) - c;
            let fb = n.dot(b) - c;
            if fa <= 0.0 {
                next.push(a);
            }
            if (fa < 0.0 && fb > 0.0) || (fa > 0.0 && fb < 0.0) {
                let t = fa / (fa - fb);
                next.push(a + (b - a) * t);
            }
        }
        poly = next;
        if poly.is_empty() {
            return ConvexPolygon::empty();
        }
    }
    ConvexPolygon::hull(&poly)
}

/// Inner radius by bisection on emptiness of [`clip_erode`], seeded by the
/// distance from the centroid to the nearest edge line.
pub fn inner_radius_bisect(p: &ConvexPolygon) -> f64 {
    if p.kind() != KernelKind::Polygon {
        return 0.0;
    }
    let c = p.centroid().unwrap();
    let mut lo = p.half_planes().iter().map(|&(n, off)| off - n.dot(c)).fold(f64::INFINITY, f64::min);
    let mut hi = 0.5 * p.diameter() * (1.0 + 1e-9);
    let tol = CANON_EPS * p.diameter();
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if clip_erode(p, mid).is_empty() {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    lo
}

/// Erosion through half-plane clipping, snapped to a point or segment near
/// the bisected inner radius.
pub fn polygon_erode_clipped(p: &ConvexPolygon, d: f64) -> ConvexPolygon {
    if d <= 0.0 {
        return p.clone();
    }
    let d_max = inner_radius_bisect(p);
    let tol = 1e-10 * p.diameter();
    if d > d_max + tol {
        return ConvexPolygon::empty();
    }
    if d >= d_max - tol {
        let sliver = clip_erode(p, d_max);
        let spine = flatten(sliver);
        if spine.diameter() <= 1e-8 * p.diameter() {
            return ConvexPolygon::point(spine.centroid().unwrap_or(Point2::ORIGIN));
        }
        return spine;
    }
    clip_erode(p, d)
}
