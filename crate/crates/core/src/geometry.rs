//! Points, convex polygons and disk-rounded convex polygons.
//!
//! Every set handled by the crate is a [`RoundedSet`]: a convex polygonal
//! kernel (possibly a single point or a segment) dilated by a closed disk.
//! Areas and perimeters follow the Steiner formulas exactly; support
//! functions are evaluated in closed form, which lets containment and
//! Hausdorff distance be computed without angular sampling.

use std::f64::consts::{PI, TAU};
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Relative tolerance used when merging vertices and dropping collinear ones.
pub const CANON_EPS: f64 = 1e-12;

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Point2 {
    pub x: f64,
    pub y: f64,
}

impl Point2 {
    pub const ORIGIN: Point2 = Point2 { x: 0.0, y: 0.0 };

    #[inline]
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    /// Unit vector at angle `theta`.
    #[inline]
    pub fn polar(theta: f64) -> Self {
        let (s, c) = theta.sin_cos();
        Self { x: c, y: s }
    }

    #[inline]
    pub fn dot(self, o: Point2) -> f64 {
        self.x * o.x + self.y * o.y
    }

    #[inline]
    pub fn cross(self, o: Point2) -> f64 {
        self.x * o.y - self.y * o.x
    }

    #[inline]
    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    #[inline]
    pub fn norm_sq(self) -> f64 {
        self.dot(self)
    }

    #[inline]
    pub fn dist(self, o: Point2) -> f64 {
        (self - o).norm()
    }

    #[inline]
    pub fn angle(self) -> f64 {
        self.y.atan2(self.x)
    }

    /// Counterclockwise perpendicular.
    #[inline]
    pub fn perp(self) -> Self {
        Self { x: -self.y, y: self.x }
    }

    pub fn normalized(self) -> Self {
        let n = self.norm();
        Self { x: self.x / n, y: self.y / n }
    }

    pub fn midpoint(self, o: Point2) -> Self {
        Self { x: 0.5 * (self.x + o.x), y: 0.5 * (self.y + o.y) }
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }
}

impl Add for Point2 {
    type Output = Point2;
    #[inline]
    fn add(self, o: Point2) -> Point2 {
        Point2::new(self.x + o.x, self.y + o.y)
    }
}

impl AddAssign for Point2 {
    #[inline]
    fn add_assign(&mut self, o: Point2) {
        self.x += o.x;
        self.y += o.y;
    }
}

impl Sub for Point2 {
    type Output = Point2;
    #[inline]
    fn sub(self, o: Point2) -> Point2 {
        Point2::new(self.x - o.x, self.y - o.y)
    }
}

impl Mul<f64> for Point2 {
    type Output = Point2;
    #[inline]
    fn mul(self, k: f64) -> Point2 {
        Point2::new(self.x * k, self.y * k)
    }
}

impl Neg for Point2 {
    type Output = Point2;
    #[inline]
    fn neg(self) -> Point2 {
        Point2::new(-self.x, -self.y)
    }
}

impl From<[f64; 2]> for Point2 {
    fn from(p: [f64; 2]) -> Self {
        Point2::new(p[0], p[1])
    }
}

/// Shape of a polygon once degenerate cases are recognised.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum KernelKind {
    Empty,
    Point,
    Segment,
    Polygon,
}

/// A convex polygon with counterclockwise vertices.
///
/// Zero, one and two vertices encode the empty set, a point and a segment.
/// With three or more vertices every turn is strictly positive.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct ConvexPolygon {
    vertices: Vec<Point2>,
}

impl ConvexPolygon {
    pub fn empty() -> Self {
        Self { vertices: Vec::new() }
    }

    pub fn point(p: Point2) -> Self {
        Self { vertices: vec![p] }
    }

    pub fn segment(p: Point2, q: Point2) -> Self {
        Self::hull(&[p, q])
    }

    /// Axis-aligned rectangle `[x0, x1] × [y0, y1]`.
    pub fn rectangle(x0: f64, y0: f64, x1: f64, y1: f64) -> Self {
        Self::hull(&[
            Point2::new(x0, y0),
            Point2::new(x1, y0),
            Point2::new(x1, y1),
            Point2::new(x0, y1),
        ])
    }

    /// Regular `n`-gon inscribed in the circle of radius `r` around `center`,
    /// with its first vertex at angle `phase`.
    pub fn regular(n: usize, center: Point2, r: f64, phase: f64) -> Self {
        let pts: Vec<Point2> = (0..n)
            .map(|k| center + Point2::polar(phase + TAU * k as f64 / n as f64) * r)
            .collect();
        Self::hull(&pts)
    }

    /// Validates a vertex list describing a convex polygon.
    ///
    /// Either orientation is accepted. Duplicate and collinear vertices are
    /// removed, and a reflex or self-overlapping chain is rejected.
    pub fn new(vertices: Vec<Point2>) -> Result<Self> {
        if vertices.iter().any(|p| !p.is_finite()) {
            return Err(Error::NonFinite);
        }
        let scale = extent(&vertices);
        let len_tol = CANON_EPS * scale.max(f64::MIN_POSITIVE);
        let mut pts: Vec<Point2> = Vec::with_capacity(vertices.len());
        for &p in &vertices {
            if pts.last().map_or(true, |&q| q.dist(p) > len_tol) {
                pts.push(p);
            }
        }
        while pts.len() > 1 && pts[0].dist(*pts.last().unwrap()) <= len_tol {
            pts.pop();
        }
        if pts.len() >= 3 {
            let n = pts.len();
            let area2: f64 = (0..n).map(|i| pts[i].cross(pts[(i + 1) % n])).sum();
            if area2 < 0.0 {
                pts.reverse();
            }
            let cross_tol = CANON_EPS * scale * scale;
            let mut turning = 0.0;
            for i in 0..n {
                let a = pts[(i + n - 1) % n];
                let b = pts[i];
                let c = pts[(i + 1) % n];
                let (u, v) = (b - a, c - b);
                if u.cross(v) < -cross_tol {
                    return Err(Error::NotConvex);
                }
                turning += u.cross(v).atan2(u.dot(v));
            }
            if area2.abs() > cross_tol && (turning - TAU).abs() > 1e-6 {
                return Err(Error::NotConvex);
            }
        }
        Ok(Self::hull(&pts))
    }

    /// Convex hull of arbitrary points, canonicalised (Andrew's monotone chain).
    pub fn hull(points: &[Point2]) -> Self {
        let mut pts: Vec<Point2> = points.iter().copied().filter(|p| p.is_finite()).collect();
        if pts.is_empty() {
            return Self::empty();
        }
        let scale = extent(&pts);
        let len_tol = CANON_EPS * scale;
        let cross_tol = CANON_EPS * scale * scale;
        pts.sort_by(|a, b| a.x.total_cmp(&b.x).then(a.y.total_cmp(&b.y)));
        pts.dedup_by(|a, b| a.dist(*b) <= len_tol);
        if pts.len() == 1 || scale == 0.0 {
            return Self::point(pts[0]);
        }

        let turn = |o: Point2, a: Point2, b: Point2| (a - o).cross(b - o);
        let mut hull: Vec<Point2> = Vec::with_capacity(pts.len() + 1);
        for &p in &pts {
            while hull.len() >= 2 && turn(hull[hull.len() - 2], hull[hull.len() - 1], p) <= cross_tol {
                hull.pop();
            }
            hull.push(p);
        }
        let lower = hull.len() + 1;
        for &p in pts.iter().rev().skip(1) {
            while hull.len() >= lower && turn(hull[hull.len() - 2], hull[hull.len() - 1], p) <= cross_tol {
                hull.pop();
            }
            hull.push(p);
        }
        hull.pop();

        // Final pass: merge near-coincident neighbours left by the chain.
        let mut out: Vec<Point2> = Vec::with_capacity(hull.len());
        for p in hull {
            if out.last().map_or(true, |q: &Point2| q.dist(p) > len_tol) {
                out.push(p);
            }
        }
        while out.len() > 1 && out[0].dist(*out.last().unwrap()) <= len_tol {
            out.pop();
        }
        match out.len() {
            0 => Self::point(pts[0]),
            1 => Self::point(out[0]),
            2 => Self { vertices: out },
            _ => {
                let area = polygon_area_of(&out);
                if area <= cross_tol {
                    // Numerically flat: keep the farthest pair.
                    let (a, b) = farthest_pair(&out);
                    Self { vertices: vec![a, b] }
                } else {
                    Self { vertices: out }
                }
            }
        }
    }

    pub fn vertices(&self) -> &[Point2] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn kind(&self) -> KernelKind {
        match self.vertices.len() {
            0 => KernelKind::Empty,
            1 => KernelKind::Point,
            2 => KernelKind::Segment,
            _ => KernelKind::Polygon,
        }
    }

    /// Shoelace area; zero for degenerate polygons.
    pub fn area(&self) -> f64 {
        if self.vertices.len() < 3 {
            0.0
        } else {
            polygon_area_of(&self.vertices)
        }
    }

    /// Boundary length. A segment counts both of its sides.
    pub fn perimeter(&self) -> f64 {
        match self.vertices.len() {
            0 | 1 => 0.0,
            2 => 2.0 * self.vertices[0].dist(self.vertices[1]),
            n => (0..n).map(|i| self.vertices[i].dist(self.vertices[(i + 1) % n])).sum(),
        }
    }

    /// Area centroid, or the midpoint/point for degenerate polygons.
    pub fn centroid(&self) -> Option<Point2> {
        let v = &self.vertices;
        match v.len() {
            0 => None,
            1 => Some(v[0]),
            2 => Some(v[0].midpoint(v[1])),
            n => {
                let o = v[0];
                let (mut cx, mut cy, mut a2) = (0.0, 0.0, 0.0);
                for i in 0..n {
                    let p = v[i] - o;
                    let q = v[(i + 1) % n] - o;
                    let c = p.cross(q);
                    a2 += c;
                    cx += (p.x + q.x) * c;
                    cy += (p.y + q.y) * c;
                }
                Some(o + Point2::new(cx, cy) * (1.0 / (3.0 * a2)))
            }
        }
    }

    pub fn diameter(&self) -> f64 {
        if self.vertices.len() < 2 {
            return 0.0;
        }
        let (a, b) = farthest_pair(&self.vertices);
        a.dist(b)
    }

    /// Outward unit normals of the boundary edges, in counterclockwise order.
    ///
    /// A segment has the two normals of its sides; a point has none.
    pub fn edge_normals(&self) -> Vec<Point2> {
        let v = &self.vertices;
        let n = v.len();
        if n < 2 {
            return Vec::new();
        }
        (0..n)
            .map(|i| {
                let d = v[(i + 1) % n] - v[i];
                Point2::new(d.y, -d.x).normalized()
            })
            .collect()
    }

    /// Half-planes `n · x ≤ c` whose intersection is the polygon (n ≥ 3).
    pub fn half_planes(&self) -> Vec<(Point2, f64)> {
        self.edge_normals()
            .into_iter()
            .zip(&self.vertices)
            .map(|(n, &v)| (n, n.dot(v)))
            .collect()
    }

    pub fn support(&self, dir: Point2) -> f64 {
        self.vertices.iter().map(|v| v.dot(dir)).fold(f64::NEG_INFINITY, f64::max)
    }

    fn support_vertex(&self, dir: Point2) -> Point2 {
        let mut best = self.vertices[0];
        let mut best_val = best.dot(dir);
        for &v in &self.vertices[1..] {
            let val = v.dot(dir);
            if val > best_val {
                best = v;
                best_val = val;
            }
        }
        best
    }

    /// Euclidean distance from `p` to the polygon (zero inside).
    pub fn distance_to(&self, p: Point2) -> f64 {
        let v = &self.vertices;
        match v.len() {
            0 => f64::INFINITY,
            1 => p.dist(v[0]),
            2 => segment_distance(p, v[0], v[1]),
            n => {
                let inside = (0..n).all(|i| (v[(i + 1) % n] - v[i]).cross(p - v[i]) >= 0.0);
                if inside {
                    0.0
                } else {
                    (0..n)
                        .map(|i| segment_distance(p, v[i], v[(i + 1) % n]))
                        .fold(f64::INFINITY, f64::min)
                }
            }
        }
    }

    pub fn translated(&self, by: Point2) -> Self {
        Self { vertices: self.vertices.iter().map(|&v| v + by).collect() }
    }

    /// Homothety with ratio `k > 0` about `center`.
    pub fn scaled(&self, center: Point2, k: f64) -> Self {
        Self { vertices: self.vertices.iter().map(|&v| center + (v - center) * k).collect() }
    }

    /// Minkowski sum of two convex polygons.
    pub fn minkowski_sum(&self, other: &ConvexPolygon) -> Self {
        if self.is_empty() || other.is_empty() {
            return Self::empty();
        }
        let mut pts = Vec::with_capacity(self.len() * other.len());
        for &a in &self.vertices {
            for &b in &other.vertices {
                pts.push(a + b);
            }
        }
        Self::hull(&pts)
    }
}

fn extent(pts: &[Point2]) -> f64 {
    let mut lo = Point2::new(f64::INFINITY, f64::INFINITY);
    let mut hi = Point2::new(f64::NEG_INFINITY, f64::NEG_INFINITY);
    for p in pts {
        lo.x = lo.x.min(p.x);
        lo.y = lo.y.min(p.y);
        hi.x = hi.x.max(p.x);
        hi.y = hi.y.max(p.y);
    }
    if pts.is_empty() {
        0.0
    } else {
        (hi.x - lo.x).max(hi.y - lo.y)
    }
}

fn polygon_area_of(v: &[Point2]) -> f64 {
    let n = v.len();
    let o = v[0];
    let s: f64 = (1..n - 1).map(|i| (v[i] - o).cross(v[i + 1] - o)).sum();
    0.5 * s.abs()
}

fn farthest_pair(v: &[Point2]) -> (Point2, Point2) {
    let mut best = (v[0], v[0]);
    let mut d = -1.0;
    for i in 0..v.len() {
        for j in i + 1..v.len() {
            let dd = v[i].dist(v[j]);
            if dd > d {
                d = dd;
                best = (v[i], v[j]);
            }
        }
    }
    best
}

pub(crate) fn segment_distance(p: Point2, a: Point2, b: Point2) -> f64 {
    let d = b - a;
    let len2 = d.norm_sq();
    if len2 == 0.0 {
        return p.dist(a);
    }
    let t = ((p - a).dot(d) / len2).clamp(0.0, 1.0);
    p.dist(a + d * t)
}

/// A convex polygon dilated by a closed disk: `kernel ⊕ B(radius)`.
///
/// Balls (point kernels) and stadiums (segment kernels) are ordinary values
/// of this type. The set is empty exactly when the kernel is empty.
#[derive(Clone, Debug, PartialEq)]
pub struct RoundedSet {
    kernel: ConvexPolygon,
    radius: f64,
}

impl RoundedSet {
    pub fn new(kernel: ConvexPolygon, radius: f64) -> Result<Self> {
        if !(radius.is_finite() && radius >= 0.0) {
            return Err(Error::BadRadius(radius));
        }
        Ok(Self::from_parts(kernel, radius))
    }

    pub(crate) fn from_parts(kernel: ConvexPolygon, radius: f64) -> Self {
        if kernel.is_empty() {
            Self::empty()
        } else {
            Self { kernel, radius: radius.max(0.0) }
        }
    }

    pub fn empty() -> Self {
        Self { kernel: ConvexPolygon::empty(), radius: 0.0 }
    }

    pub fn polygon(kernel: ConvexPolygon) -> Self {
        Self::from_parts(kernel, 0.0)
    }

    pub fn ball(center: Point2, radius: f64) -> Self {
        Self::from_parts(ConvexPolygon::point(center), radius)
    }

    pub fn stadium(p: Point2, q: Point2, radius: f64) -> Self {
        Self::from_parts(ConvexPolygon::segment(p, q), radius)
    }

    pub fn kernel(&self) -> &ConvexPolygon {
        &self.kernel
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn is_empty(&self) -> bool {
        self.kernel.is_empty()
    }

    /// Steiner area `A + r·P + π r²`.
    pub fn area(&self) -> f64 {
        if self.is_empty() {
            return 0.0;
        }
        let r = self.radius;
        self.kernel.area() + r * self.kernel.perimeter() + PI * r * r
    }

    /// Steiner perimeter `P + 2π r`.
    pub fn perimeter(&self) -> f64 {
        if self.is_empty() {
            return 0.0;
        }
        self.kernel.perimeter() + TAU * self.radius
    }

    pub fn diameter(&self) -> f64 {
        if self.is_empty() {
            0.0
        } else {
            self.kernel.diameter() + 2.0 * self.radius
        }
    }

    /// Area centroid, decomposed into the kernel, one rectangle per edge and
    /// one circular sector per vertex.
    pub fn centroid(&self) -> Result<Point2> {
        let v = self.kernel.vertices();
        let r = self.radius;
        match v.len() {
            0 => return Err(Error::EmptySet),
            1 => return Ok(v[0]),
            _ => {}
        }
        let normals = self.kernel.edge_normals();
        let n = v.len();
        let mut weight = self.kernel.area();
        let mut moment = self.kernel.centroid().unwrap_or(Point2::ORIGIN) * weight;
        if r > 0.0 {
            for i in 0..n {
                let (a, b) = (v[i], v[(i + 1) % n]);
                let w = a.dist(b) * r;
                moment += (a.midpoint(b) + normals[i] * (0.5 * r)) * w;
                weight += w;

                let n_in = normals[(i + n - 1) % n];
                let n_out = normals[i];
                let phi = exterior_angle(n_in, n_out);
                let half = 0.5 * phi;
                let bisector = rotate(n_in, half);
                let w = 0.5 * phi * r * r;
                let arm = 2.0 * r * half.sin() / (3.0 * half);
                moment += (v[i] + bisector * arm) * w;
                weight += w;
            }
        }
        if weight == 0.0 {
            return self.kernel.centroid().ok_or(Error::EmptySet);
        }
        Ok(moment * (1.0 / weight))
    }

    /// Support function in direction `theta`.
    pub fn support(&self, theta: f64) -> Result<f64> {
        if self.is_empty() {
            return Err(Error::EmptySet);
        }
        Ok(self.kernel.support(Point2::polar(theta)) + self.radius)
    }

    pub fn contains_point(&self, p: Point2) -> bool {
        !self.is_empty() && self.kernel.distance_to(p) <= self.radius
    }

    pub fn translated(&self, by: Point2) -> Self {
        Self::from_parts(self.kernel.translated(by), self.radius)
    }

    /// Homothety with ratio `k > 0` about `center`.
    pub fn scaled(&self, center: Point2, k: f64) -> Self {
        Self::from_parts(self.kernel.scaled(center, k), self.radius * k)
    }

    /// Breakpoint angles of the support function: the kernel's edge normals.
    fn normal_angles(&self) -> impl Iterator<Item = f64> + '_ {
        self.kernel.edge_normals().into_iter().map(|n| n.angle().rem_euclid(TAU))
    }
}

/// Angle in `(0, 2π)` turned counterclockwise from `from` to `to`; `π` for
/// opposite vectors.
pub(crate) fn exterior_angle(from: Point2, to: Point2) -> f64 {
    let a = from.cross(to).atan2(from.dot(to));
    if a <= 0.0 {
        a + TAU
    } else {
        a
    }
}

fn rotate(p: Point2, angle: f64) -> Point2 {
    let (s, c) = angle.sin_cos();
    Point2::new(c * p.x - s * p.y, s * p.x + c * p.y)
}

pub fn polygon_area(p: &ConvexPolygon) -> f64 {
    p.area()
}

pub fn polygon_perimeter(p: &ConvexPolygon) -> f64 {
    p.perimeter()
}

pub fn rounded_area(s: &RoundedSet) -> f64 {
    s.area()
}

pub fn rounded_perimeter(s: &RoundedSet) -> f64 {
    s.perimeter()
}

pub fn rounded_centroid(s: &RoundedSet) -> Result<Point2> {
    s.centroid()
}

pub fn support(s: &RoundedSet, theta: f64) -> Result<f64> {
    s.support(theta)
}

/// `max_θ h_B(θ) − h_A(θ)`, computed exactly.
///
/// Between consecutive normal angles of either kernel both support functions
/// are attained at fixed vertices, so their difference is a single sinusoid
/// whose maximum on the interval is found in closed form.
pub fn support_excess(a: &RoundedSet, b: &RoundedSet) -> Result<f64> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::EmptySet);
    }
    let mut angles: Vec<f64> = a
        .normal_angles()
        .chain(b.normal_angles())
        .chain([0.0, 0.5 * PI, PI, 1.5 * PI])
        .collect();
    angles.sort_by(f64::total_cmp);
    angles.dedup_by(|x, y| (*x - *y).abs() < 1e-15);

    let c = b.radius - a.radius;
    let mut best = f64::NEG_INFINITY;
    let m = angles.len();
    for i in 0..m {
        let lo = angles[i];
        let hi = if i + 1 < m { angles[i + 1] } else { angles[0] + TAU };
        let mid = Point2::polar(0.5 * (lo + hi));
        let w = b.kernel.support_vertex(mid) - a.kernel.support_vertex(mid);
        let eval = |th: f64| w.dot(Point2::polar(th)) + c;
        best = best.max(eval(lo)).max(eval(hi));
        if w.norm_sq() > 0.0 {
            let peak = w.angle().rem_euclid(TAU);
            for cand in [peak, peak + TAU] {
                if cand > lo && cand < hi {
                    best = best.max(w.norm() + c);
                }
            }
        }
    }
    Ok(best)
}

/// Whether `b ⊆ a` up to `tol`, through the support-function order.
pub fn contains(a: &RoundedSet, b: &RoundedSet, tol: f64) -> bool {
    match (a.is_empty(), b.is_empty()) {
        (_, true) => true,
        (true, false) => false,
        _ => support_excess(a, b).map_or(false, |e| e <= tol),
    }
}

/// Hausdorff distance of two nonempty convex sets: the sup-norm of the
/// difference of their support functions.
pub fn hausdorff(a: &RoundedSet, b: &RoundedSet) -> Result<f64> {
    let ab = support_excess(a, b)?;
    let ba = support_excess(b, a)?;
    Ok(ab.max(ba).max(0.0))
}

/// Length of `∂S ∩ B_r(center)`, clipping every straight edge and every
/// corner arc against the disk exactly.
///
/// A segment kernel with zero radius contributes both of its sides, matching
/// the perimeter convention.
pub fn boundary_length_in_disk(s: &RoundedSet, center: Point2, r: f64) -> f64 {
    if s.is_empty() || r <= 0.0 {
        return 0.0;
    }
    let v = s.kernel.vertices();
    let rad = s.radius;
    if v.len() == 1 {
        return arc_length_in_disk(v[0], rad, 0.0, TAU, center, r);
    }
    let normals = s.kernel.edge_normals();
    let n = v.len();
    let mut total = 0.0;
    for i in 0..n {
        let off = normals[i] * rad;
        total += segment_length_in_disk(v[i] + off, v[(i + 1) % n] + off, center, r);
        if rad > 0.0 {
            let n_in = normals[(i + n - 1) % n];
            let span = exterior_angle(n_in, normals[i]);
            total += arc_length_in_disk(v[i], rad, n_in.angle(), span, center, r);
        }
    }
    total
}

fn segment_length_in_disk(a: Point2, b: Point2, c: Point2, r: f64) -> f64 {
    let d = b - a;
    let len2 = d.norm_sq();
    if len2 == 0.0 {
        return 0.0;
    }
    let f = a - c;
    let qa = len2;
    let qb = 2.0 * f.dot(d);
    let qc = f.norm_sq() - r * r;
    let disc = qb * qb - 4.0 * qa * qc;
    if disc <= 0.0 {
        return 0.0;
    }
    let sq = disc.sqrt();
    let t0 = ((-qb - sq) / (2.0 * qa)).max(0.0);
    let t1 = ((-qb + sq) / (2.0 * qa)).min(1.0);
    if t1 <= t0 {
        0.0
    } else {
        (t1 - t0) * len2.sqrt()
    }
}

/// Length of the arc `{v + rad·u(φ) : φ ∈ [start, start + span]}` inside `B_r(c)`.
fn arc_length_in_disk(v: Point2, rad: f64, start: f64, span: f64, c: Point2, r: f64) -> f64 {
    if rad <= 0.0 {
        return 0.0;
    }
    let to_c = c - v;
    let dist = to_c.norm();
    let inside = if dist == 0.0 {
        if rad <= r {
            Some((0.0, TAU))
        } else {
            None
        }
    } else {
        let k = (rad * rad + dist * dist - r * r) / (2.0 * rad * dist);
        if k <= -1.0 {
            Some((0.0, TAU))
        } else if k >= 1.0 {
            None
        } else {
            let half = k.acos();
            Some((to_c.angle() - half, 2.0 * half))
        }
    };
    match inside {
        Some((s2, w2)) => rad * circular_overlap(start, span, s2, w2),
        None => 0.0,
    }
}

/// Overlap of two arcs of the unit circle given as (start, length).
fn circular_overlap(s1: f64, w1: f64, s2: f64, w2: f64) -> f64 {
    if w1 >= TAU {
        return w2.min(TAU);
    }
    if w2 >= TAU {
        return w1;
    }
    let s1 = s1.rem_euclid(TAU);
    let s2 = s2.rem_euclid(TAU);
    [-TAU, 0.0, TAU]
        .iter()
        .map(|&shift| {
            let lo = s1.max(s2 + shift);
            let hi = (s1 + w1).min(s2 + shift + w2);
            (hi - lo).max(0.0)
        })
        .sum()
}
