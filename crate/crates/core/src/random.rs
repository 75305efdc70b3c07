//! Seeded random convex sets for property checks.

use std::f64::consts::TAU;

use rand::Rng;

use crate::geometry::{ConvexPolygon, KernelKind, Point2, RoundedSet};

/// Random convex polygon: hull of 3 to 9 points on a jittered ellipse.
pub fn random_polygon<R: Rng + ?Sized>(rng: &mut R) -> ConvexPolygon {
    loop {
        let n = rng.gen_range(3..=9);
        let center = Point2::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        let (ax, ay) = (rng.gen_range(0.3..1.5), rng.gen_range(0.3..1.5));
        let tilt: f64 = rng.gen_range(0.0..TAU);
        let pts: Vec<Point2> = (0..n)
            .map(|_| {
                let phi: f64 = rng.gen_range(0.0..TAU);
                let k = rng.gen_range(0.8..1.0);
                let (x, y) = (k * ax * phi.cos(), k * ay * phi.sin());
                center + Point2::new(x * tilt.cos() - y * tilt.sin(), x * tilt.sin() + y * tilt.cos())
            })
            .collect();
        let p = ConvexPolygon::hull(&pts);
        if p.kind() == KernelKind::Polygon && p.area() > 0.02 * p.diameter().powi(2) {
            return p;
        }
    }
}

/// Random rounded set; about a quarter of them have sharp corners.
pub fn random_rounded_set<R: Rng + ?Sized>(rng: &mut R) -> RoundedSet {
    let kernel = random_polygon(rng);
    let radius = if rng.gen_bool(0.25) { 0.0 } else { rng.gen_range(0.0..0.5) };
    RoundedSet::new(kernel, radius).expect("valid radius")
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn deterministic_and_valid() {
        let a: Vec<RoundedSet> = (0..20).scan(ChaCha8Rng::seed_from_u64(5), |r, _| Some(random_rounded_set(r))).collect();
        let b: Vec<RoundedSet> = (0..20).scan(ChaCha8Rng::seed_from_u64(5), |r, _| Some(random_rounded_set(r))).collect();
        assert_eq!(a, b);
        for s in &a {
            assert_eq!(s.kernel().kind(), KernelKind::Polygon);
            assert!(s.area() > 0.0);
        }
    }
}
