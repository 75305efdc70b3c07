//! Pixel-grid morphology used as a brute-force cross-check.
//!
//! Dilation and erosion threshold an exact Euclidean distance transform
//! (two separable passes of the lower-envelope-of-parabolas algorithm).

use std::io::{self, Write};

use rayon::prelude::*;

use crate::geometry::{Point2, RoundedSet};

#[derive(Clone, Debug, PartialEq)]
pub struct RasterGrid {
    origin: Point2,
    h: f64,
    width: usize,
    height: usize,
    cells: Vec<bool>,
}

impl RasterGrid {
    /// A grid of `width × height` cells whose lower-left corner is `origin`.
    pub fn from_fn<F>(origin: Point2, h: f64, width: usize, height: usize, f: F) -> Self
    where
        F: Fn(Point2) -> bool + Sync,
    {
        let mut cells = vec![false; width * height];
        cells.par_chunks_mut(width.max(1)).enumerate().for_each(|(j, row)| {
            let y = origin.y + (j as f64 + 0.5) * h;
            for (i, c) in row.iter_mut().enumerate() {
                *c = f(Point2::new(origin.x + (i as f64 + 0.5) * h, y));
            }
        });
        Self { origin, h, width, height, cells }
    }

    pub fn empty(h: f64) -> Self {
        Self { origin: Point2::ORIGIN, h, width: 0, height: 0, cells: Vec::new() }
    }

    pub fn origin(&self) -> Point2 {
        self.origin
    }

    pub fn cell_size(&self) -> f64 {
        self.h
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        self.cells[j * self.width + i]
    }

    pub fn center(&self, i: usize, j: usize) -> Point2 {
        Point2::new(self.origin.x + (i as f64 + 0.5) * self.h, self.origin.y + (j as f64 + 0.5) * self.h)
    }

    pub fn count(&self) -> usize {
        self.cells.iter().filter(|&&c| c).count()
    }

    pub fn area(&self) -> f64 {
        self.count() as f64 * self.h * self.h
    }

    /// Same occupancy with `pad` empty cells added on every side.
    fn padded(&self, pad: usize) -> Self {
        let (w, h) = (self.width + 2 * pad, self.height + 2 * pad);
        let mut cells = vec![false; w * h];
        for j in 0..self.height {
            let src = &self.cells[j * self.width..(j + 1) * self.width];
            cells[(j + pad) * w + pad..(j + pad) * w + pad + self.width].copy_from_slice(src);
        }
        let shift = pad as f64 * self.h;
        Self { origin: Point2::new(self.origin.x - shift, self.origin.y - shift), h: self.h, width: w, height: h, cells }
    }

    /// Binary PGM (P5), one byte per cell, top row first.
    pub fn write_pgm<W: Write>(&self, mut out: W) -> io::Result<()> {
        write!(out, "P5\n{} {}\n255\n", self.width, self.height)?;
        for j in (0..self.height).rev() {
            let row: Vec<u8> = self.cells[j * self.width..(j + 1) * self.width].iter().map(|&c| if c { 255 } else { 0 }).collect();
            out.write_all(&row)?;
        }
        Ok(())
    }
}

/// Cells whose center lies within `radius` of the kernel, with a margin of
/// at least two cells around the set.
pub fn rasterize(s: &RoundedSet, h: f64) -> RasterGrid {
    if s.is_empty() || !(h > 0.0) {
        return RasterGrid::empty(h);
    }
    let v = s.kernel().vertices();
    let r = s.radius();
    let (mut x0, mut y0, mut x1, mut y1) = (f64::INFINITY, f64::INFINITY, f64::NEG_INFINITY, f64::NEG_INFINITY);
    for p in v {
        x0 = x0.min(p.x);
        y0 = y0.min(p.y);
        x1 = x1.max(p.x);
        y1 = y1.max(p.y);
    }
    let margin = r + 2.0 * h;
    let origin = Point2::new(x0 - margin - h, y0 - margin - h);
    let width = ((x1 - x0 + 2.0 * margin) / h).ceil() as usize + 2;
    let height = ((y1 - y0 + 2.0 * margin) / h).ceil() as usize + 2;
    let kernel = s.kernel();
    RasterGrid::from_fn(origin, h, width, height, |p| kernel.distance_to(p) <= r)
}

pub fn raster_area(g: &RasterGrid) -> f64 {
    g.area()
}

/// 1-D squared distance transform of `f` (lower envelope of parabolas).
fn edt_1d(f: &mut [f64], v: &mut [usize], z: &mut [f64], d: &mut [f64]) {
    let n = f.len();
    if n == 0 {
        return;
    }
    let mut k = 0usize;
    let mut first = None;
    for (q, &fq) in f.iter().enumerate() {
        if fq.is_finite() {
            first = Some(q);
            break;
        }
    }
    let Some(q0) = first else { return };
    v[0] = q0;
    z[0] = f64::NEG_INFINITY;
    z[1] = f64::INFINITY;
    for q in q0 + 1..n {
        if !f[q].is_finite() {
            continue;
        }
        loop {
            let p = v[k];
            let s = ((f[q] + (q * q) as f64) - (f[p] + (p * p) as f64)) / (2.0 * (q as f64 - p as f64));
            if s <= z[k] && k > 0 {
                k -= 1;
            } else {
                k += 1;
                v[k] = q;
                z[k] = s;
                z[k + 1] = f64::INFINITY;
                break;
            }
        }
    }
    let mut k = 0usize;
    for (q, dq) in d.iter_mut().enumerate().take(n) {
        while z[k + 1] < q as f64 {
            k += 1;
        }
        let p = v[k];
        let dx = q as f64 - p as f64;
        *dq = dx * dx + f[p];
    }
    f.copy_from_slice(&d[..n]);
}

/// Squared distance, in cells, from every cell to the nearest feature cell.
fn squared_edt(features: &[bool], width: usize, height: usize) -> Vec<f64> {
    let transform = |lines: &mut [f64], len: usize| {
        lines.par_chunks_mut(len).for_each_init(
            || (vec![0usize; len], vec![0.0; len + 1], vec![0.0; len]),
            |(v, z, d), line| edt_1d(line, v, z, d),
        );
    };
    // Columns first, stored transposed so that each column is contiguous.
    let mut cols = vec![f64::INFINITY; width * height];
    for j in 0..height {
        for i in 0..width {
            if features[j * width + i] {
                cols[i * height + j] = 0.0;
            }
        }
    }
    transform(&mut cols, height);
    let mut rows = vec![0.0; width * height];
    for j in 0..height {
        for i in 0..width {
            rows[j * width + i] = cols[i * height + j];
        }
    }
    transform(&mut rows, width);
    rows
}

/// Cells within distance `r` of an occupied cell center.
pub fn raster_dilate(g: &RasterGrid, r: f64) -> RasterGrid {
    let pad = (r / g.h).ceil() as usize + 2;
    let mut out = g.padded(pad);
    let dist = squared_edt(&out.cells, out.width, out.height);
    let lim = (r / g.h).powi(2);
    out.cells.iter_mut().zip(&dist).for_each(|(c, &d)| *c = d <= lim);
    out
}

/// Cells farther than `r` from every unoccupied cell center; the outside of
/// the grid counts as unoccupied.
pub fn raster_erode(g: &RasterGrid, r: f64) -> RasterGrid {
    let mut out = g.padded(1);
    let free: Vec<bool> = out.cells.iter().map(|&c| !c).collect();
    let dist = squared_edt(&free, out.width, out.height);
    let lim = (r / g.h).powi(2);
    out.cells.iter_mut().zip(&dist).for_each(|(c, &d)| *c = d > lim);
    out
}

pub fn raster_opening(g: &RasterGrid, rho: f64) -> RasterGrid {
    raster_dilate(&raster_erode(g, rho), rho)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::ConvexPolygon;
    use std::f64::consts::PI;

    fn square() -> RoundedSet {
        RoundedSet::polygon(ConvexPolygon::rectangle(0.0, 0.0, 1.0, 1.0))
    }

    #[test]
    fn rasterize_examples() {
        let g = rasterize(&RoundedSet::ball(Point2::ORIGIN, 1.0), 1e-2);
        assert!((g.area() - PI).abs() <= 4.0 * 1e-2 * 2.0 * PI);
        let g = rasterize(&square(), 1e-3);
        assert!((g.area() - 1.0).abs() <= 4e-3 * 4.0);
        assert_eq!(rasterize(&RoundedSet::empty(), 1e-2).count(), 0);
    }

    #[test]
    fn margin_is_empty() {
        let g = rasterize(&square(), 0.05);
        for i in 0..g.width() {
            for j in [0, 1, g.height() - 2, g.height() - 1] {
                assert!(!g.get(i, j));
            }
        }
    }

    #[test]
    fn area_examples() {
        let full = RasterGrid::from_fn(Point2::ORIGIN, 0.1, 10, 10, |_| true);
        assert!((full.area() - 1.0).abs() < 1e-12);
        assert_eq!(RasterGrid::empty(0.1).area(), 0.0);
        let half = RasterGrid::from_fn(Point2::ORIGIN, 1e-3, 1000, 1000, |p| p.x <= 0.5);
        assert!((half.area() - 0.5).abs() <= 1e-3);
    }

    #[test]
    fn edt_matches_brute_force() {
        let g = RasterGrid::from_fn(Point2::ORIGIN, 1.0, 23, 17, |p| (p.x * 7.3 + p.y * 3.1).sin() > 0.95);
        let d = squared_edt(&g.cells, g.width, g.height);
        for j in 0..g.height {
            for i in 0..g.width {
                let mut best = f64::INFINITY;
                for q in 0..g.height {
                    for p in 0..g.width {
                        if g.get(p, q) {
                            best = best.min(((i as f64 - p as f64).powi(2)) + (j as f64 - q as f64).powi(2));
                        }
                    }
                }
                assert_eq!(d[j * g.width + i], best);
            }
        }
    }

    #[test]
    fn morphology_examples() {
        let h = 1e-3;
        let g = rasterize(&square(), h);
        let band = 5.0 * h;
        let d = raster_dilate(&g, 0.5);
        assert!((d.area() - (3.0 + PI * 0.25)).abs() <= band * (4.0 + PI));
        let e = raster_erode(&g, 0.2);
        assert!((e.area() - 0.36).abs() <= band * 2.4);
        let o = raster_opening(&g, 0.3);
        let exact = 1.0 - (4.0 - PI) * 0.09;
        assert!((o.area() - exact).abs() <= band * (1.6 + 0.6 * PI));
    }

    #[test]
    fn discrete_duality() {
        let s = RoundedSet::new(ConvexPolygon::regular(5, Point2::ORIGIN, 1.0, 0.2), 0.1).unwrap();
        let h = 0.01;
        let g = rasterize(&s, h);
        let back = raster_erode(&raster_dilate(&g, 0.3), 0.3);
        let pad = (back.width - g.width) / 2;
        for j in 0..g.height {
            for i in 0..g.width {
                if g.get(i, j) {
                    assert!(back.get(i + pad, j + pad));
                }
            }
        }
    }

    #[test]
    fn pgm_layout() {
        let g = RasterGrid::from_fn(Point2::ORIGIN, 1.0, 3, 2, |p| p.y < 1.0 && p.x < 1.0);
        let mut buf = Vec::new();
        g.write_pgm(&mut buf).unwrap();
        assert_eq!(&buf[..11], b"P5\n3 2\n255\n");
        assert_eq!(&buf[11..], &[0, 0, 0, 255, 0, 0]);
    }
}
