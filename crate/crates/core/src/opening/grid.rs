//! Raster oracle for openings: exact Euclidean distance transforms and a
//! marching-squares contour of the opened set.
//!
//! Pixel centers sit at `origin + (i + ½, j + ½)·h`. Distances are measured
//! between pixel centers, so a pixel adjacent to the complement is at
//! distance `h` from it while the true boundary lies about `h/2` away; the
//! fields below subtract that half pixel.

use std::io::{BufRead, BufReader, Read, Write};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::geometry::{ArcPolygon, Edge, Point};

/// Boolean raster with square pixels of side `pixel`.
#[derive(Clone, Debug, PartialEq)]
pub struct Raster {
    pub nx: usize,
    pub ny: usize,
    pub origin: Point,
    pub pixel: f64,
    pub data: Vec<bool>,
}

impl Raster {
    pub fn get(&self, i: usize, j: usize) -> bool {
        self.data[j * self.nx + i]
    }

    pub fn center(&self, i: usize, j: usize) -> Point {
        self.origin + Point::new((i as f64 + 0.5) * self.pixel, (j as f64 + 0.5) * self.pixel)
    }

    pub fn count(&self) -> usize {
        self.data.iter().filter(|&&b| b).count()
    }

    /// Rasterize `shape` with `resolution` pixels across the longer side of
    /// its bounding box. Pixels are set when their center is inside (even-odd
    /// rule); slit edges are then cleared as one-pixel-wide cuts.
    pub fn from_arcpolygon(shape: &ArcPolygon, resolution: usize) -> Result<Raster> {
        if resolution < 8 {
            return invalid(format!("raster resolution {resolution} is too small"));
        }
        let (lo, hi) = shape.bbox();
        let h = (hi.x - lo.x).max(hi.y - lo.y) / resolution as f64;
        let pad = 4usize;
        let nx = ((hi.x - lo.x) / h).ceil() as usize + 2 * pad;
        let ny = ((hi.y - lo.y) / h).ceil() as usize + 2 * pad;
        let origin = lo - Point::new(pad as f64 * h, pad as f64 * h);
        let rings = shape.polygonize_rings(1e-3 * h);

        // Crossings of each ring edge with the pixel-center rows.
        let mut rows: Vec<Vec<f64>> = vec![Vec::new(); ny];
        for ring in &rings {
            let n = ring.len();
            for k in 0..n {
                let a = ring[k];
                let b = ring[(k + 1) % n];
                if a.y == b.y {
                    continue;
                }
                let (ylo, yhi) = if a.y < b.y { (a.y, b.y) } else { (b.y, a.y) };
                // Half-open rule on the row centers: ylo ≤ y < yhi.
                let j0 = ((ylo - origin.y) / h - 0.5).ceil().max(0.0) as usize;
                let j1 = ((yhi - origin.y) / h - 0.5).ceil().max(0.0) as usize;
                for (j, row) in rows.iter_mut().enumerate().take(j1.min(ny)).skip(j0) {
                    let y = origin.y + (j as f64 + 0.5) * h;
                    if y < ylo || y >= yhi {
                        continue;
                    }
                    row.push(a.x + (y - a.y) / (b.y - a.y) * (b.x - a.x));
                }
            }
        }
        let mut data = vec![false; nx * ny];
        data.par_chunks_mut(nx).zip(rows.par_iter_mut()).for_each(|(line, xs)| {
            xs.sort_by(f64::total_cmp);
            for pair in xs.chunks_exact(2) {
                let i0 = ((pair[0] - origin.x) / h - 0.5).ceil().max(0.0) as usize;
                let i1 = ((pair[1] - origin.x) / h - 0.5).ceil().max(0.0) as usize;
                for cell in line.iter_mut().take(i1.min(nx)).skip(i0) {
                    *cell = true;
                }
            }
        });
        let mut raster = Raster { nx, ny, origin, pixel: h, data };
        raster.cut_slits(shape);
        Ok(raster)
    }

    fn cut_slits(&mut self, shape: &ArcPolygon) {
        let edges: Vec<&Edge> = shape.all_edges().collect();
        let tol = 1e-9 * shape.diameter();
        for (i, e) in edges.iter().enumerate() {
            for f in &edges[i + 1..] {
                if let (Edge::Segment { start, end, .. }, true) = (**e, is_slit(e, f, tol)) {
                    let len = start.dist(end);
                    let steps = (4.0 * len / self.pixel).ceil() as usize;
                    for k in 0..=steps {
                        let p = start.lerp(end, k as f64 / steps as f64);
                        let ix = ((p.x - self.origin.x) / self.pixel).floor();
                        let iy = ((p.y - self.origin.y) / self.pixel).floor();
                        if ix >= 0.0 && iy >= 0.0 && (ix as usize) < self.nx && (iy as usize) < self.ny {
                            self.data[iy as usize * self.nx + ix as usize] = false;
                        }
                    }
                }
            }
        }
    }

    /// Binary PGM (P5), 255 inside and 0 outside. Row 0 of the file is the
    /// top of the raster. The pixel size and origin are stored in a comment.
    pub fn write_pgm(&self, mut w: impl Write) -> std::io::Result<()> {
        writeln!(w, "P5")?;
        writeln!(w, "# pixel {} origin {} {}", self.pixel, self.origin.x, self.origin.y)?;
        writeln!(w, "{} {}", self.nx, self.ny)?;
        writeln!(w, "255")?;
        let mut buf = Vec::with_capacity(self.nx * self.ny);
        for j in (0..self.ny).rev() {
            buf.extend((0..self.nx).map(|i| if self.get(i, j) { 255u8 } else { 0 }));
        }
        w.write_all(&buf)
    }

    /// Read a binary PGM; pixels above half the maximum value are inside.
    /// Pixel size and origin default to 1 and (0, 0) when the comment written
    /// by [`Raster::write_pgm`] is absent.
    pub fn read_pgm(r: impl Read) -> Result<Raster> {
        let mut reader = BufReader::new(r);
        let mut tokens: Vec<String> = Vec::new();
        let mut pixel = 1.0;
        let mut origin = Point::ORIGIN;
        let mut line = String::new();
        while tokens.len() < 4 {
            line.clear();
            if reader.read_line(&mut line).map_err(io_err)? == 0 {
                return invalid("truncated PGM header");
            }
            let trimmed = line.trim();
            if let Some(comment) = trimmed.strip_prefix('#') {
                let parts: Vec<&str> = comment.split_whitespace().collect();
                if let ["pixel", p, "origin", x, y] = parts.as_slice() {
                    pixel = p.parse().map_err(|_| Error::Validation("bad pixel size".into()))?;
                    origin = Point::new(
                        x.parse().map_err(|_| Error::Validation("bad origin".into()))?,
                        y.parse().map_err(|_| Error::Validation("bad origin".into()))?,
                    );
                }
                continue;
            }
            tokens.extend(trimmed.split_whitespace().map(str::to_owned));
        }
        if tokens[0] != "P5" {
            return invalid("only binary PGM (P5) is supported");
        }
        let parse = |s: &str| s.parse::<usize>().map_err(|_| Error::Validation(format!("bad PGM header field {s}")));
        let (nx, ny, maxval) = (parse(&tokens[1])?, parse(&tokens[2])?, parse(&tokens[3])?);
        if maxval == 0 || maxval > 255 {
            return invalid("PGM maxval must be in 1..=255");
        }
        let mut buf = vec![0u8; nx * ny];
        reader.read_exact(&mut buf).map_err(io_err)?;
        let mut data = vec![false; nx * ny];
        for j in 0..ny {
            for i in 0..nx {
                data[j * nx + i] = 2 * buf[(ny - 1 - j) * nx + i] as usize > maxval;
            }
        }
        Ok(Raster { nx, ny, origin, pixel, data })
    }
}

fn io_err(e: std::io::Error) -> Error {
    Error::Validation(format!("I/O error: {e}"))
}

fn is_slit(e: &Edge, f: &Edge, tol: f64) -> bool {
    match (*e, *f) {
        (Edge::Segment { start: a0, end: a1, .. }, Edge::Segment { start: b0, end: b1, .. }) => {
            a0.dist(b1) <= tol && a1.dist(b0) <= tol
        }
        _ => false,
    }
}

/// Squared Euclidean distance (in pixels²) from every pixel to the nearest
/// pixel where `feature` holds; `f32::INFINITY` when there is none.
/// Felzenszwalb–Huttenlocher lower-envelope transform, rows then columns.
pub fn edt_squared(nx: usize, ny: usize, feature: impl Fn(usize) -> bool + Sync) -> Vec<f32> {
    let mut rows = vec![0f32; nx * ny];
    rows.par_chunks_mut(nx).enumerate().for_each_init(
        || Scratch::new(nx.max(ny)),
        |s, (j, out)| {
            let f: Vec<f64> = (0..nx).map(|i| if feature(j * nx + i) { 0.0 } else { f64::INFINITY }).collect();
            transform_1d(&f, out, s);
        },
    );
    let mut cols = vec![0f32; nx * ny];
    cols.par_chunks_mut(ny).enumerate().for_each_init(
        || Scratch::new(nx.max(ny)),
        |s, (i, out)| {
            let f: Vec<f64> = (0..ny).map(|j| rows[j * nx + i] as f64).collect();
            transform_1d(&f, out, s);
        },
    );
    // Transpose back to row-major.
    rows.par_chunks_mut(nx).enumerate().for_each(|(j, line)| {
        for (i, v) in line.iter_mut().enumerate() {
            *v = cols[i * ny + j];
        }
    });
    rows
}

struct Scratch {
    v: Vec<usize>,
    z: Vec<f64>,
}

impl Scratch {
    fn new(n: usize) -> Self {
        Scratch { v: vec![0; n], z: vec![0.0; n + 1] }
    }
}

/// One-dimensional squared distance transform of the sampled function `f`.
fn transform_1d(f: &[f64], out: &mut [f32], s: &mut Scratch) {
    let n = f.len();
    let mut k: isize = -1;
    for q in 0..n {
        if !f[q].is_finite() {
            continue;
        }
        let fq = f[q] + (q * q) as f64;
        loop {
            if k < 0 {
                k = 0;
                s.v[0] = q;
                s.z[0] = f64::NEG_INFINITY;
                s.z[1] = f64::INFINITY;
                break;
            }
            let p = s.v[k as usize];
            let sect = (fq - (f[p] + (p * p) as f64)) / (2.0 * (q as f64 - p as f64));
            if sect <= s.z[k as usize] {
                k -= 1;
            } else {
                k += 1;
                s.v[k as usize] = q;
                s.z[k as usize] = sect;
                s.z[k as usize + 1] = f64::INFINITY;
                break;
            }
        }
    }
    if k < 0 {
        out.iter_mut().for_each(|o| *o = f32::INFINITY);
        return;
    }
    let mut idx = 0usize;
    for (q, o) in out.iter_mut().enumerate() {
        while s.z[idx + 1] < q as f64 {
            idx += 1;
        }
        let p = s.v[idx];
        let d = q as f64 - p as f64;
        *o = (d * d + f[p]) as f32;
    }
}

/// Perimeter and area of a raster opening.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridMetrics {
    pub perimeter: f64,
    pub area: f64,
    pub pixel: f64,
}

impl GridMetrics {
    pub fn quotient(&self) -> f64 {
        self.perimeter / self.area
    }
}

/// A rasterized domain with its interior distance field, reusable across
/// opening radii.
#[derive(Clone, Debug)]
pub struct GridDomain {
    raster: Raster,
    /// Distance (length units) from each pixel center to the nearest
    /// outside pixel center.
    depth: Vec<f32>,
}

impl GridDomain {
    pub fn new(raster: Raster) -> Self {
        let data = &raster.data;
        let depth = edt_squared(raster.nx, raster.ny, |k| !data[k])
            .into_par_iter()
            .map(|d2| d2.sqrt() * raster.pixel as f32)
            .collect();
        GridDomain { raster, depth }
    }

    pub fn from_arcpolygon(shape: &ArcPolygon, resolution: usize) -> Result<Self> {
        Ok(GridDomain::new(Raster::from_arcpolygon(shape, resolution)?))
    }

    pub fn raster(&self) -> &Raster {
        &self.raster
    }

    /// Opening by the disc of radius `r`, or `None` when the erosion is empty.
    ///
    /// The eroded set is `{depth − h/2 > r}`; the opened set is the
    /// sublevel set `{D_E − h/2 − r < 0}` of the distance `D_E` to the
    /// eroded pixels, contoured by marching squares.
    pub fn opening(&self, r: f64) -> Option<GridMetrics> {
        let h = self.raster.pixel;
        let (nx, ny) = (self.raster.nx, self.raster.ny);
        let thresh = (r + 0.5 * h) as f32;
        let depth = &self.depth;
        if !depth.par_iter().any(|&d| d > thresh) {
            return None;
        }
        let d_e = edt_squared(nx, ny, |k| depth[k] > thresh);
        let psi: Vec<f32> = d_e.into_par_iter().map(|d2| d2.sqrt() * h as f32 - thresh).collect();
        let (perimeter, area) = marching_squares(&psi, nx, ny, h);
        Some(GridMetrics { perimeter, area, pixel: h })
    }
}

/// Opening of a raster mask by the disc of radius `r`.
pub fn grid_opening(mask: &Raster, r: f64) -> Option<GridMetrics> {
    GridDomain::new(mask.clone()).opening(r)
}

/// Length of the zero contour and area of the negative region of a field
/// sampled at pixel centers, with bilinear-free linear interpolation along
/// cell edges. Saddle cells are resolved by the cell-center average.
pub fn marching_squares(psi: &[f32], nx: usize, ny: usize, h: f64) -> (f64, f64) {
    let per_row: Vec<(f64, f64)> = (0..ny.saturating_sub(1))
        .into_par_iter()
        .map(|j| {
            let mut p = 0.0;
            let mut a = 0.0;
            for i in 0..nx - 1 {
                let v = [
                    psi[j * nx + i] as f64,
                    psi[j * nx + i + 1] as f64,
                    psi[(j + 1) * nx + i + 1] as f64,
                    psi[(j + 1) * nx + i] as f64,
                ];
                let (cp, ca) = cell(v);
                p += cp;
                a += ca;
            }
            (p, a)
        })
        .collect();
    let (p, a) = per_row.iter().fold((0.0, 0.0), |acc, x| (acc.0 + x.0, acc.1 + x.1));
    (p * h, a * h * h)
}

/// Contour length and inside area of a unit cell with corner values in
/// counterclockwise order (0,0), (1,0), (1,1), (0,1).
fn cell(v: [f64; 4]) -> (f64, f64) {
    const C: [(f64, f64); 4] = [(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0)];
    let inside = v.map(|x| x < 0.0);
    let count = inside.iter().filter(|&&b| b).count();
    if count == 0 {
        return (0.0, 0.0);
    }
    if count == 4 {
        return (0.0, 1.0);
    }
    let cross = |k: usize| {
        let l = (k + 1) % 4;
        let t = v[k] / (v[k] - v[l]);
        Point::new(C[k].0 + t * (C[l].0 - C[k].0), C[k].1 + t * (C[l].1 - C[k].1))
    };
    let corner = |k: usize| Point::new(C[k].0, C[k].1);
    let saddle = count == 2 && inside[0] == inside[2];
    if saddle {
        let center_inside = (v[0] + v[1] + v[2] + v[3]) / 4.0 < 0.0;
        // Crossing k lies on the edge from corner k to corner k+1.
        let x: Vec<Point> = (0..4).map(cross).collect();
        // Triangles cut off at the corners of one sign.
        let tri = |k: usize| {
            let prev = x[(k + 3) % 4];
            let next = x[k];
            (next.dist(prev), 0.5 * ((next - corner(k)).cross(prev - corner(k))).abs())
        };
        let (k1, k2) = if inside[0] { (0, 2) } else { (1, 3) };
        let (o1, o2) = if inside[0] { (1, 3) } else { (0, 2) };
        if center_inside {
            let (l1, a1) = tri(o1);
            let (l2, a2) = tri(o2);
            return (l1 + l2, 1.0 - a1 - a2);
        }
        let (l1, a1) = tri(k1);
        let (l2, a2) = tri(k2);
        return (l1 + l2, a1 + a2);
    }
    let mut poly = Vec::with_capacity(6);
    let mut xs = Vec::with_capacity(2);
    for k in 0..4 {
        if inside[k] {
            poly.push(corner(k));
        }
        if inside[k] != inside[(k + 1) % 4] {
            let p = cross(k);
            poly.push(p);
            xs.push(p);
        }
    }
    let area = crate::geometry::point::signed_area(&poly).abs();
    (xs[0].dist(xs[1]), area)
}
