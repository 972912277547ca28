//! Occupancy rasters and contour extraction.

use std::collections::HashMap;

use crate::complex_dist::ComplexValue;
use crate::geometry::signed_area;

/// Square-cell occupancy grid with an empty one-cell border.
#[derive(Debug, Clone, PartialEq)]
pub struct Raster {
    origin: ComplexValue,
    cell: f64,
    nx: usize,
    ny: usize,
    occupied: Vec<bool>,
}

impl Raster {
    /// Grid over the bounding box of `points` with `resolution` cells along
    /// its longer side. Returns `None` for an empty or non-finite input.
    pub fn from_points(points: &[ComplexValue], resolution: usize) -> Option<Self> {
        let (mut lo, mut hi) = (ComplexValue::new(f64::INFINITY, f64::INFINITY), ComplexValue::new(f64::NEG_INFINITY, f64::NEG_INFINITY));
        for p in points {
            lo = ComplexValue::new(lo.re.min(p.re), lo.im.min(p.im));
            hi = ComplexValue::new(hi.re.max(p.re), hi.im.max(p.im));
        }
        if points.is_empty() || !(lo.re.is_finite() && hi.re.is_finite() && lo.im.is_finite() && hi.im.is_finite()) {
            return None;
        }
        let resolution = resolution.max(1);
        let span = (hi.re - lo.re).max(hi.im - lo.im);
        let cell = if span > 0.0 { span / resolution as f64 } else { 1.0 };
        let nx = ((hi.re - lo.re) / cell).floor() as usize + 3;
        let ny = ((hi.im - lo.im) / cell).floor() as usize + 3;
        let origin = lo - ComplexValue::new(cell, cell);
        let mut r = Self { origin, cell, nx, ny, occupied: vec![false; nx * ny] };
        for &p in points {
            let (i, j) = r.cell_of(p);
            let k = j * nx + i;
            r.occupied[k] = true;
        }
        Some(r)
    }

    /// Cell index of `p`, clamped to the interior of the grid.
    pub fn cell_of(&self, p: ComplexValue) -> (usize, usize) {
        let fx = ((p.re - self.origin.re) / self.cell).floor();
        let fy = ((p.im - self.origin.im) / self.cell).floor();
        (fx.clamp(1.0, (self.nx - 2) as f64) as usize, fy.clamp(1.0, (self.ny - 2) as f64) as usize)
    }

    /// Whether `p` falls inside the grid and its cell, or any cell within
    /// `margin` cells of it, is occupied.
    pub fn occupied_near(&self, p: ComplexValue, margin: usize) -> bool {
        let fx = ((p.re - self.origin.re) / self.cell).floor();
        let fy = ((p.im - self.origin.im) / self.cell).floor();
        let m = margin as f64;
        if fx < -m || fy < -m || fx >= self.nx as f64 + m || fy >= self.ny as f64 + m {
            return false;
        }
        let (fx, fy) = (fx as i64, fy as i64);
        let m = margin as i64;
        for j in (fy - m).max(0)..=(fy + m).min(self.ny as i64 - 1) {
            for i in (fx - m).max(0)..=(fx + m).min(self.nx as i64 - 1) {
                if self.occupied[j as usize * self.nx + i as usize] {
                    return true;
                }
            }
        }
        false
    }

    pub fn cell_size(&self) -> f64 {
        self.cell
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.nx, self.ny)
    }

    pub fn is_occupied(&self, i: usize, j: usize) -> bool {
        self.occupied[j * self.nx + i]
    }

    pub fn occupied_count(&self) -> usize {
        self.occupied.iter().filter(|&&o| o).count()
    }

    pub fn center(&self, i: usize, j: usize) -> ComplexValue {
        self.origin + ComplexValue::new((i as f64 + 0.5) * self.cell, (j as f64 + 0.5) * self.cell)
    }

    /// Morphological closing with a `(2 radius + 1)`-cell square: bridges
    /// gaps up to that width between occupied cells while leaving wider
    /// concavities in place. The border ring stays empty.
    pub fn close(&mut self, radius: usize) {
        if radius == 0 {
            return;
        }
        self.occupied = self.filter(&self.occupied, radius, true);
        self.occupied = self.filter(&self.occupied, radius, false);
        let (nx, ny) = (self.nx, self.ny);
        for i in 0..nx {
            self.occupied[i] = false;
            self.occupied[(ny - 1) * nx + i] = false;
        }
        for j in 0..ny {
            self.occupied[j * nx] = false;
            self.occupied[j * nx + nx - 1] = false;
        }
    }

    /// Separable square dilation (`grow`) or erosion; cells beyond the grid
    /// count as empty for dilation and as occupied for erosion.
    fn filter(&self, src: &[bool], radius: usize, grow: bool) -> Vec<bool> {
        let (nx, ny) = (self.nx, self.ny);
        let pass = |src: &[bool], horizontal: bool| -> Vec<bool> {
            let mut out = vec![false; nx * ny];
            for j in 0..ny {
                for i in 0..nx {
                    let (pos, len) = if horizontal { (i, nx) } else { (j, ny) };
                    let lo = pos.saturating_sub(radius);
                    let hi = (pos + radius).min(len - 1);
                    let at = |q: usize| if horizontal { src[j * nx + q] } else { src[q * nx + i] };
                    out[j * nx + i] = if grow {
                        (lo..=hi).any(at)
                    } else {
                        (lo..=hi).all(at)
                    };
                }
            }
            out
        };
        let h = pass(src, true);
        pass(&h, false)
    }

    /// Mark every empty cell not 4-connected to the border as occupied.
    pub fn fill_holes(&mut self) {
        let (nx, ny) = (self.nx, self.ny);
        let mut outside = vec![false; nx * ny];
        let mut stack = vec![0usize];
        outside[0] = true;
        while let Some(k) = stack.pop() {
            let (i, j) = (k % nx, k / nx);
            let mut push = |ii: usize, jj: usize| {
                let kk = jj * nx + ii;
                if !self.occupied[kk] && !outside[kk] {
                    outside[kk] = true;
                    stack.push(kk);
                }
            };
            if i > 0 {
                push(i - 1, j);
            }
            if i + 1 < nx {
                push(i + 1, j);
            }
            if j > 0 {
                push(i, j - 1);
            }
            if j + 1 < ny {
                push(i, j + 1);
            }
        }
        for (o, out) in self.occupied.iter_mut().zip(outside) {
            *o = !out;
        }
    }

    /// Marching squares on the cell-center lattice. Each loop keeps the
    /// occupied side on its left, so outer boundaries run counterclockwise.
    /// Loops are closed (first vertex repeated) and sorted by decreasing
    /// area.
    pub fn contours(&self) -> Vec<Vec<ComplexValue>> {
        // edge midpoints in doubled lattice coordinates
        type Key = (i64, i64);
        let mut next: HashMap<Key, Key> = HashMap::new();
        for j in 0..self.ny - 1 {
            for i in 0..self.nx - 1 {
                let bl = self.is_occupied(i, j) as u8;
                let br = self.is_occupied(i + 1, j) as u8;
                let tr = self.is_occupied(i + 1, j + 1) as u8;
                let tl = self.is_occupied(i, j + 1) as u8;
                let case = bl | br << 1 | tr << 2 | tl << 3;
                let (x, y) = (2 * i as i64, 2 * j as i64);
                let bottom = (x + 1, y);
                let right = (x + 2, y + 1);
                let top = (x + 1, y + 2);
                let left = (x, y + 1);
                let segs: &[(Key, Key)] = match case {
                    1 => &[(bottom, left)],
                    2 => &[(right, bottom)],
                    3 => &[(right, left)],
                    4 => &[(top, right)],
                    5 => &[(bottom, left), (top, right)],
                    6 => &[(top, bottom)],
                    7 => &[(top, left)],
                    8 => &[(left, top)],
                    9 => &[(bottom, top)],
                    10 => &[(right, bottom), (left, top)],
                    11 => &[(right, top)],
                    12 => &[(left, right)],
                    13 => &[(bottom, right)],
                    14 => &[(left, bottom)],
                    _ => &[],
                };
                for &(a, b) in segs {
                    next.insert(a, b);
                }
            }
        }
        let mut starts: Vec<Key> = next.keys().copied().collect();
        starts.sort_unstable();
        let mut loops = Vec::new();
        for s in starts {
            if !next.contains_key(&s) {
                continue;
            }
            let mut chain = vec![s];
            let mut cur = s;
            while let Some(n) = next.remove(&cur) {
                if n == s {
                    break;
                }
                chain.push(n);
                cur = n;
            }
            let mut poly: Vec<ComplexValue> = chain
                .iter()
                .map(|&(x, y)| {
                    self.origin + ComplexValue::new((x as f64 * 0.5 + 0.5) * self.cell, (y as f64 * 0.5 + 0.5) * self.cell)
                })
                .collect();
            poly.push(poly[0]);
            loops.push(poly);
        }
        loops.sort_by(|a, b| signed_area(b).abs().total_cmp(&signed_area(a).abs()).then_with(|| {
            let (pa, pb) = (a[0], b[0]);
            pa.re.total_cmp(&pb.re).then(pa.im.total_cmp(&pb.im))
        }));
        loops
    }
}
