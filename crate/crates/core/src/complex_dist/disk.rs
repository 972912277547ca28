use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::ComplexValue;
use crate::geometry::orient;

/// Shuffle seed for the randomized incremental algorithm; fixed so that the
/// returned disk is reproducible bit for bit.
const SHUFFLE_SEED: u64 = 0x5eed_d15c;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Disk {
    pub center: ComplexValue,
    pub radius: f64,
}

impl Disk {
    fn from_point(p: ComplexValue) -> Self {
        Self { center: p, radius: 0.0 }
    }

    fn from_two(a: ComplexValue, b: ComplexValue) -> Self {
        let center = (a + b) * 0.5;
        Self { center, radius: (a - center).norm().max((b - center).norm()) }
    }

    fn from_three(a: ComplexValue, b: ComplexValue, c: ComplexValue) -> Self {
        let d = 2.0 * orient(a, b, c);
        if d == 0.0 {
            // collinear: the farthest pair spans the disk
            let cands = [Self::from_two(a, b), Self::from_two(a, c), Self::from_two(b, c)];
            return cands
                .into_iter()
                .max_by(|x, y| x.radius.total_cmp(&y.radius))
                .unwrap();
        }
        let (ba, ca) = (b - a, c - a);
        let (bb, cc) = (ba.norm_sqr(), ca.norm_sqr());
        let ux = (ca.im * bb - ba.im * cc) / d;
        let uy = (ba.re * cc - ca.re * bb) / d;
        let center = a + ComplexValue::new(ux, uy);
        let radius = (a - center).norm().max((b - center).norm()).max((c - center).norm());
        Self { center, radius }
    }

    pub fn contains(&self, p: ComplexValue) -> bool {
        (p - self.center).norm() <= self.radius * (1.0 + 1e-14) + 1e-300
    }
}

/// Smallest enclosing disk by the move-to-front randomized incremental
/// algorithm (expected linear time). `None` for an empty slice.
pub fn enclosing_disk_of(points: &[ComplexValue]) -> Option<Disk> {
    let mut pts = points.to_vec();
    if pts.is_empty() {
        return None;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(SHUFFLE_SEED);
    pts.shuffle(&mut rng);
    let mut disk = Disk::from_point(pts[0]);
    for i in 1..pts.len() {
        if disk.contains(pts[i]) {
            continue;
        }
        disk = Disk::from_point(pts[i]);
        for j in 0..i {
            if disk.contains(pts[j]) {
                continue;
            }
            disk = Disk::from_two(pts[i], pts[j]);
            for k in 0..j {
                if !disk.contains(pts[k]) {
                    disk = Disk::from_three(pts[i], pts[j], pts[k]);
                }
            }
        }
    }
    Some(disk)
}
