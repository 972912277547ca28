//! The boundary panels for `d = 2, 3, 4, 5` in both classes and the shape
//! checks run on them.

use crate::bounds::g_function;
use crate::geometry::{distance_to_boundary, point_in_polygon};
use crate::{exec, Result};

use super::{convexity_report, sample_region, trace_boundary, BoundaryCurve, ConvexityReport, FamilyClass};

pub const FIGURE_DIAMETERS: [f64; 4] = [2.0, 3.0, 4.0, 5.0];

#[derive(Debug, Clone, PartialEq)]
pub struct Panel {
    pub class: FamilyClass,
    pub d: f64,
    /// Largest first.
    pub curves: Vec<BoundaryCurve>,
}

impl Panel {
    pub fn file_name(&self) -> String {
        format!("boundary_class{}_d{}.csv", self.class.points(), self.d)
    }

    pub fn outer(&self) -> &BoundaryCurve {
        &self.curves[0]
    }
}

/// Trace all eight panels from clouds of `samples` points on a `grid`
/// raster.
pub fn figure_panels(samples: usize, grid: usize, seed: u64) -> Result<Vec<Panel>> {
    let mut out = Vec::new();
    for class in [FamilyClass::TwoPoint, FamilyClass::ThreePoint] {
        for d in FIGURE_DIAMETERS {
            let cloud = sample_region(d, class, samples, seed)?;
            out.push(Panel { class, d, curves: trace_boundary(&cloud, grid)? });
        }
    }
    Ok(out)
}

/// Vertices of `inner` outside the polygon `outer` by more than `margin`.
pub fn vertices_outside(inner: &BoundaryCurve, outer: &BoundaryCurve, margin: f64) -> usize {
    let poly = &outer.vertices[..outer.vertices.len() - 1];
    let flags = exec::map_slice(&inner.vertices, |&v| !point_in_polygon(v, poly) && distance_to_boundary(v, poly) > margin);
    flags.into_iter().filter(|&f| f).count()
}

#[derive(Debug, Clone, PartialEq)]
pub struct PanelCheck {
    pub class: FamilyClass,
    pub d: f64,
    pub curves: usize,
    pub all_closed: bool,
    pub max_distance_from_one: f64,
    /// `G(d)`, reported for the two-point class.
    pub g: f64,
    pub cell_size: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FigureChecks {
    pub panels: Vec<PanelCheck>,
    /// `(inner, outer, vertices outside by more than 2 cells)` for each
    /// consecutive diameter within a class and for two-point inside
    /// three-point at equal diameter, on outer curves.
    pub nesting: Vec<(String, String, usize)>,
}

impl FigureChecks {
    pub fn nested(&self) -> bool {
        self.nesting.iter().all(|n| n.2 == 0)
    }

    /// Largest `| max |v - 1| - G(d) |` over two-point panels, in cells.
    pub fn two_point_g_error_cells(&self) -> f64 {
        self.panels
            .iter()
            .filter(|p| p.class == FamilyClass::TwoPoint)
            .map(|p| (p.max_distance_from_one - p.g).abs() / p.cell_size)
            .fold(0.0, f64::max)
    }
}

fn label(p: &Panel) -> String {
    format!("class{} d={}", p.class.points(), p.d)
}

pub fn figure_checks(panels: &[Panel]) -> Result<FigureChecks> {
    let mut checks = Vec::new();
    for p in panels {
        let o = p.outer();
        checks.push(PanelCheck {
            class: p.class,
            d: p.d,
            curves: p.curves.len(),
            all_closed: p.curves.iter().all(|c| c.is_closed() && c.area() > 0.0),
            max_distance_from_one: o.max_distance_from_one(),
            g: g_function(p.d)?,
            cell_size: o.cell_size,
        });
    }
    let mut nesting = Vec::new();
    for a in panels {
        for b in panels {
            let consecutive = a.class == b.class && b.d > a.d && FIGURE_DIAMETERS.iter().all(|&d| d <= a.d || d >= b.d);
            let across = a.class == FamilyClass::TwoPoint && b.class == FamilyClass::ThreePoint && a.d == b.d;
            if consecutive || across {
                let margin = 2.0 * a.outer().cell_size.max(b.outer().cell_size);
                nesting.push((label(a), label(b), vertices_outside(a.outer(), b.outer(), margin)));
            }
        }
    }
    Ok(FigureChecks { panels: checks, nesting })
}

/// Dense-cloud convexity diagnostics of the three-point region at `d`.
pub fn three_point_convexity(d: f64, samples: usize, grid: usize, seed: u64) -> Result<ConvexityReport> {
    let cloud = sample_region(d, FamilyClass::ThreePoint, samples, seed)?;
    convexity_report(&cloud.points, grid)
}
