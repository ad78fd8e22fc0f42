//! Rasterized polygon IoU.
//!
//! Both polygons are even-odd filled onto one square-cell grid covering their
//! joint bounding box. A cell belongs to a polygon when its center does.

use super::{BBox, Contour, Point};

/// Result of [`polygon_iou`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IouOutcome {
    pub iou: f64,
    /// Set when either polygon covers no cells (zero area or zero extent).
    pub degenerate: bool,
}

struct Grid {
    origin: Point,
    cell: f64,
    cols: usize,
    rows: usize,
}

impl Grid {
    fn covering(bbox: &BBox, resolution: usize) -> Option<Grid> {
        let (w, h) = (bbox.width(), bbox.height());
        let longer = w.max(h);
        if longer.is_nan() || longer <= 0.0 {
            return None;
        }
        let cell = longer / resolution as f64;
        let span = |len: f64| {
            if len >= longer {
                resolution
            } else {
                ((len / cell - 1e-9).ceil() as usize).clamp(1, resolution)
            }
        };
        Some(Grid {
            origin: bbox.min,
            cell,
            cols: span(w),
            rows: span(h),
        })
    }

    /// Index of the first cell whose center x is >= `x`, clamped to the row.
    fn first_cell_at_or_after(&self, x: f64) -> usize {
        let f = ((x - self.origin.x) / self.cell - 0.5).ceil();
        if f <= 0.0 {
            0
        } else {
            (f as usize).min(self.cols)
        }
    }

    /// Even-odd coverage of one row, written as bit `bit` into `row`.
    fn fill_row(&self, polygon: &Contour, r: usize, bit: u8, parity: &mut [u8], row: &mut [u8]) {
        let yc = self.origin.y + (r as f64 + 0.5) * self.cell;
        parity.iter_mut().for_each(|p| *p = 0);
        for (a, b) in polygon.edges() {
            if (a.y > yc) != (b.y > yc) {
                let x = a.x + (yc - a.y) * (b.x - a.x) / (b.y - a.y);
                parity[self.first_cell_at_or_after(x)] ^= 1;
            }
        }
        let mut inside = 0u8;
        for (c, cell) in row.iter_mut().enumerate() {
            inside ^= parity[c];
            if inside == 1 {
                *cell |= bit;
            }
        }
    }
}

/// Intersection over union of two polygons measured in grid cells.
///
/// The grid has `resolution` cells along the longer side of the joint
/// bounding box. The measure is symmetric in its arguments and identical
/// inputs always give exactly 1. A polygon that covers no cells makes the
/// result 0 with `degenerate` set.
pub fn polygon_iou(a: &Contour, b: &Contour, resolution: usize) -> IouOutcome {
    let degenerate = IouOutcome {
        iou: 0.0,
        degenerate: true,
    };
    let (ba, bb) = (a.bbox(), b.bbox());
    if ba.width() <= 0.0 || ba.height() <= 0.0 || bb.width() <= 0.0 || bb.height() <= 0.0 {
        return degenerate;
    }
    let Some(grid) = Grid::covering(&ba.union(&bb), resolution.max(1)) else {
        return degenerate;
    };

    let mut parity = vec![0u8; grid.cols + 1];
    let mut row = vec![0u8; grid.cols];
    let (mut count_a, mut count_b, mut both) = (0u64, 0u64, 0u64);
    for r in 0..grid.rows {
        row.iter_mut().for_each(|c| *c = 0);
        grid.fill_row(a, r, 1, &mut parity, &mut row);
        grid.fill_row(b, r, 2, &mut parity, &mut row);
        for &c in &row {
            count_a += u64::from(c & 1);
            count_b += u64::from(c >> 1);
            both += u64::from(c == 3);
        }
    }
    if count_a == 0 || count_b == 0 {
        return degenerate;
    }
    let union = count_a + count_b - both;
    IouOutcome {
        iou: both as f64 / union as f64,
        degenerate: false,
    }
}
