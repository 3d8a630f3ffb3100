//! Scanline polygon rasterization with center-in-cell sampling.

use crate::geom::{ring_area, Vec2};
use crate::raster::BitMask;

/// Geometry of a raster: `nrows x ncols` cells of size `cellsize`, row 0 at
/// the minimum-y edge, cell centers at `origin + (col + 0.5, row + 0.5) * cellsize`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridDef {
    pub ncols: usize,
    pub nrows: usize,
    pub origin_x: f64,
    pub origin_y: f64,
    pub cellsize: f64,
}

impl GridDef {
    pub fn center(&self, col: usize, row: usize) -> Vec2 {
        Vec2::new(
            self.origin_x + (col as f64 + 0.5) * self.cellsize,
            self.origin_y + (row as f64 + 0.5) * self.cellsize,
        )
    }
}

/// Rasterize a closed ring: a cell is set iff its center is inside the
/// polygon under the even-odd rule. Boundary ties use half-open intervals
/// (left/bottom inclusive), so cells on a shared edge belong to exactly one
/// of two adjacent polygons.
///
/// Returns the mask and a degeneracy flag; zero-area rings yield an empty
/// flagged mask.
pub fn rasterize_polygon(ring: &[Vec2], grid: &GridDef) -> (BitMask, bool) {
    assert!(grid.cellsize > 0.0, "grid cell size must be positive");
    let mut mask = BitMask::new(grid.ncols, grid.nrows);
    if ring.len() < 3 || ring_area(ring) < 1e-12 {
        return (mask, true);
    }

    let n = ring.len();
    let mut crossings: Vec<f64> = Vec::with_capacity(8);
    for row in 0..grid.nrows {
        let yc = grid.origin_y + (row as f64 + 0.5) * grid.cellsize;
        crossings.clear();
        for i in 0..n {
            let a = ring[i];
            let b = ring[(i + 1) % n];
            // Half-open span in y skips horizontal edges and counts each
            // vertex crossing once.
            if (a.y <= yc) != (b.y <= yc) {
                let t = (yc - a.y) / (b.y - a.y);
                crossings.push(a.x + t * (b.x - a.x));
            }
        }
        crossings.sort_by(|p, q| p.partial_cmp(q).unwrap());
        for pair in crossings.chunks_exact(2) {
            let (x_enter, x_exit) = (pair[0], pair[1]);
            // Cell centers in [x_enter, x_exit).
            let t = (x_enter - grid.origin_x) / grid.cellsize - 0.5;
            let u = (x_exit - grid.origin_x) / grid.cellsize - 0.5;
            let col_start = t.ceil().max(0.0) as usize;
            let col_end = u.ceil().min(grid.ncols as f64) as usize;
            for col in col_start..col_end {
                mask.set(col, row, true);
            }
        }
    }
    (mask, false)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit_grid(n: usize) -> GridDef {
        GridDef {
            ncols: n,
            nrows: n,
            origin_x: 0.0,
            origin_y: 0.0,
            cellsize: 1.0,
        }
    }

    #[test]
    fn aligned_square_sets_exact_cells() {
        // 4x4 m square aligned with a 1 m grid covers exactly 16 cells.
        let ring = vec![
            Vec2::new(0.0, 0.0),
            Vec2::new(4.0, 0.0),
            Vec2::new(4.0, 4.0),
            Vec2::new(0.0, 4.0),
        ];
        let (mask, degenerate) = rasterize_polygon(&ring, &unit_grid(8));
        assert!(!degenerate);
        assert_eq!(mask.count(), 16);
        for row in 0..4 {
            for col in 0..4 {
                assert!(mask.get(col, row));
            }
        }
    }

    #[test]
    fn off_grid_polygon_is_empty() {
        let ring = vec![
            Vec2::new(100.0, 100.0),
            Vec2::new(104.0, 100.0),
            Vec2::new(104.0, 104.0),
            Vec2::new(100.0, 104.0),
        ];
        let (mask, degenerate) = rasterize_polygon(&ring, &unit_grid(8));
        assert!(!degenerate);
        assert_eq!(mask.count(), 0);
    }

    #[test]
    fn degenerate_polygon_flagged() {
        let ring = vec![
            Vec2::new(1.0, 1.0),
            Vec2::new(3.0, 1.0),
            Vec2::new(2.0, 1.0),
        ];
        let (mask, degenerate) = rasterize_polygon(&ring, &unit_grid(8));
        assert!(degenerate);
        assert_eq!(mask.count(), 0);
    }

    #[test]
    fn l_shape_equals_union_of_rectangles() {
        // L = [0,6]x[0,2] ∪ [0,2]x[0,6], with half-integer offsets so no
        // center lies exactly on a boundary.
        let shift = Vec2::new(0.25, 0.25);
        let l_ring: Vec<Vec2> = vec![
            Vec2::new(0.0, 0.0),
            Vec2::new(6.0, 0.0),
            Vec2::new(6.0, 2.0),
            Vec2::new(2.0, 2.0),
            Vec2::new(2.0, 6.0),
            Vec2::new(0.0, 6.0),
        ]
        .into_iter()
        .map(|v| v.add(shift))
        .collect();
        let rect_a: Vec<Vec2> = vec![
            Vec2::new(0.0, 0.0),
            Vec2::new(6.0, 0.0),
            Vec2::new(6.0, 2.0),
            Vec2::new(0.0, 2.0),
        ]
        .into_iter()
        .map(|v| v.add(shift))
        .collect();
        let rect_b: Vec<Vec2> = vec![
            Vec2::new(0.0, 0.0),
            Vec2::new(2.0, 0.0),
            Vec2::new(2.0, 6.0),
            Vec2::new(0.0, 6.0),
        ]
        .into_iter()
        .map(|v| v.add(shift))
        .collect();
        let grid = unit_grid(8);
        let (l_mask, _) = rasterize_polygon(&l_ring, &grid);
        let (a_mask, _) = rasterize_polygon(&rect_a, &grid);
        let (b_mask, _) = rasterize_polygon(&rect_b, &grid);
        let union = a_mask.union(&b_mask);
        assert_eq!(l_mask, union);
    }

    #[test]
    fn shared_edge_cells_belong_to_exactly_one_polygon() {
        // Two rectangles sharing the vertical edge x=3, with cell centers
        // exactly on it (centers at x = 3.0 when origin_x = -0.5).
        let grid = GridDef {
            ncols: 8,
            nrows: 4,
            origin_x: -0.5,
            origin_y: -0.5,
            cellsize: 1.0,
        };
        let left = vec![
            Vec2::new(0.0, 0.0),
            Vec2::new(3.0, 0.0),
            Vec2::new(3.0, 3.0),
            Vec2::new(0.0, 3.0),
        ];
        let right = vec![
            Vec2::new(3.0, 0.0),
            Vec2::new(6.0, 0.0),
            Vec2::new(6.0, 3.0),
            Vec2::new(3.0, 3.0),
        ];
        let (lm, _) = rasterize_polygon(&left, &grid);
        let (rm, _) = rasterize_polygon(&right, &grid);
        assert!(!lm.intersects(&rm));
        // Every center on the shared edge is claimed by exactly one side.
        for row in 0..4 {
            let y = row as f64;
            if y <= 3.0 {
                let col = 3usize; // center x = 3.0
                let claimed = lm.get(col, row) ^ rm.get(col, row);
                if y < 3.0 {
                    assert!(claimed, "row {row} center on shared edge unclaimed/doubled");
                }
            }
        }
    }
}
