//! Synthetic scene generation: DEM rasters and building footprints.
//!
//! Scenes are flat ground at height zero plus flat-roofed prisms. Building
//! footprints are rectangles or L-shapes at arbitrary orientation; a
//! configurable fraction of buildings share one full edge with a partner.

mod io;
mod raster;

pub use io::{load_dem, load_footprints, save_dem, save_footprints};
pub use raster::{rasterize_polygon, GridDef};

use crate::error::{Error, Result};
use crate::geom::{ring_is_simple, ring_signed_area2, Vec2};
use crate::seed;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// 2.5D height raster over a geolocated grid.
///
/// Heights are row-major with row 0 at the southern edge (minimum y); the
/// ESRI ASCII reader/writer flips rows so files stay north-up.
#[derive(Debug, Clone, PartialEq)]
pub struct DemGrid {
    pub ncols: usize,
    pub nrows: usize,
    /// Lower-left corner of the grid in meters.
    pub origin_x: f64,
    pub origin_y: f64,
    pub cellsize: f64,
    pub nodata: f64,
    pub heights: Vec<f64>,
}

impl DemGrid {
    pub fn filled(ncols: usize, nrows: usize, origin: Vec2, cellsize: f64, value: f64) -> Self {
        DemGrid {
            ncols,
            nrows,
            origin_x: origin.x,
            origin_y: origin.y,
            cellsize,
            nodata: -9999.0,
            heights: vec![value; ncols * nrows],
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.ncols == 0 || self.nrows == 0 {
            return Err(Error::Config("DEM must have at least one cell".into()));
        }
        if !(self.cellsize > 0.0) {
            return Err(Error::Config("DEM cellsize must be positive".into()));
        }
        if self.heights.len() != self.ncols * self.nrows {
            return Err(Error::Config(format!(
                "DEM height count {} != ncols*nrows {}",
                self.heights.len(),
                self.ncols * self.nrows
            )));
        }
        for &h in &self.heights {
            if h != self.nodata && !h.is_finite() {
                return Err(Error::NonFinite {
                    what: "DEM height".into(),
                });
            }
        }
        Ok(())
    }

    #[inline]
    pub fn height(&self, col: usize, row: usize) -> f64 {
        self.heights[row * self.ncols + col]
    }

    #[inline]
    pub fn set_height(&mut self, col: usize, row: usize, h: f64) {
        self.heights[row * self.ncols + col] = h;
    }

    /// World coordinates of a cell center.
    #[inline]
    pub fn cell_center(&self, col: usize, row: usize) -> Vec2 {
        Vec2::new(
            self.origin_x + (col as f64 + 0.5) * self.cellsize,
            self.origin_y + (row as f64 + 0.5) * self.cellsize,
        )
    }

    /// Cell containing a world point, if inside the grid.
    pub fn cell_at(&self, p: Vec2) -> Option<(usize, usize)> {
        let cx = (p.x - self.origin_x) / self.cellsize;
        let cy = (p.y - self.origin_y) / self.cellsize;
        if cx < 0.0 || cy < 0.0 {
            return None;
        }
        let (col, row) = (cx.floor() as usize, cy.floor() as usize);
        (col < self.ncols && row < self.nrows).then_some((col, row))
    }

    pub fn grid_def(&self) -> GridDef {
        GridDef {
            ncols: self.ncols,
            nrows: self.nrows,
            origin_x: self.origin_x,
            origin_y: self.origin_y,
            cellsize: self.cellsize,
        }
    }
}

/// One building footprint: a simple counter-clockwise ring plus the roof
/// height above local ground used for evaluation.
#[derive(Debug, Clone, PartialEq)]
pub struct Footprint {
    pub id: String,
    pub ring: Vec<Vec2>,
    pub gt_height: Option<f64>,
}

impl Footprint {
    pub fn validate(&self) -> Result<()> {
        if self.ring.len() < 3 {
            return Err(Error::Footprint(format!(
                "footprint {} has {} vertices, need at least 3",
                self.id,
                self.ring.len()
            )));
        }
        if !ring_is_simple(&self.ring) {
            return Err(Error::Footprint(format!(
                "footprint {} is self-intersecting",
                self.id
            )));
        }
        if ring_signed_area2(&self.ring) <= 0.0 {
            return Err(Error::Footprint(format!(
                "footprint {} is not counter-clockwise",
                self.id
            )));
        }
        Ok(())
    }

    pub fn bbox(&self) -> (Vec2, Vec2) {
        let mut lo = Vec2::new(f64::INFINITY, f64::INFINITY);
        let mut hi = Vec2::new(f64::NEG_INFINITY, f64::NEG_INFINITY);
        for v in &self.ring {
            lo.x = lo.x.min(v.x);
            lo.y = lo.y.min(v.y);
            hi.x = hi.x.max(v.x);
            hi.y = hi.y.max(v.y);
        }
        (lo, hi)
    }
}

pub type FootprintSet = Vec<Footprint>;

/// Parameters for the synthetic scene generator.
#[derive(Debug, Clone)]
pub struct SceneSpec {
    pub seed: u64,
    /// Scene extent in meters (x, y).
    pub extent: (f64, f64),
    pub n_buildings: usize,
    /// Fractions of (rectangle, L-shape); must sum to 1.
    pub shape_mix: (f64, f64),
    /// Roof height range in meters (low, high).
    pub height_range: (f64, f64),
    /// Fraction of buildings sharing one full edge with a neighbor.
    pub touch_fraction: f64,
    pub dem_cellsize: f64,
    /// Footprint side length range in meters.
    pub side_range: (f64, f64),
}

impl Default for SceneSpec {
    fn default() -> Self {
        SceneSpec {
            seed: 0,
            extent: (100.0, 100.0),
            n_buildings: 10,
            shape_mix: (0.7, 0.3),
            height_range: (4.0, 28.0),
            touch_fraction: 0.0,
            dem_cellsize: 0.5,
            side_range: (8.0, 16.0),
        }
    }
}

impl SceneSpec {
    pub fn validate(&self) -> Result<()> {
        let frac_ok = |f: f64| (0.0..=1.0).contains(&f);
        if !frac_ok(self.shape_mix.0) || !frac_ok(self.shape_mix.1) {
            return Err(Error::Config("shape_mix fractions must be in [0,1]".into()));
        }
        if (self.shape_mix.0 + self.shape_mix.1 - 1.0).abs() > 1e-9 {
            return Err(Error::Config("shape_mix must sum to 1".into()));
        }
        if !frac_ok(self.touch_fraction) {
            return Err(Error::Config("touch_fraction must be in [0,1]".into()));
        }
        if !(self.height_range.0 > 0.0) || self.height_range.1 < self.height_range.0 {
            return Err(Error::Config("height_range must be positive".into()));
        }
        if self.n_buildings < 1 {
            return Err(Error::Config("n_buildings must be at least 1".into()));
        }
        if !(self.extent.0 > 0.0) || !(self.extent.1 > 0.0) {
            return Err(Error::Config("extent must be positive".into()));
        }
        if !(self.dem_cellsize > 0.0) {
            return Err(Error::Config("dem_cellsize must be positive".into()));
        }
        if !(self.side_range.0 > 0.0) || self.side_range.1 < self.side_range.0 {
            return Err(Error::Config("side_range must be positive".into()));
        }
        Ok(())
    }
}

fn rotate(p: Vec2, phi: f64) -> Vec2 {
    let (s, c) = phi.sin_cos();
    Vec2::new(c * p.x - s * p.y, s * p.x + c * p.y)
}

/// Build a rectangle or L-shape ring centered near `center`, rotated by `phi`.
fn make_ring(rng: &mut ChaCha8Rng, spec: &SceneSpec, center: Vec2, phi: f64) -> Vec<Vec2> {
    let (lo, hi) = spec.side_range;
    let w = rng.gen_range(lo..=hi);
    let d = rng.gen_range(lo..=hi);
    let is_l = rng.gen_bool(spec.shape_mix.1.clamp(0.0, 1.0));
    let local: Vec<Vec2> = if is_l {
        let w1 = w * rng.gen_range(0.35..=0.65);
        let d1 = d * rng.gen_range(0.35..=0.65);
        vec![
            Vec2::new(0.0, 0.0),
            Vec2::new(w, 0.0),
            Vec2::new(w, d1),
            Vec2::new(w1, d1),
            Vec2::new(w1, d),
            Vec2::new(0.0, d),
        ]
    } else {
        vec![
            Vec2::new(0.0, 0.0),
            Vec2::new(w, 0.0),
            Vec2::new(w, d),
            Vec2::new(0.0, d),
        ]
    };
    let mid = Vec2::new(w / 2.0, d / 2.0);
    local
        .into_iter()
        .map(|v| rotate(v.sub(mid), phi).add(center))
        .collect()
}

/// Partner rectangle sharing one full edge of `ring`, extruded outward.
fn make_partner(rng: &mut ChaCha8Rng, spec: &SceneSpec, ring: &[Vec2]) -> Vec<Vec2> {
    // Pick the longest-ish edge to mirror across so the shared edge is a
    // full side of both rings.
    let n = ring.len();
    let mut edges: Vec<(usize, f64)> = (0..n)
        .map(|i| (i, ring[(i + 1) % n].sub(ring[i]).norm()))
        .collect();
    edges.sort_by(|a, b| b.1.partial_cmp(&a.1).unwrap());
    let (i, _) = edges[0];
    let p = ring[i];
    let q = ring[(i + 1) % n];
    let edge = q.sub(p);
    // Outward normal of a CCW ring edge.
    let out = edge.perp_cw().normalized();
    let depth = rng.gen_range(spec.side_range.0..=spec.side_range.1);
    vec![
        q,
        p,
        p.add(out.scale(depth)),
        q.add(out.scale(depth)),
    ]
}

fn ring_fits(ring: &[Vec2], extent: (f64, f64), margin: f64) -> bool {
    ring.iter().all(|v| {
        v.x >= margin && v.y >= margin && v.x <= extent.0 - margin && v.y <= extent.1 - margin
    })
}

/// Generate a reproducible synthetic scene: a flat DEM with extruded
/// flat-roofed prisms, plus the matching footprint set with ground-truth
/// heights.
pub fn generate_scene(spec: &SceneSpec) -> Result<(DemGrid, FootprintSet)> {
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed::derive(spec.seed, "scene"));

    let n = spec.n_buildings;
    let n_paired_target = ((n as f64 * spec.touch_fraction / 2.0).round() as usize) * 2;
    let n_pairs = n_paired_target / 2;
    let n_single = n - n_paired_target;

    // Slot grid: each slot holds either one building or one touching pair.
    let s_hi = spec.side_range.1;
    let slot = 2.6 * s_hi + 4.0;
    let margin = 1.0;
    let slots_x = ((spec.extent.0 - 2.0 * margin) / slot).floor() as usize;
    let slots_y = ((spec.extent.1 - 2.0 * margin) / slot).floor() as usize;
    let n_slots = slots_x * slots_y;
    let n_units = n_pairs + n_single;
    if n_slots < n_units {
        return Err(Error::Placement {
            placed: n_slots,
            requested: n_units,
            retries: 0,
        });
    }

    // Deterministic slot order.
    let mut slot_ids: Vec<usize> = (0..n_slots).collect();
    for i in (1..slot_ids.len()).rev() {
        let j = rng.gen_range(0..=i);
        slot_ids.swap(i, j);
    }

    let mut footprints: FootprintSet = Vec::with_capacity(n);
    let mut unit = 0usize;
    let max_retries = 64;
    for &sid in slot_ids.iter().take(n_units) {
        let sx = (sid % slots_x) as f64;
        let sy = (sid / slots_x) as f64;
        let slot_lo = Vec2::new(margin + sx * slot, margin + sy * slot);
        let is_pair = unit < n_pairs;
        let mut placed = false;
        for _ in 0..max_retries {
            let jitter = 0.15 * slot;
            let center = Vec2::new(
                slot_lo.x + slot / 2.0 + rng.gen_range(-jitter..=jitter),
                slot_lo.y + slot / 2.0 + rng.gen_range(-jitter..=jitter),
            );
            let phi = rng.gen_range(0.0..std::f64::consts::TAU);
            let ring_a = make_ring(&mut rng, spec, center, phi);
            if is_pair {
                let ring_b = make_partner(&mut rng, spec, &ring_a);
                let slot_ext = (slot_lo.x + slot, slot_lo.y + slot);
                let within = |r: &[Vec2]| {
                    r.iter().all(|v| {
                        v.x >= slot_lo.x && v.y >= slot_lo.y && v.x <= slot_ext.0 && v.y <= slot_ext.1
                    })
                };
                if within(&ring_a) && within(&ring_b) && ring_fits(&ring_a, spec.extent, margin)
                    && ring_fits(&ring_b, spec.extent, margin)
                {
                    let ha = rng.gen_range(spec.height_range.0..=spec.height_range.1);
                    let hb = rng.gen_range(spec.height_range.0..=spec.height_range.1);
                    footprints.push(Footprint {
                        id: format!("b{:04}", footprints.len()),
                        ring: ring_a,
                        gt_height: Some(ha),
                    });
                    footprints.push(Footprint {
                        id: format!("b{:04}", footprints.len()),
                        ring: ring_b,
                        gt_height: Some(hb),
                    });
                    placed = true;
                    break;
                }
            } else {
                let slot_ext = (slot_lo.x + slot, slot_lo.y + slot);
                let within = ring_a.iter().all(|v| {
                    v.x >= slot_lo.x && v.y >= slot_lo.y && v.x <= slot_ext.0 && v.y <= slot_ext.1
                });
                if within && ring_fits(&ring_a, spec.extent, margin) {
                    let h = rng.gen_range(spec.height_range.0..=spec.height_range.1);
                    footprints.push(Footprint {
                        id: format!("b{:04}", footprints.len()),
                        ring: ring_a,
                        gt_height: Some(h),
                    });
                    placed = true;
                    break;
                }
            }
        }
        if !placed {
            return Err(Error::Placement {
                placed: footprints.len(),
                requested: n,
                retries: max_retries,
            });
        }
        unit += 1;
    }

    for f in &footprints {
        f.validate()?;
    }

    let ncols = (spec.extent.0 / spec.dem_cellsize).ceil() as usize;
    let nrows = (spec.extent.1 / spec.dem_cellsize).ceil() as usize;
    let mut dem = DemGrid::filled(ncols, nrows, Vec2::new(0.0, 0.0), spec.dem_cellsize, 0.0);
    extrude_into_dem(&mut dem, &footprints);
    Ok((dem, footprints))
}

/// Extrude footprints into a DEM: cells whose center lies inside a footprint
/// take that building's roof height.
pub fn extrude_into_dem(dem: &mut DemGrid, footprints: &[Footprint]) {
    let grid = dem.grid_def();
    for f in footprints {
        let (mask, _) = rasterize_polygon(&f.ring, &grid);
        let h = f.gt_height.unwrap_or(0.0);
        for row in 0..dem.nrows {
            for col in 0..dem.ncols {
                if mask.get(col, row) {
                    dem.set_height(col, row, h);
                }
            }
        }
    }
}

#[cfg(test)]
mod tests;
