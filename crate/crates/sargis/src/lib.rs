//! Synthetic SAR scene simulation and GIS-conditioned building segmentation.
//!
//! The crate covers the full desk-scale pipeline:
//!
//! 1. **scene** – synthetic urban scenes (DEM raster + building footprints)
//!    and their file formats (ESRI ASCII grid, JSON footprints).
//! 2. **cloud** – the three point-cloud stages: DEM points, vertical gap
//!    filling along building walls, and sensor-visible selection via
//!    hidden point removal (spherical flip + 3D convex hull).
//! 3. **sargeo** – far-field projection into slant-range/azimuth image
//!    coordinates, ground-truth and footprint mask rasterization (complete
//!    footprints and sensor-visible segments), intensity simulation with
//!    exponential speckle, and the intensity-mode post-filter.
//! 4. **nn** / **cgnet** – a minimal differentiable layer kit (convolution,
//!    pooling, bilinear upsampling, Nadam) and the conditional GIS-aware
//!    normalization network built on it, plus a channel-concatenation
//!    baseline.
//! 5. **datapipe** / **metrics** – patch extraction, region splits, the
//!    training loop with plateau learning-rate schedule, full-scene
//!    prediction, and pixel-based evaluation (P/R/F1/IoU/OA).
//! 6. **giserr** – positioning-error injection into footprint masks.
//! 7. **lod1** – building-height estimation from layover extent and prism
//!    mesh extrusion.
//!
//! The `runner` module wires the stages into reproducible end-to-end runs
//! used by the CLI.

pub mod cgnet;
pub mod cloud;
pub mod datapipe;
pub mod error;
pub mod geom;
pub mod giserr;
pub mod lod1;
pub mod metrics;
pub mod nn;
pub mod raster;
pub mod runner;
pub mod sargeo;
pub mod scene;
pub mod seed;

pub use error::{Error, Result};
