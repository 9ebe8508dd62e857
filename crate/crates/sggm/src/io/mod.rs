//! File formats and artifact metadata: PGM and PNG rasters, the sweep CSV,
//! the optional SVG chart, and the JSON sidecars that make every artifact
//! reproducible.

pub mod csv;
pub mod pgm;
pub mod raster;
pub mod sidecar;
pub mod svg;
