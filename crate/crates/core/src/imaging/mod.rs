//! Thermal frame ingestion: parsing, regions of interest, statistics and
//! per-soil series.

pub mod frame;
pub mod render;
pub mod roi;
pub mod series;
pub mod stats;
pub mod transient;

pub use frame::{parse_frame, read_frame_file, ThermalFrame, FRAME_HEIGHT, FRAME_WIDTH, PLAUSIBLE_RANGE_C};
pub use render::{render_frame, Layer};
pub use roi::{rasterize, PixelMask, Point, RoiFile, RoiPolygon};
pub use series::{
    assemble_from_manifest, assemble_series, build_masks, transient_end_time, AssembleOptions, AuxChannels,
    Manifest, ManifestEntry, RoiSeries,
};
pub use stats::{roi_stats, roi_stats_with, RoiStats, StdKind};
pub use transient::{detect_transient_end, DEFAULT_SMOOTHING_WINDOW};
