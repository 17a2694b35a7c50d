//! Distance-decay statistics for social ties.
//!
//! * [`geodesy`]: zip-code gazetteer and great-circle distances.
//! * [`powerlaw`]: estimators for power-law and truncated-Zipf distance data.
//! * [`gravity`]: Monte Carlo gravity-model link generation.
//! * [`babynames`], [`adjacency`], [`pei`]: the proximity-effect index over
//!   state-level baby-name counts.
//! * [`choropleth`]: static tile-grid maps of name shares.

pub mod adjacency;
pub mod babynames;
pub mod choropleth;
pub mod error;
pub mod geodesy;
pub mod gravity;
pub mod pei;
pub mod powerlaw;
pub mod states;
pub mod stats;

pub use adjacency::AdjacencyGraph;
pub use babynames::{NameKey, NamePanel, NameRecord, PanelOptions, ParseOptions, Sex};
pub use error::{Error, Result};
pub use geodesy::{haversine_km, GeoPoint, ZipGazetteer};
pub use gravity::{GravityConfig, LinkSample};
pub use pei::{BreakpointMode, CohortRule, PeiPoint, PeiSeries, SeriesOptions};
pub use powerlaw::{DistanceSample, FitMethod, PowerLawFit};
pub use states::{State, StateSet};
