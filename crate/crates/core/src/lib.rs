//! Optimal shrinking strategies for controlled convex sets.
//!
//! Every set is a [`RoundedSet`]: a convex polygon dilated by a disk. On top
//! of exact morphology the crate solves the area-constrained perimeter
//! problem, integrates the optimal area ODE and brackets the critical budget.

pub mod error;
pub mod evolution;
pub mod geometry;
pub mod io;
pub mod isoperimetric;
pub mod morphology;
pub mod random;
pub mod raster;
pub mod threshold;
pub mod validate;

pub use error::{Error, Result};
pub use evolution::{
    area_rate, check_admissible, compute_cost, default_dt, reconstruct_set, simulate, simulate_until, AdmissibilityReport,
    EvolutionTrace, Sample,
};
pub use geometry::{contains, hausdorff, ConvexPolygon, KernelKind, Point2, RoundedSet};
pub use isoperimetric::{
    free_arc_turning, invert_opening_area, perimeter_of_area, solve_tilde, IsoperimetricSolution, OpeningProfile, Regime,
};
pub use morphology::{dilate, duality_gap, erode, inner_radius, opening, polygon_erode, InnerBallLocus};
pub use raster::{raster_area, raster_dilate, raster_erode, rasterize, RasterGrid};
pub use threshold::{ball_time_at_m0, classify, find_m0, Outcome, OutcomeKind, ThresholdReport};
