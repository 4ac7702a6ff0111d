//! Fixed and critical points, basins, fixed internal rays, and curve lifting.

mod analysis;
mod basin;
mod critical;
mod fixed;
mod lift;
mod ray;

pub use analysis::{same_point, MapAnalysis};
pub use basin::{basin_index, BasinClassifier, BasinVerdict};
pub use critical::{
    critical_locations, critical_multiplicity, critical_points, critical_points_with_cutoff, is_postcritically_fixed,
    CriticalPointRecord, Fate, LandingTable, PcfReport, PcfVerdict,
};
pub use fixed::{
    classify_fixed_points, fixed_point_records, fixed_points, is_newton_map, FixedClass, FixedPointRecord, LawIndex,
    NewtonReport,
};
pub(crate) use fixed::canonical_cmp;
pub use lift::{lift_curve, Lifter};
pub use ray::{
    fixed_ray_count, invariance_defect, polyline_distance, trace_all_fixed_rays, trace_fixed_ray, trace_internal_ray,
    RayOptions, RayPolyline,
};
