//! Rotation flows of the disk and their images of the standard diameter.

mod arrangement;
mod rotation;
mod sandwich;

pub use arrangement::{arrangement_weights, polyline_to_weighted_meander, ArrangementWeights};
pub use rotation::{
    axis_crossings, check_embedded, count_axis_crossings, rotated_diameter, Polyline, Ramp, RotationParams,
    DEGENERACY_OFFSET, MAX_ANGLE_STEP,
};
pub use sandwich::{fit_slope, sandwich_experiment, SandwichReport, SandwichRow};
