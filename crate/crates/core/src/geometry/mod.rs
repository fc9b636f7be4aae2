//! Set distances, star-shaped set approximations and covering estimates.

mod finite_set;
mod probe;
mod star;
mod text;

pub use finite_set::{hausdorff_distance, set_distance, within_fattening, FiniteSetSample};
pub use probe::{covering_radius, ProbeRegion, ProbeSet};
pub use star::{
    estimate_mgf_lipschitz, mgf_inner_bound, mgf_outer_bound, star_contains, Containment,
    RadialSample, Side, StarSetApprox, DIRECTION_DEDUP_TOLERANCE,
};
pub use text::{parse_star_set, write_star_set};

pub(crate) use star::classify;
pub(crate) use text::{fmt_scalar, parse_scalar};
