//! Forward simulation of nominal and degraded control-affine systems.

mod heat;
mod integrate;
mod model;

pub use heat::{DepthCoupling, HeatSystem};
pub use integrate::{
    integrate, ChannelSignal, InputSignal, IntegrationOptions, SamplingSchedule,
    VelocityObservation, DEFAULT_MAX_STEP,
};
pub use model::{degraded_rhs, discretized_pseudo_inverse, ControlAffine, SystemModel};
