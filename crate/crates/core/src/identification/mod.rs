//! Recovery of effective inputs, clustering into modes, affine fits and
//! certified queries on the reconstructed degradation map.

mod cluster;
mod fit;
mod reconstruction;
mod recover;
mod report;
mod sample;

pub use cluster::{
    cluster_pairs, is_identity_pair, partition_pairs, Cluster, ClusterOptions, Partition,
    DEFAULT_IDENTITY_TOLERANCE, DEFAULT_MERGE_TOLERANCE,
};
pub use fit::{fit_affine, fit_linear, pair_residuals};
pub use reconstruction::{
    build_from_pairs, build_reconstruction, lipschitz_error_bound, query, viabilize,
    viabilize_with, CdmReconstruction, IdentificationConfig, ModeReconstruction, QueryResult,
    ViabilizeStrategy, DEFAULT_MAX_RESIDUAL,
};
pub use recover::{recover_effective_input, recover_pairs};
pub use report::{parse_reconstruction, write_reconstruction};
pub use sample::{parse_sample_log, write_sample_log, ControlSample, EffectivePair};
