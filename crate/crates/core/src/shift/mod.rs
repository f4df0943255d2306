//! Unilateral weighted shifts with eventually periodic weights.

mod predicates;
mod quadratic;
mod recurrence;
mod weights;

pub use predicates::{
    hankel_stop, is_hyponormal_shift, is_k_hyponormal_shift, is_n_quasinormal_shift, is_n_subnormal_shift,
    is_quasi_n_normal_shift, is_quasinormal_shift, is_subnormal_shift, minimal_period, normalized_hankel, shift_matrix,
    HyponormalShiftVerdict, KHyponormalShiftVerdict, NQuasinormalShiftVerdict, NSubnormalShiftVerdict,
    PeriodicityWitness, QuasiNNormalShiftVerdict, SubnormalShiftVerdict,
};
pub use quadratic::{
    default_s_grid, quadratic_hyponormality_probe, quadratic_probe_curve, QuadraticProbe, QUADRATIC_MARGIN,
};
pub use recurrence::{
    best_period, boundedness_forces_periodicity_probe, derive_quasinormal_continuation, PeriodicFit, ProbeResult,
};
pub use weights::{MomentSequence, PowerDecomposition, Tail, TailJson, WeightSequence, WeightsJson};
