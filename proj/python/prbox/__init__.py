"""Post-selected binned position measurements on a two-mode Gaussian state."""

from ._prbox import (  # noqa: F401
    BivariateGaussian,
    CountTable,
    FrftPlan,
    FrftStage,
    GaussianTwoModeState,
    JointProbTable,
    MeasurementSettings,
    SearchResult,
    TuneResult,
    and_gate_success,
    bell_S,
    compose_orders,
    correlation_E,
    covariance_from_state,
    estimate_probabilities,
    frft_distance,
    maximize_S,
    mc_bell_S,
    no_signaling_report,
    plan_lens_system,
    position_joint_density,
    postselected_probs,
    pr_fidelity,
    quadrant_probability,
    rotate_covariance,
    sign_expectation,
    simulate_counts,
    sweep_beta,
    tune_r,
)

__all__ = [name for name in dir() if not name.startswith("_")]
