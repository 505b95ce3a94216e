//! Four-portfolio trading-environment model: simulation, closed-form
//! event-time decompositions, and numerical proposition checkers.

pub mod decomp;
pub mod params;
pub mod props;
pub mod sim;

pub use decomp::{
    event_decomposition, exposure_beta, horizon_weights, staged_diffusion, DecompositionMode,
    EventExperiment, HorizonWeights, Revisions, StagedDiffusion, StateKind,
};
pub use params::{wedge, GroupParams, ModelParams, StateValues};
pub use props::{
    check_prop1, check_prop2, check_prop4, check_prop5, sweep_prop1, sweep_prop2, sweep_prop4,
    sweep_prop5, Prop1Check, Prop1Inputs, Prop2Check, Prop2Variant, Prop4Check, Prop5Check,
    SweepReport, SweepRow,
};
pub use sim::{
    generate_capm_sv_panel, generate_capm_sv_series, generate_model_panel, price_backward,
    simulate_equilibrium, simulate_states, step_capital, CapmSvDgp, EquilibriumPath, ModelPanel,
    StatePath,
};
