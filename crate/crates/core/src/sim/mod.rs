//! Response simulation under the main-effects pooling model and the
//! three-method comparison study.

mod presets;
mod scenario;
mod study;

pub use presets::{desk, resolve, table1, Preset, StdParams};
pub use scenario::{
    evaluate, gen_interaction_response, gen_response, pilot_draw, sample_active, Heredity, Interaction, InteractionKind,
    InteractionSign, Knowledge, PilotDraw, Rates, Scenario, PAPER_D_GRID, PILOT_RUNS,
};
pub use study::{
    prepare, replicate_seed, run_cell, run_study, single_compound_design, Method, PreparedDesigns, StudyConfig, StudyReport,
    StudyRow,
};
