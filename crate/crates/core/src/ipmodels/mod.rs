//! Solver-agnostic MILP models, LP export and the external solver bridge.

mod bridge;
mod enumerate;
mod formulations;
mod lp;
mod model;

pub use bridge::{
    parse_solution, solve_external, ExternalSolution, SolveMode, SolverBridgeConfig, ENV_COMMAND, ENV_MODE,
};
pub use enumerate::integer_completions;
pub use formulations::{fortet_from_certificate, fortet_model, nogood_model, separate_nogood, NogoodCut};
pub use lp::{lp_objective_scale, validate_name, write_lp, write_lp_relaxation};
pub use model::{model_stats, Constraint, MilpModel, ModelStats, Sense, VarDef, VarType};
