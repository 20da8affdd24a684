//! Error-rate bookkeeping, mutual-information metrics and density evolution.
mod gmi;
mod mcde;
mod report;

pub use gmi::{delta_grid, gamma_grid, gmi_1, gmi_post_processed, optimize_pp, PostProcess, PpAccumulator, PpSample};
pub use mcde::{ensemble_rate, mcde_point, mcde_threshold, McdeConfig, McdePoint, McdeResult};
pub use report::{clopper_pearson, SimReport, TrialOutcome};
