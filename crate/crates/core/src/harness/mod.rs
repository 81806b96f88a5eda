//! Scenario files, Monte Carlo experiments, the verification suite and the demo.

pub mod demo;
pub mod montecarlo;
pub mod oracles;
pub mod output;
pub mod scenario;
pub mod verify;

pub use demo::{run_demo, weather_demo, DemoOutput};
pub use montecarlo::{
    convergence_experiment, mc_uniform_avg_loss, mc_uniform_avg_loss_with, ConvergenceRow,
    McEstimate,
};
pub use output::{write_csv, write_json, OutputFormat};
pub use scenario::{Scenario, VerifyLevel};
pub use verify::{verify_all, verify_all_seeded, MetricRow, RunReport};
