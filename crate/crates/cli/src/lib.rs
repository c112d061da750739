//! Scene files, the command runner and its reports.

pub mod report;
pub mod runner;
pub mod scene;

pub use report::{CommandReport, Format, Report, Status};
pub use runner::run;
pub use scene::{parse_scene, parse_scene_with, Scene, SceneError, SceneErrorKind};

use orbicycle::Budget;

/// Parse and run a scene; a scene that does not parse yields a report
/// carrying the diagnostic.
pub fn run_text(text: &str, seed: u64, budget: Budget) -> Report {
    match parse_scene_with(text, budget) {
        Ok(scene) => run(&scene, seed),
        Err(e) => Report::rejected(seed, budget, e),
    }
}
