//! Instance generators and numerical checkers for the Weak, Simplified and
//! Main Theorems and the two olympiad problems. Generators build the truth in
//! (start from the tangent circle and construct around it) because the
//! hypotheses have measure zero; checkers report scale-free residuals.

mod mainthm;
mod olympiad;
mod scenario;
mod suites;
mod weak;

pub use scenario::{Report, Scenario, SceneObject};
pub use suites::*;
pub use mainthm::*;
pub use olympiad::*;
pub use weak::*;
