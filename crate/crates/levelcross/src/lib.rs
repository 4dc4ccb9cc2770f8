//! First level-crossing times of a compound renewal process R_s = u + c s - V_s:
//! diffusion-type approximations for the crossing probability within a finite
//! horizon, exact Kendall-identity evaluators, sensitivity formulas, fixed
//! probability levels in the premium rate, and Monte Carlo reference
//! estimators.

pub mod coreint;
pub mod deriv;
pub mod dist;
pub mod kendall;
pub mod level;
pub mod mc;
pub mod error;
pub mod quad;
pub mod special;

pub use dist::{DistributionSpec, MomentSummary, RenewalModel};
pub use error::{Error, Result};
