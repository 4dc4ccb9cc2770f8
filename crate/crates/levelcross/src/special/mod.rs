//! Special functions: normal cdf/quantile, half-integer Bessel K, and the
//! generalized inverse Gaussian law.

pub mod bessel;
pub mod erf;
pub mod gig;
pub mod normal;

pub use bessel::bessel_k_half_integer;
pub use gig::{gig_cdf, gig_pdf, GigParams};
pub use normal::{normal_cdf, normal_log_cdf, normal_pdf, normal_quantile, std_normal_pdf};
