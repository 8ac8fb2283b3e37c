//! Sato–Tate integrals, empirical distributions and prime-angle summaries.

mod ecdf;
pub mod quadrature;
mod sato_tate;
mod summary;

pub use ecdf::{ks_statistic, sup_gap_on_grid, Ecdf};
pub use sato_tate::{
    abs_cos_integral, h_gamma, half_density, signed_cos_integral, st_cdf, st_density,
    st_even_moment, st_log_moments, STConstants,
};
pub use summary::{
    prime_angle_summary, prime_log_moments, AngleSummary, GammaMoment, LogMomentEstimate,
};
