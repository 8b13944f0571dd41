//! Exact coefficients and truncated Puiseux series.

pub mod arith;
mod cyclo;
mod kernel;
pub mod linalg;
mod series;

pub use cyclo::{parse_cyc, CycRational};
pub use series::{q, qs_add, qs_compose_scale, qs_div, qs_mul, qs_theta, Prec, PuiseuxSeries, Q};
