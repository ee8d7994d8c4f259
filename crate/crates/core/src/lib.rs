pub mod liealg;
pub mod moments;
pub mod poisson;
pub mod polyring;
mod sampling;
pub mod strata;
pub mod symbreak;
