//! Complete elliptic integrals and the counting-function rate function.

mod elliptic;
mod rate;

pub use elliptic::{
    ellip_e, ellip_e_quadrature, ellip_k, ellip_k_quadrature, script_h, EllipticValue,
};
pub use rate::{
    gamma_fn, gamma_fn_with, gamma_inv, gamma_inv_with, rate_bess, rate_bess_with, rate_sine,
    GammaValue, RateEvaluation, Scheme, GAMMA_AT_ZERO,
};
