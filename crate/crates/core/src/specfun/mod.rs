//! Complete elliptic integrals, the nome, Jacobi theta functions, Gamma and
//! generalized hypergeometric series at unit argument.

mod elliptic;
mod gamma;
mod hypergeometric;
mod point;
mod theta;

pub use elliptic::{
    agm, complement, deriv_e, deriv_k, ellint_complementary, ellint_e, ellint_k, nome, nome_of,
    CompleteIntegrals, Modulus, Nome,
};
pub use gamma::{gamma_fn, ln_gamma, rgamma, sin_pi};
pub use hypergeometric::{hypergeometric_pfq, hypergeometric_pfq_est, PfqValue};
pub use point::EllipticPoint;
pub use theta::{ln_theta_t, modulus_from_nome, theta, triple_product_series};
