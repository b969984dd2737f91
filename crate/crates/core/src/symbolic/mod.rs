//! Exact algebra: q-expansions over the rationals, Eisenstein series as
//! polynomials in `E_4, E_6`, expressions in `k, K, E` closed under `q d/dq`,
//! and the pipelines that turn modular identities into `K` integrals.

mod keexpr;
mod pipelines;
mod poly;
mod qseries;
mod weighted;

pub use keexpr::{KEExpr, KEMono};
pub use pipelines::{
    compute_f4p, compute_gp, compute_pn, constant_identity, derive_e_identity, e4_case_identity, eisenstein_k_form,
    sqrt2_form_theta, theta2_fourth_identity, theta2_squared_identity, theta_power_sum, EisensteinVariant, F4pResult,
    GpResult, PnResult, QIdentity, Sqrt2FormTheta,
};
pub use poly::{q, q_to_f64, qgcd, qr, Poly, RatFunc, Q};
pub use qseries::{eisenstein_qseries, theta_qseries, QSeries};
pub use weighted::{eisenstein_as_e4e6, weight_basis, WeightedPoly, WeightedPolyRecord};
