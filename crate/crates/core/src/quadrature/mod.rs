//! Double-exponential quadrature and integrals of `K`, `K'`, `E`, `E'`.

mod de;
mod kint;

pub use de::{integrate_01, integrate_tail, mellin_transform, mellin_transform_est, try_integrate_01, QuadResult, MAX_LEVEL};
pub use kint::{k_integral, k_integral_unchecked, End, Factor, Growth, KIntegralSpec, Leaf};
