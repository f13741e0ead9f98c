//! Scalar special functions and the Meijer-G machinery every closed-form
//! link expression reduces to.

mod bessel;
mod erf;
mod gamma;
mod kernel;
mod laplace;
mod meijer;

pub use bessel::bessel_k;
pub use erf::{erf, erfc};
pub use gamma::{gamma_p, gamma_q, ln_gamma, ln_gamma_complex};
pub use kernel::MeijerKernel;
pub use laplace::{
    laplace_g_integral, laplace_g_integral_checked, laplace_g_integral_quadrature, laplace_g_spec,
    laplace_product_g_integral, LaplaceCheck,
};
pub use meijer::{meijer_g, Abscissa, ContourPolicy, ContourStrip, MeijerGSpec};
