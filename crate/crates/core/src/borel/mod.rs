//! Borel–Laplace 1-summation, rigorous quadrature and mixed functions.

mod cauchy;
mod kernel;
mod mixed;
pub mod quad;

pub use cauchy::summed_derivative;
pub use kernel::{
    anti_stokes, check_direction, gevrey_asymptotics_check, laplace_sum, AntiESpec, AsymptoticsCheck, Direction,
    ANTI_STOKES_GUARD,
};
pub use mixed::{eval_mixed, laplace_of_e, ETerm, GSeries, MixedFunctionSpec};
pub use quad::{integrate, quad_semiinfinite, FnIntegrand, Integrand, Majorant};
