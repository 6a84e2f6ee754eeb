//! Grids, the Caputo L1 scheme, Gaver-Stehfest inversion, grid convolution
//! and a damped fixed-point solver.

mod caputo;
mod convolution;
mod fixed_point;
mod grid;
mod laplace;

pub use caputo::caputo_l1;
pub use convolution::{convolve, convolve_power, cumulative_integral, integrate};
pub use fixed_point::{bracket_roots, fixed_point, DEFAULT_DAMPING};
pub use grid::{Grid, GridFunction, SamplePath};
pub(crate) use laplace::talbot_invert;
pub use laplace::{
    laplace_invert, laplace_invert_checked, stehfest_weights, try_laplace_invert,
    DEFAULT_ORDER,
};
