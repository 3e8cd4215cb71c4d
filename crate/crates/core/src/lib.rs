//! Finite-scale numerics for reproducing kernel Hilbert spaces and the
//! corona problem: kernels, multiplier norms, shifted spaces, convex Poisson
//! Bezout solves, outer functions, Carleson measures and ∂̄ solvers.

// `!(x > 0.0)` is how parameter checks reject NaN along with bad values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod carleson;
pub mod cli;
pub mod config;
pub mod convex_poisson;
pub mod dbar;
pub mod error;
pub mod imp;
pub mod io;
pub mod kernels;
pub mod linalg;
pub mod outer;
pub mod rescaling;
pub mod rkhs;
pub mod special;

pub use config::NumericConfig;
pub use error::{Error, Result};
pub use kernels::{ComplexPoint, DomainSpec, Kernel, KernelFamily, KernelSpec, PointSet, PowerSeries1D, C64};
