//! Thin re-exports of the libm routines used throughout the crate, so the
//! same code paths run under `no_std` and in tests.

#![allow(unused_imports)]

pub(crate) use libm::{acos, atan, cos, cosh, exp, expm1, fabs, log, log10, log1p, pow, sin, sinh, sqrt, tan, tanh};

/// Fourth root of a non-negative number.
pub(crate) fn quartic_root(x: f64) -> f64 {
    sqrt(sqrt(x))
}

pub(crate) fn sq(x: f64) -> f64 {
    x * x
}

pub(crate) fn cube(x: f64) -> f64 {
    x * x * x
}
