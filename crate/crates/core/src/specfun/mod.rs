//! Special functions: integer-order Bessel/Hankel functions of positive real
//! argument and the two hypergeometric evaluators behind the σ-series
//! diagnostics.
//!
//! All functions are pure; orders are capped at [`MAX_ORDER`] and arguments
//! at [`MAX_ARGUMENT`], beyond which a [`crate::Error::Capability`] is
//! returned instead of a degraded value.

mod bessel;
mod hyper;
mod scaled;

pub(crate) use bessel::j0_y0;
pub use bessel::{
    bessel_j, bessel_j_scaled, bessel_j_seq_scaled, bessel_y, bessel_y_seq_scaled, green, hankel1,
    hankel1_scaled, hankel1_seq, hankel1_seq_scaled, signed_order, MAX_ARGUMENT, MAX_ORDER,
};
pub use hyper::{hyp0f3_ones, hyp2f1_peaked};
pub use scaled::Scaled;

use num_complex::Complex64;

/// One order/argument evaluation: `J_m(x)`, `Y_m(x)` and `H_m(x)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CylFunTriple {
    pub order: i32,
    pub argument: f64,
    pub j: f64,
    pub y: f64,
    pub h: Complex64,
}

impl CylFunTriple {
    pub fn eval(order: i32, argument: f64) -> crate::Result<Self> {
        let j = bessel_j(order, argument)?;
        let y = bessel_y(order, argument)?;
        Ok(CylFunTriple {
            order,
            argument,
            j,
            y,
            h: Complex64::new(j, y),
        })
    }
}
