//! Special functions behind the channel statistics.
//!
//! Everything here is integer-order: the modified Bessel function `I_n`,
//! the generalized Marcum-Q function `Q_N(a, b)` and the regularized
//! incomplete gamma functions `P(s, x)` / `Q(s, x)`. All series stop on a
//! relative tolerance and fail loudly when they hit the term cap.

mod bessel;
mod gamma;
mod marcum;

pub use bessel::{bessel_i, bessel_i_scaled, ln_bessel_i};
pub use gamma::{ln_factorial, reg_gamma_p, reg_gamma_pair, reg_gamma_q};
pub use marcum::{marcum_q, marcum_q_pair, marcum_q_with};

use thiserror::Error;

/// Series stopping rule shared by every special function.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance {
    /// Stop once the bound on the neglected tail drops below
    /// `rel_eps` times the running sum.
    pub rel_eps: f64,
    /// Hard cap on the number of series terms.
    pub max_terms: usize,
}

impl Default for Tolerance {
    fn default() -> Self {
        Self {
            rel_eps: 1e-15,
            max_terms: 100_000,
        }
    }
}

impl Tolerance {
    pub fn new(rel_eps: f64, max_terms: usize) -> Result<Self, SpecialError> {
        if !(rel_eps > 0.0 && rel_eps < 1.0) {
            return Err(SpecialError::Domain("rel_eps must lie in (0, 1)"));
        }
        if max_terms < 100 {
            return Err(SpecialError::Domain("max_terms must be at least 100"));
        }
        Ok(Self { rel_eps, max_terms })
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SpecialError {
    #[error("argument outside the domain: {0}")]
    Domain(&'static str),
    #[error("{function} overflows f64 at x = {x}; use the scaled or log form")]
    Overflow { function: &'static str, x: f64 },
    #[error(
        "series did not converge within {terms} terms (partial value {partial}, tail bound {bound})"
    )]
    NonConvergence {
        partial: f64,
        bound: f64,
        terms: usize,
    },
}
