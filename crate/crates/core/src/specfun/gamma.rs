use std::sync::OnceLock;

use super::{SpecialError, Tolerance};

const TABLE_LEN: usize = 171;

fn factorial_table() -> &'static [f64; TABLE_LEN] {
    static TABLE: OnceLock<[f64; TABLE_LEN]> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut t = [0.0; TABLE_LEN];
        let mut f = 1.0_f64;
        for (n, slot) in t.iter_mut().enumerate().skip(1) {
            f *= n as f64;
            *slot = f.ln();
        }
        t
    })
}

/// `ln(n!)`. Tabulated up to 170, Stirling series beyond.
pub fn ln_factorial(n: u64) -> f64 {
    if (n as usize) < TABLE_LEN {
        return factorial_table()[n as usize];
    }
    let x = n as f64;
    let inv = 1.0 / x;
    let inv2 = inv * inv;
    let corr = inv
        * (1.0 / 12.0 - inv2 * (1.0 / 360.0 - inv2 * (1.0 / 1260.0 - inv2 / 1680.0)));
    x * x.ln() - x + 0.5 * (2.0 * std::f64::consts::PI * x).ln() + corr
}

/// Regularized lower incomplete gamma `P(shape, x)` for integer shape,
/// i.e. the Erlang CDF `1 - e^{-x} sum_{k<shape} x^k / k!`.
pub fn reg_gamma_p(shape: u32, x: f64) -> Result<f64, SpecialError> {
    reg_gamma_pair(shape, x).map(|(p, _)| p)
}

/// Regularized upper incomplete gamma `Q(shape, x) = 1 - P(shape, x)`.
pub fn reg_gamma_q(shape: u32, x: f64) -> Result<f64, SpecialError> {
    reg_gamma_pair(shape, x).map(|(_, q)| q)
}

/// `(P, Q)` computed together. The smaller of the two is always summed
/// directly, so it keeps full relative accuracy deep in either tail.
pub fn reg_gamma_pair(shape: u32, x: f64) -> Result<(f64, f64), SpecialError> {
    gamma_pair_with(u64::from(shape), x, &Tolerance::default())
}

pub(crate) fn gamma_pair_with(
    shape: u64,
    x: f64,
    tol: &Tolerance,
) -> Result<(f64, f64), SpecialError> {
    if shape == 0 {
        return Err(SpecialError::Domain("gamma shape must be >= 1"));
    }
    if x.is_nan() || x < 0.0 {
        return Err(SpecialError::Domain("gamma argument must be >= 0"));
    }
    if x == 0.0 {
        return Ok((0.0, 1.0));
    }
    if x.is_infinite() {
        return Ok((1.0, 0.0));
    }
    let s = shape as f64;
    if x < s {
        // P(s,x) = e^{-x} x^s / s! * sum_j x^j / ((s+1)..(s+j))
        let ln_lead = -x + s * x.ln() - ln_factorial(shape);
        let mut term = 1.0;
        let mut sum = 1.0;
        let mut j = 0usize;
        loop {
            j += 1;
            term *= x / (s + j as f64);
            sum += term;
            let r = x / (s + j as f64 + 1.0);
            let bound = term * r / (1.0 - r);
            if bound <= tol.rel_eps * sum {
                break;
            }
            if j >= tol.max_terms {
                return Err(SpecialError::NonConvergence {
                    partial: (ln_lead + sum.ln()).exp(),
                    bound: (ln_lead + bound.ln()).exp(),
                    terms: j,
                });
            }
        }
        let p = (ln_lead + sum.ln()).exp().min(1.0);
        Ok((p, 1.0 - p))
    } else {
        // Q(s,x) = e^{-x} sum_{k<s} x^k/k!; terms grow with k, sum from the top.
        let ln_top = -x + (s - 1.0) * x.ln() - ln_factorial(shape - 1);
        let mut term = 1.0;
        let mut sum = 1.0;
        let mut k = shape - 1;
        let mut n = 0usize;
        while k > 0 {
            term *= k as f64 / x;
            sum += term;
            k -= 1;
            n += 1;
            let r = k as f64 / x;
            let bound = term * r / (1.0 - r);
            if bound <= tol.rel_eps * sum {
                break;
            }
            if n >= tol.max_terms {
                return Err(SpecialError::NonConvergence {
                    partial: (ln_top + sum.ln()).exp(),
                    bound: (ln_top + bound.ln()).exp(),
                    terms: n,
                });
            }
        }
        let q = (ln_top + sum.ln()).exp().min(1.0);
        Ok((1.0 - q, q))
    }
}
