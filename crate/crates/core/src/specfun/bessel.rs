use super::gamma::ln_factorial;
use super::{SpecialError, Tolerance};

/// Modified Bessel function of the first kind `I_order(x)`.
///
/// Fails with [`SpecialError::Overflow`] instead of returning infinity;
/// large arguments should go through [`ln_bessel_i`] or [`bessel_i_scaled`].
pub fn bessel_i(order: u32, x: f64) -> Result<f64, SpecialError> {
    let ln = ln_bessel_i(order, x)?;
    if ln >= f64::MAX.ln() {
        return Err(SpecialError::Overflow {
            function: "bessel_i",
            x,
        });
    }
    Ok(ln.exp())
}

/// Exponentially scaled `e^{-x} I_order(x)`.
pub fn bessel_i_scaled(order: u32, x: f64) -> Result<f64, SpecialError> {
    Ok((ln_bessel_i(order, x)? - x).exp())
}

/// `ln I_order(x)`; `-inf` at `x = 0` for positive orders.
pub fn ln_bessel_i(order: u32, x: f64) -> Result<f64, SpecialError> {
    ln_bessel_i_with(order, x, &Tolerance::default())
}

/// Power series `sum_k (x/2)^{2k+n} / (k! (k+n)!)` summed outward from its
/// largest term, so the work grows like `sqrt(x)` rather than `x`.
pub(crate) fn ln_bessel_i_with(order: u32, x: f64, tol: &Tolerance) -> Result<f64, SpecialError> {
    if x.is_nan() || x < 0.0 {
        return Err(SpecialError::Domain("bessel argument must be >= 0"));
    }
    if x.is_infinite() {
        return Ok(f64::INFINITY);
    }
    if x == 0.0 {
        return Ok(if order == 0 { 0.0 } else { f64::NEG_INFINITY });
    }
    let n = f64::from(order);
    let q = 0.25 * x * x;
    let peak = ((-n + (n * n + x * x).sqrt()) * 0.5).floor().max(0.0) as u64;
    let nn = u64::from(order);
    let ln_peak = (2.0 * peak as f64 + n) * (0.5 * x).ln()
        - ln_factorial(peak)
        - ln_factorial(peak + nn);

    let mut sum = 1.0;
    let mut terms = 1usize;

    // upward from the peak
    let mut term = 1.0;
    let mut k = peak;
    loop {
        let r = q / ((k + 1) as f64 * (k + 1 + nn) as f64);
        term *= r;
        sum += term;
        k += 1;
        terms += 1;
        let r_next = q / ((k + 1) as f64 * (k + 1 + nn) as f64);
        if r_next < 1.0 && term * r_next / (1.0 - r_next) <= tol.rel_eps * sum {
            break;
        }
        if terms >= tol.max_terms {
            return Err(non_convergence(ln_peak, sum, term, terms));
        }
    }

    // downward from the peak
    let mut term = 1.0;
    let mut k = peak;
    while k > 0 {
        let r = (k as f64) * ((k + nn) as f64) / q;
        term *= r;
        sum += term;
        k -= 1;
        terms += 1;
        let r_next = (k as f64) * ((k + nn) as f64) / q;
        if r_next < 1.0 && term * r_next / (1.0 - r_next) <= tol.rel_eps * sum {
            break;
        }
        if terms >= tol.max_terms {
            return Err(non_convergence(ln_peak, sum, term, terms));
        }
    }

    Ok(ln_peak + sum.ln())
}

fn non_convergence(ln_peak: f64, sum: f64, term: f64, terms: usize) -> SpecialError {
    SpecialError::NonConvergence {
        partial: (ln_peak + sum.ln()).exp(),
        bound: (ln_peak + term.ln()).exp(),
        terms,
    }
}
