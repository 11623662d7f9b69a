//! Generalized Marcum Q, modified Bessel and incomplete gamma functions.

use aoi_link::specfun::{bessel_i, ln_bessel_i, marcum_q, marcum_q_pair, reg_gamma_q};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    println!("{:>3} {:>6} {:>6} {:>22}", "N", "a", "b", "Q_N(a, b)");
    for n in [1, 2, 8] {
        for (a, b) in [(0.0, 1.0), (1.0, 1.0), (3.0, 2.0), (10.0, 12.0)] {
            println!("{n:>3} {a:>6} {b:>6} {:>22.15e}", marcum_q(n, a, b)?);
        }
    }

    // deep tails keep full relative precision in both directions
    let (q, one_minus_q) = marcum_q_pair(4, 2.0, 12.0)?;
    println!("\nQ_4(2, 12) = {q:.6e}, 1 - Q_4(2, 12) = {one_minus_q:.17}");
    let (q, one_minus_q) = marcum_q_pair(4, 12.0, 0.5)?;
    println!("Q_4(12, 0.5) = {q:.17}, 1 - Q_4(12, 0.5) = {one_minus_q:.6e}");

    // a = 0 reduces to the regularized upper incomplete gamma
    println!("\nQ_3(0, 2) = {:.15}", marcum_q(3, 0.0, 2.0)?);
    println!("Q(3, 2)   = {:.15}", reg_gamma_q(3, 2.0)?);

    println!("\nI_2(5)         = {:.15e}", bessel_i(2, 5.0)?);
    println!("ln I_0(50000)  = {:.15}", ln_bessel_i(0, 5e4)?);
    Ok(())
}
