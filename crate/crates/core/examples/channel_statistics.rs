//! Outage CDF, level crossing rate and average fade duration of the
//! MRC output SNR.

use aoi_link::channel::{avg_fade_duration, db_to_linear, lcr, snr_cdf, snr_cdf_massive_n, FadingParams, RateThreshold};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let rate = RateThreshold::new(1.0)?;
    let th = rate.gamma_th();
    println!("R = 1 bps/Hz, gamma_th = {th}, f_D = 50 Hz, 5 dB per branch\n");
    println!("{:>3} {:>5} {:>12} {:>12} {:>12}", "N", "K", "F", "LCR (1/s)", "AFD (ms)");
    for n in [1, 2, 4, 8] {
        for k in [0.0, 3.0, 10.0] {
            let fp = FadingParams::new(n, k, db_to_linear(5.0), 50.0)?;
            println!(
                "{n:>3} {k:>5} {:>12.4e} {:>12.4} {:>12.4}",
                snr_cdf(&fp, th)?,
                lcr(&fp, th)?,
                1e3 * avg_fade_duration(&fp, th)?
            );
        }
    }

    // leading term of the deep-outage tail, gamma_th << N avg_snr
    let fp = FadingParams::new(64, 0.0, 1.0, 50.0)?;
    println!("\nN = 64 Rayleigh at 0 dB");
    for th in [0.5, 4.0, 16.0] {
        println!(
            "  gamma_th = {th:>4}: exact F = {:.6e}, large-array approximation = {:.6e}",
            snr_cdf(&fp, th)?,
            snr_cdf_massive_n(&fp, th)?
        );
    }
    Ok(())
}
