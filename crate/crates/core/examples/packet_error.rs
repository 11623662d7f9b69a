//! Packet error probability from the two-state Markov outage model.

use aoi_link::channel::{db_to_linear, FadingParams, RateThreshold};
use aoi_link::pep::{pep_breakdown, pep_short_packet_approx, pep_worst_case, PacketParams};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let th = RateThreshold::new(1.5)?.gamma_th();
    let snr = db_to_linear(8.0);
    println!("R = 1.5 bps/Hz, 8 dB per branch, K = 2\n");
    println!("{:>7} {:>9} {:>3} {:>11} {:>11} {:>11} {:>11}", "f_D", "T_p", "N", "F", "LCR", "p", "approx");
    for fd in [0.0, 10.0, 100.0] {
        for tp in [1e-3, 1e-2] {
            for n in [1, 4] {
                let fp = FadingParams::new(n, 2.0, snr, fd)?;
                let pp = PacketParams::new(tp)?;
                let b = pep_breakdown(&fp, &pp, th)?;
                let approx = pep_short_packet_approx(&fp, &pp, th)?;
                println!(
                    "{fd:>7} {tp:>9} {n:>3} {:>11.4e} {:>11.4} {:>11.4e} {:>11.4e}",
                    b.cdf, b.lcr, b.p, approx
                );
            }
        }
    }
    println!(
        "\nsingle-antenna Rayleigh worst case at f_D = 100 Hz, T_p = 10 ms: {:.4e}",
        pep_worst_case(snr, 100.0, 1e-2, th)
    );
    Ok(())
}
