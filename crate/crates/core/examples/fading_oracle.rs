//! Sum-of-sinusoids fading simulation against the analytic channel
//! statistics and packet error probability.

use aoi_link::channel::{db_to_linear, lcr, snr_cdf, FadingParams, RateThreshold};
use aoi_link::pep::{pep, PacketParams};
use aoi_link::simkit::{simulate_fading_process, SimConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let th = RateThreshold::new(1.0)?.gamma_th();
    let pp = PacketParams::new(2e-3)?;
    let cfg = SimConfig {
        seed: 11,
        sim_duration_s: 4.0,
        replication_count: 8,
        ..SimConfig::default()
    };
    for (n, k) in [(1, 0.0), (2, 3.0)] {
        let fp = FadingParams::new(n, k, db_to_linear(4.0), 40.0)?;
        let out = simulate_fading_process(&fp, &pp, th, &cfg)?;
        println!("N = {n}, K = {k}, step = {:.3e} s", out.time_step_s);
        for (name, sim, exact) in [
            ("F", out.cdf, snr_cdf(&fp, th)?),
            ("LCR", out.lcr, lcr(&fp, th)?),
            ("p", out.pep, pep(&fp, &pp, th)?),
        ] {
            println!("  {name:>4}: {:.5} +- {:.5}  (analytic {exact:.5})", sim.estimate, sim.std_error);
        }
    }
    Ok(())
}
