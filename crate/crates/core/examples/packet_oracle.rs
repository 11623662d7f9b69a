//! Packet-level Monte Carlo against the closed-form AoI.

use aoi_link::aoi_metrics::{avg_aoi, avg_paoi, exp_y, exp_z, AoiParams, MaxTx};
use aoi_link::simkit::{simulate_packet_process, SimConfig, SimResult};

fn row(name: &str, sim: &SimResult, exact: f64) {
    println!(
        "{name:>9} {:>12.6} {:>10.2e} {:>12.6} {:>7.2}",
        sim.estimate,
        sim.std_error,
        exact,
        sim.z_score(exact)
    );
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let (p, m) = (0.35, MaxTx::bounded(3)?);
    let params = AoiParams::new(0.8, 0.05, m)?;
    let cfg = SimConfig {
        seed: 2024,
        n_packets: 50_000,
        replication_count: 8,
        ..SimConfig::default()
    };
    let out = simulate_packet_process(p, &params, &cfg)?;
    println!("{:>9} {:>12} {:>10} {:>12} {:>7}", "", "estimate", "std err", "exact", "z");
    row("avg AoI", &out.avg_aoi, avg_aoi(p, &params)?.unwrap());
    row("avg PAoI", &out.avg_paoi, avg_paoi(p, &params)?.unwrap());
    row("E[Y]", &out.mean_y, exp_y(p)?);
    row("E[Z]", &out.mean_z, exp_z(p, m)?);
    println!("\nattempt histogram: {:?}", out.z_histogram);
    Ok(())
}
