//! Discrete sweeps over receive antennas and the retransmission cap.

use aoi_link::aoi_metrics::MaxTx;
use aoi_link::channel::{db_to_linear, FadingParams, RateThreshold};
use aoi_link::energy::PowerProfile;
use aoi_link::pep::PacketParams;
use aoi_link::scenario::{CostShape, LinkConfig, ProtocolConfig, Scenario};
use aoi_link::sweep::{run_sweep, Output, SweepSpec, SweepVariable};

fn scenario(snr_db: f64) -> Result<Scenario, aoi_link::Error> {
    Ok(Scenario {
        link: LinkConfig {
            fading: FadingParams::new(1, 0.0, db_to_linear(snr_db), 100.0)?,
            packet: PacketParams::new(0.01)?,
            rate: RateThreshold::new(1.0)?,
        },
        protocol: ProtocolConfig {
            max_tx: MaxTx::Unbounded,
            cost: CostShape::Fixed(0.4),
        },
        power: PowerProfile::uniform(1.0)?,
    })
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let antennas = vec![1.0, 2.0, 4.0, 8.0, 16.0, 32.0, 64.0];
    for snr_db in [-5.0, 20.0] {
        let spec = SweepSpec::new(SweepVariable::NAntennas, antennas.clone(), scenario(snr_db)?, Output::ALL.to_vec())?;
        println!("{snr_db} dB per branch");
        for row in run_sweep(&spec)? {
            println!("  N = {:>2}: p = {:.3e}, eta = {:.5}", row.x, row.report.p, row.report.eta.or_infinity());
        }
    }

    let mut base = scenario(2.0)?;
    base.protocol.cost = CostShape::Fixed(2.0);
    let spec = SweepSpec::new(SweepVariable::MaxTx, (1..=8).map(f64::from).collect(), base, Output::ALL.to_vec())?;
    println!("\ncap on transmissions at 2 dB, a = 2");
    for row in run_sweep(&spec)? {
        println!(
            "  M = {}: avg AoI = {:.5}, avg PAoI = {:.5}, EE = {:.4}",
            row.x,
            row.report.avg_aoi.or_infinity(),
            row.report.avg_paoi.or_infinity(),
            row.report.ee
        );
    }
    Ok(())
}
