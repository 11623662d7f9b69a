//! Normalized eta and eta_p across the target rate.

use aoi_link::aoi_metrics::{MaxTx, MetricValue};
use aoi_link::channel::{db_to_linear, FadingParams, RateThreshold};
use aoi_link::energy::PowerProfile;
use aoi_link::pep::PacketParams;
use aoi_link::scenario::{CostShape, LinkConfig, ProtocolConfig, Scenario};
use aoi_link::sweep::{normalize, run_sweep, SweepSpec, SweepVariable};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let base = Scenario {
        link: LinkConfig {
            fading: FadingParams::new(4, 0.0, db_to_linear(0.0), 100.0)?,
            packet: PacketParams::new(0.02)?,
            rate: RateThreshold::new(1.0)?,
        },
        protocol: ProtocolConfig {
            max_tx: MaxTx::Unbounded,
            cost: CostShape::GenerationRate,
        },
        power: PowerProfile::uniform(1.0)?,
    };
    let spec = SweepSpec::linspace(SweepVariable::Rate, 0.1, 2.0, 20, base)?;
    let rows = run_sweep(&spec)?;
    let eta: Vec<MetricValue> = rows.iter().map(|r| r.report.eta).collect();
    let eta_p: Vec<MetricValue> = rows.iter().map(|r| r.report.eta_p).collect();
    let eta = normalize(&eta).ok_or("every eta diverges")?;
    let eta_p = normalize(&eta_p).ok_or("every eta_p diverges")?;
    println!("{:>6} {:>10} {:>10} {:>10}", "R", "p", "eta/min", "eta_p/min");
    for ((row, e), ep) in rows.iter().zip(eta).zip(eta_p) {
        let bar = "#".repeat((40.0 / e.or_infinity()).round() as usize);
        println!("{:>6.2} {:>10.4} {:>10.4} {:>10.4}  {bar}", row.x, row.report.p, e.or_infinity(), ep.or_infinity());
    }
    Ok(())
}
