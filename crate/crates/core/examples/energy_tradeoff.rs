//! Energy efficiency and the AoI-to-efficiency ratios for a full scenario.

use aoi_link::aoi_metrics::MaxTx;
use aoi_link::channel::{db_to_linear, FadingParams, RateThreshold};
use aoi_link::energy::PowerProfile;
use aoi_link::pep::PacketParams;
use aoi_link::scenario::{CostShape, LinkConfig, ProtocolConfig, Scenario};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let power = PowerProfile::new(0.05, 0.5, 0.1)?;
    println!("{:>3} {:>6} {:>10} {:>10} {:>10} {:>10}", "N", "R", "p", "EE", "eta", "eta_p");
    for n in [1, 2, 4] {
        for r in [0.5, 1.0, 2.0, 3.0] {
            let s = Scenario {
                link: LinkConfig {
                    fading: FadingParams::new(n, 1.0, db_to_linear(3.0), 30.0)?,
                    packet: PacketParams::new(5e-3)?,
                    rate: RateThreshold::new(r)?,
                },
                protocol: ProtocolConfig {
                    max_tx: MaxTx::bounded(4)?,
                    cost: CostShape::Fixed(20.0),
                },
                power,
            };
            let m = s.evaluate()?;
            println!(
                "{n:>3} {r:>6} {:>10.4e} {:>10.3} {:>10.5} {:>10.5}",
                m.p,
                m.ee,
                m.eta.or_infinity(),
                m.eta_p.or_infinity()
            );
            for note in &m.regime_notes {
                println!("    note: {note}");
            }
        }
    }
    Ok(())
}
