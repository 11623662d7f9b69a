//! Rate that minimizes eta and eta_p for an eight-antenna Rayleigh link.

use aoi_link::aoi_metrics::MaxTx;
use aoi_link::channel::{FadingParams, RateThreshold};
use aoi_link::energy::PowerProfile;
use aoi_link::pep::PacketParams;
use aoi_link::scenario::{CostShape, LinkConfig, ProtocolConfig, Scenario};
use aoi_link::sweep::{minimize_eta, MinimizeOptions, Objective, SweepVariable};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let base = Scenario {
        link: LinkConfig {
            fading: FadingParams::new(8, 0.0, 1.0, 200.0)?,
            packet: PacketParams::new(0.1)?,
            rate: RateThreshold::new(1.0)?,
        },
        protocol: ProtocolConfig {
            max_tx: MaxTx::Unbounded,
            cost: CostShape::GenerationRate,
        },
        power: PowerProfile::uniform(1.0)?,
    };
    for objective in [Objective::Eta, Objective::EtaP] {
        let r = minimize_eta(objective, SweepVariable::Rate, (0.1, 4.0), &base, MinimizeOptions::default())?;
        let p = SweepVariable::Rate.apply(&base, r.argmin)?.evaluate()?.p;
        println!(
            "{objective:?}: R* = {:.4} bps/Hz, minimum {:.5}, p(R*) = {p:.4}, {} evaluations",
            r.argmin, r.min_value, r.evaluations
        );
    }
    Ok(())
}
