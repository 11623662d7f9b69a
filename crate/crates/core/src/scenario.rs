//! A full operating point (link, protocol, power) and its metrics.

use serde::{Deserialize, Serialize};

use crate::aoi_metrics::{avg_aoi, avg_paoi, AoiParams, MaxTx, MetricValue, MetricsReport};
use crate::channel::{FadingParams, RateThreshold};
use crate::energy::{energy_efficiency, eta, eta_p, PowerProfile};
use crate::error::Result;
use crate::pep::{pep_breakdown, PacketParams, PepBreakdown, PepCache};

/// Physical layer: fading, packet length and target rate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LinkConfig {
    pub fading: FadingParams,
    pub packet: PacketParams,
    pub rate: RateThreshold,
}

/// How the cost parameter `a` is chosen.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CostShape {
    /// A fixed `a`; `0.0` is the linear age.
    Fixed(f64),
    /// `a = 1 - p`, the packet generation rate per slot, re-evaluated at
    /// every operating point.
    GenerationRate,
}

impl CostShape {
    pub fn resolve(self, p: f64) -> f64 {
        match self {
            Self::Fixed(a) => a,
            Self::GenerationRate => 1.0 - p,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProtocolConfig {
    pub max_tx: MaxTx,
    pub cost: CostShape,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Scenario {
    pub link: LinkConfig,
    pub protocol: ProtocolConfig,
    pub power: PowerProfile,
}

impl Scenario {
    pub fn pep(&self, cache: Option<&PepCache>) -> Result<PepBreakdown> {
        let gamma_th = self.link.rate.gamma_th();
        match cache {
            Some(c) => c.get_or_compute(&self.link.fading, &self.link.packet, gamma_th),
            None => pep_breakdown(&self.link.fading, &self.link.packet, gamma_th),
        }
    }

    pub fn aoi_params(&self, p: f64) -> Result<AoiParams> {
        AoiParams::new(
            self.protocol.cost.resolve(p),
            self.link.packet.t_packet_s(),
            self.protocol.max_tx,
        )
    }

    /// Every metric, with `p` from the channel model.
    pub fn evaluate(&self) -> Result<MetricsReport> {
        self.evaluate_cached(None)
    }

    pub fn evaluate_cached(&self, cache: Option<&PepCache>) -> Result<MetricsReport> {
        let b = self.pep(cache)?;
        let mut notes = Vec::new();
        if self.link.fading.doppler_hz() == 0.0 {
            notes.push("static source: p equals the SNR CDF".to_string());
        }
        if b.clamped {
            notes.push("PEP clamped to [0, 1] after rounding".to_string());
        }
        self.report(b.p, notes)
    }

    /// Every metric at a supplied `p`, bypassing the channel model.
    pub fn evaluate_with_p(&self, p: f64) -> Result<MetricsReport> {
        self.report(p, vec!["p supplied directly".to_string()])
    }

    fn report(&self, p: f64, mut notes: Vec<String>) -> Result<MetricsReport> {
        let params = self.aoi_params(p)?;
        if let CostShape::GenerationRate = self.protocol.cost {
            notes.push(format!("a coupled to 1 - p: a = {}", params.a()));
        }
        if p < 1.0 && params.uses_linear_branch(p) {
            notes.push("linear branch used".to_string());
        }
        let c = avg_aoi(p, &params)?;
        let cp = avg_paoi(p, &params)?;
        if c.is_divergent() {
            notes.push(if p >= 1.0 {
                "every transmission fails (p = 1)".to_string()
            } else {
                "geometric series diverged: p e^{a T_p} >= 1".to_string()
            });
        }
        let ee = if p < 1.0 {
            energy_efficiency(
                self.link.rate.rate_bps_hz(),
                p,
                self.protocol.max_tx,
                self.link.fading.n_antennas(),
                &self.power,
            )?
        } else {
            0.0
        };
        Ok(MetricsReport {
            p,
            avg_aoi: c,
            avg_paoi: cp,
            ee,
            eta: eta(c, ee),
            eta_p: eta_p(cp, ee),
            regime_notes: notes,
        })
    }
}

/// Divergent values rank as `+inf`.
pub fn objective_value(report: &MetricsReport, peak: bool) -> f64 {
    let v: MetricValue = if peak { report.eta_p } else { report.eta };
    v.or_infinity()
}
