//! JSON run configuration. Field names carry their units; dB and speed
//! inputs are converted to the library's linear quantities here and
//! nowhere else.

use serde::{Deserialize, Serialize};

use super::CliError;
use crate::aoi_metrics::MaxTx;
use crate::channel::{db_to_linear, doppler_from_speed, FadingParams, RateThreshold};
use crate::energy::PowerProfile;
use crate::pep::PacketParams;
use crate::scenario::{CostShape, LinkConfig, ProtocolConfig, Scenario};
use crate::simkit::SimConfig;
use crate::sweep::{MinimizeOptions, Objective, Output, SweepSpec, SweepVariable};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub link: LinkSection,
    pub protocol: ProtocolSection,
    #[serde(default)]
    pub power: PowerSection,
    /// Packet error probability supplied directly, bypassing the channel.
    #[serde(default)]
    pub p: Option<f64>,
    #[serde(default)]
    pub sim: SimSection,
    #[serde(default)]
    pub sweep: Option<SweepSection>,
    #[serde(default)]
    pub minimize: Option<MinimizeSection>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LinkSection {
    pub n_antennas: Option<u32>,
    #[serde(default)]
    pub rician_k: f64,
    /// Per-branch average SNR.
    pub snr_db: Option<f64>,
    /// Either `doppler_hz`, or `speed_mps` together with `carrier_hz`.
    pub doppler_hz: Option<f64>,
    pub speed_mps: Option<f64>,
    pub carrier_hz: Option<f64>,
    pub t_packet_s: f64,
    pub rate_bps_hz: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProtocolSection {
    pub max_tx: Option<MaxTx>,
    /// A number, `"linear"`, or `"generation_rate"` for `a = 1 - p`.
    pub a: CostField,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum CostField {
    Value(f64),
    Named(CostName),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CostName {
    Linear,
    GenerationRate,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PowerSection {
    pub p_sense_w: f64,
    pub p_tx_w: f64,
    pub p_rx_w: f64,
}

impl Default for PowerSection {
    fn default() -> Self {
        Self {
            p_sense_w: 1.0,
            p_tx_w: 1.0,
            p_rx_w: 1.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimSection {
    pub seed: Option<u64>,
    pub n_packets: Option<u64>,
    pub sim_duration_s: Option<f64>,
    pub replication_count: Option<u32>,
    pub time_step_s: Option<f64>,
    pub n_sinusoids: Option<u32>,
    pub los_arrival_angle_rad: Option<f64>,
    pub threads: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSection {
    pub variable: SweepVariable,
    /// Explicit grid, or `range` for evenly spaced points.
    pub grid: Option<Vec<f64>>,
    pub range: Option<RangeSection>,
    #[serde(default)]
    pub outputs: Vec<Output>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RangeSection {
    pub start: f64,
    pub stop: f64,
    pub points: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MinimizeSection {
    #[serde(default = "default_objective")]
    pub objective: Objective,
    #[serde(default = "default_variable")]
    pub variable: SweepVariable,
    pub bracket: (f64, f64),
    pub grid_points: Option<usize>,
    pub tol: Option<f64>,
}

fn default_objective() -> Objective {
    Objective::Eta
}

fn default_variable() -> SweepVariable {
    SweepVariable::Rate
}

/// Configuration path of a library parameter name.
pub(crate) fn config_field(field: &str) -> String {
    let section = match field {
        "n_antennas" | "rician_k" | "doppler_hz" | "t_packet_s" | "rate_bps_hz" => "link",
        "avg_snr" | "snr_db" => return "link.snr_db".into(),
        "gamma_th" => return "link.rate_bps_hz".into(),
        "a" | "max_tx" => "protocol",
        "p_sense_w" | "p_tx_w" | "p_rx_w" => "power",
        "seed" | "n_packets" | "sim_duration_s" | "replication_count" | "time_step_s"
        | "n_sinusoids" | "los_arrival_angle_rad" | "threads" => "sim",
        _ => return field.into(),
    };
    format!("{section}.{field}")
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self, CliError> {
        let de = &mut serde_json::Deserializer::from_str(text);
        serde_path_to_error::deserialize(de).map_err(|e| {
            let path = e.path().to_string();
            CliError::config(
                (path != ".").then_some(path),
                e.into_inner().to_string(),
            )
        })
    }

    /// The operating point. A field named by `swept` may be absent; it is
    /// filled with a placeholder that every sweep point overrides.
    pub fn scenario(&self, swept: Option<SweepVariable>) -> Result<Scenario, CliError> {
        let l = &self.link;
        let need = |v: Option<f64>, var: SweepVariable, field: &str| -> Result<f64, CliError> {
            match (v, swept == Some(var)) {
                (Some(x), _) => Ok(x),
                (None, true) => Ok(1.0),
                (None, false) => Err(CliError::missing(field)),
            }
        };
        let snr = db_to_linear(need(l.snr_db, SweepVariable::SnrDb, "link.snr_db")?);
        let rate = need(l.rate_bps_hz, SweepVariable::Rate, "link.rate_bps_hz")?;
        let n = need(l.n_antennas.map(f64::from), SweepVariable::NAntennas, "link.n_antennas")? as u32;
        let fd = self.doppler_hz()?;
        let fading = FadingParams::new(n, l.rician_k, snr, fd).map_err(CliError::from_lib)?;
        let packet = PacketParams::new(l.t_packet_s).map_err(CliError::from_lib)?;
        let rate = RateThreshold::new(rate).map_err(CliError::from_lib)?;

        let max_tx = match (self.protocol.max_tx, swept == Some(SweepVariable::MaxTx)) {
            (Some(m), _) => m,
            (None, true) => MaxTx::Unbounded,
            (None, false) => return Err(CliError::missing("protocol.max_tx")),
        };
        let cost = match self.protocol.a {
            CostField::Value(a) if a.is_finite() => CostShape::Fixed(a),
            CostField::Value(_) => return Err(CliError::config(Some("protocol.a".into()), "must be finite")),
            CostField::Named(CostName::Linear) => CostShape::Fixed(0.0),
            CostField::Named(CostName::GenerationRate) => CostShape::GenerationRate,
        };
        let pw = &self.power;
        let power = PowerProfile::new(pw.p_sense_w, pw.p_tx_w, pw.p_rx_w).map_err(CliError::from_lib)?;
        Ok(Scenario {
            link: LinkConfig {
                fading,
                packet,
                rate,
            },
            protocol: ProtocolConfig { max_tx, cost },
            power,
        })
    }

    fn doppler_hz(&self) -> Result<f64, CliError> {
        let l = &self.link;
        match (l.doppler_hz, l.speed_mps, l.carrier_hz) {
            (Some(fd), None, None) => Ok(fd),
            (None, Some(u), Some(fc)) => {
                if !(u >= 0.0 && u.is_finite()) {
                    return Err(CliError::config(Some("link.speed_mps".into()), "must be finite and >= 0"));
                }
                if !(fc > 0.0 && fc.is_finite()) {
                    return Err(CliError::config(Some("link.carrier_hz".into()), "must be finite and > 0"));
                }
                Ok(doppler_from_speed(u, fc))
            }
            (None, None, None) => Err(CliError::config(
                Some("link.doppler_hz".into()),
                "give doppler_hz, or speed_mps with carrier_hz",
            )),
            _ => Err(CliError::config(
                Some("link.doppler_hz".into()),
                "give either doppler_hz or speed_mps with carrier_hz, not both",
            )),
        }
    }

    /// Simulation settings; `seed` overrides the configured seed.
    pub fn sim_config(&self, seed: u64) -> SimConfig {
        let s = &self.sim;
        let d = SimConfig::default();
        SimConfig {
            seed,
            n_packets: s.n_packets.unwrap_or(d.n_packets),
            sim_duration_s: s.sim_duration_s.unwrap_or(d.sim_duration_s),
            replication_count: s.replication_count.unwrap_or(d.replication_count),
            time_step_s: s.time_step_s.or(d.time_step_s),
            n_sinusoids: s.n_sinusoids.unwrap_or(d.n_sinusoids),
            los_arrival_angle_rad: s.los_arrival_angle_rad.unwrap_or(d.los_arrival_angle_rad),
            threads: s.threads.or(d.threads),
        }
    }

    pub fn sweep_spec(&self) -> Result<SweepSpec, CliError> {
        let sw = self
            .sweep
            .as_ref()
            .ok_or_else(|| CliError::missing("sweep"))?;
        let grid = match (&sw.grid, sw.range) {
            (Some(g), None) => g.clone(),
            (None, Some(r)) => crate::sweep::linspace(r.start, r.stop, r.points),
            _ => {
                return Err(CliError::config(
                    Some("sweep.grid".into()),
                    "give exactly one of grid or range",
                ))
            }
        };
        let base = self.scenario(Some(sw.variable))?;
        SweepSpec::new(sw.variable, grid, base, sw.outputs.clone()).map_err(CliError::from_lib)
    }

    pub fn minimize_options(&self) -> Result<(MinimizeSection, MinimizeOptions), CliError> {
        let m = self.minimize.ok_or_else(|| CliError::missing("minimize"))?;
        let d = MinimizeOptions::default();
        Ok((
            m,
            MinimizeOptions {
                grid_points: m.grid_points.unwrap_or(d.grid_points),
                tol: m.tol.unwrap_or(d.tol),
            },
        ))
    }
}
