//! Energy efficiency and the age-to-efficiency ratios.

use serde::{Deserialize, Serialize};

use crate::aoi_metrics::{exp_z, MaxTx, MetricValue};
use crate::error::{Error, Result};

/// Sensing, transmit and per-antenna receive power, watts.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PowerProfile {
    p_sense_w: f64,
    p_tx_w: f64,
    p_rx_w: f64,
}

impl PowerProfile {
    pub fn new(p_sense_w: f64, p_tx_w: f64, p_rx_w: f64) -> Result<Self> {
        for (field, v) in [("p_sense_w", p_sense_w), ("p_tx_w", p_tx_w), ("p_rx_w", p_rx_w)] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::invalid(field, "must be finite and > 0"));
            }
        }
        Ok(Self {
            p_sense_w,
            p_tx_w,
            p_rx_w,
        })
    }

    /// Same power `w` for every block.
    pub fn uniform(w: f64) -> Result<Self> {
        Self::new(w, w, w)
    }

    pub fn p_sense_w(&self) -> f64 {
        self.p_sense_w
    }

    pub fn p_tx_w(&self) -> f64 {
        self.p_tx_w
    }

    pub fn p_rx_w(&self) -> f64 {
        self.p_rx_w
    }

    pub fn scaled(&self, c: f64) -> Result<Self> {
        Self::new(c * self.p_sense_w, c * self.p_tx_w, c * self.p_rx_w)
    }
}

/// `R / (P_sx + E[Z~] (P_tx + N P_rx))`, bits/Hz/Joule.
pub fn energy_efficiency(
    rate_bps_hz: f64,
    p: f64,
    max_tx: MaxTx,
    n_antennas: u32,
    power: &PowerProfile,
) -> Result<f64> {
    if !(rate_bps_hz > 0.0 && rate_bps_hz.is_finite()) {
        return Err(Error::invalid("rate_bps_hz", "must be finite and > 0"));
    }
    if n_antennas == 0 {
        return Err(Error::invalid("n_antennas", "must be >= 1"));
    }
    let ez = exp_z(p, max_tx)?;
    let per_attempt = power.p_tx_w + f64::from(n_antennas) * power.p_rx_w;
    Ok(rate_bps_hz / (power.p_sense_w + ez * per_attempt))
}

/// `avg_aoi / EE`.
pub fn eta(avg_aoi: MetricValue, ee: f64) -> MetricValue {
    ratio(avg_aoi, ee)
}

/// `avg_paoi / EE`.
pub fn eta_p(avg_paoi: MetricValue, ee: f64) -> MetricValue {
    ratio(avg_paoi, ee)
}

fn ratio(age: MetricValue, ee: f64) -> MetricValue {
    match age {
        MetricValue::Finite(c) if ee > 0.0 && (c / ee).is_finite() => MetricValue::Finite(c / ee),
        _ => MetricValue::Divergent,
    }
}
