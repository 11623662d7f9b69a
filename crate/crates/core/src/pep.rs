//! Packet error probability of a `T_p`-long packet: an error occurs if the
//! combined SNR dips below `gamma_th` at any instant of the packet. The
//! outage process is modelled as a two-state Markov chain whose rates come
//! from the SNR CDF and level crossing rate.

use std::collections::HashMap;
use std::sync::RwLock;

use serde::{Deserialize, Serialize};

use crate::channel::{lcr, snr_cdf_pair, FadingParams};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PacketParams {
    t_packet_s: f64,
}

impl PacketParams {
    pub fn new(t_packet_s: f64) -> Result<Self> {
        if !(t_packet_s > 0.0 && t_packet_s.is_finite()) {
            return Err(Error::invalid("t_packet_s", "must be finite and > 0"));
        }
        Ok(Self { t_packet_s })
    }

    pub fn t_packet_s(&self) -> f64 {
        self.t_packet_s
    }
}

/// PEP together with the channel statistics it was built from.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PepBreakdown {
    pub p: f64,
    pub cdf: f64,
    pub lcr: f64,
    /// Set when rounding pushed the raw value outside `[0, 1]`.
    pub clamped: bool,
}

/// `p = 1 - exp(-T_p LCR / (1 - F)) (1 - F)`, evaluated as
/// `F + (1 - F)(1 - exp(-T_p LCR / (1 - F)))` to avoid cancellation.
pub fn pep_breakdown(fp: &FadingParams, pp: &PacketParams, gamma_th: f64) -> Result<PepBreakdown> {
    let (cdf, ccdf) = snr_cdf_pair(fp, gamma_th)?;
    let rate = lcr(fp, gamma_th)?;
    if ccdf <= f64::MIN_POSITIVE || cdf >= 1.0 {
        return Ok(PepBreakdown {
            p: 1.0,
            cdf,
            lcr: rate,
            clamped: false,
        });
    }
    let hazard = pp.t_packet_s * rate / ccdf;
    let raw = cdf + ccdf * -(-hazard).exp_m1();
    let p = raw.clamp(0.0, 1.0);
    Ok(PepBreakdown {
        p,
        cdf,
        lcr: rate,
        clamped: p != raw,
    })
}

pub fn pep(fp: &FadingParams, pp: &PacketParams, gamma_th: f64) -> Result<f64> {
    pep_breakdown(fp, pp, gamma_th).map(|b| b.p)
}

/// Single-antenna Rayleigh PEP, the worst case over `N` and `K`:
/// `1 - exp(-(f_D T_p sqrt(2 pi gamma_th avg_snr) + gamma_th) / avg_snr)`.
pub fn pep_worst_case(avg_snr: f64, doppler_hz: f64, t_packet_s: f64, gamma_th: f64) -> f64 {
    let x = (doppler_hz * t_packet_s * (2.0 * std::f64::consts::PI * gamma_th * avg_snr).sqrt()
        + gamma_th)
        / avg_snr;
    -(-x).exp_m1()
}

/// First-order short-packet form `min(1, F + T_p LCR)`. An approximation,
/// not a bound on [`pep`].
pub fn pep_short_packet_approx(fp: &FadingParams, pp: &PacketParams, gamma_th: f64) -> Result<f64> {
    let (cdf, _) = snr_cdf_pair(fp, gamma_th)?;
    let rate = lcr(fp, gamma_th)?;
    Ok((cdf + pp.t_packet_s * rate).min(1.0))
}

type Key = [u64; 6];

fn key(fp: &FadingParams, pp: &PacketParams, gamma_th: f64) -> Key {
    [
        u64::from(fp.n_antennas()),
        fp.rician_k().to_bits(),
        fp.avg_snr().to_bits(),
        fp.doppler_hz().to_bits(),
        pp.t_packet_s().to_bits(),
        gamma_th.to_bits(),
    ]
}

/// Memo table for [`pep_breakdown`], keyed by the exact bit patterns of
/// the inputs. Shared across sweep workers.
#[derive(Debug, Default)]
pub struct PepCache {
    map: RwLock<HashMap<Key, PepBreakdown>>,
}

impl PepCache {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get_or_compute(
        &self,
        fp: &FadingParams,
        pp: &PacketParams,
        gamma_th: f64,
    ) -> Result<PepBreakdown> {
        let k = key(fp, pp, gamma_th);
        if let Some(hit) = self.map.read().expect("pep cache poisoned").get(&k) {
            return Ok(*hit);
        }
        let value = pep_breakdown(fp, pp, gamma_th)?;
        self.map
            .write()
            .expect("pep cache poisoned")
            .insert(k, value);
        Ok(value)
    }

    pub fn len(&self) -> usize {
        self.map.read().expect("pep cache poisoned").len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}
