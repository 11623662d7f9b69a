//! First- and second-order statistics of the post-MRC SNR over `N`
//! independent Rician branches.
//!
//! `avg_snr` is the per-branch average SNR: each branch has unit mean power
//! and the combined SNR is `avg_snr * sum_i |h_i|^2`. All SNR quantities are
//! linear scale.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::specfun::{ln_bessel_i, ln_factorial, marcum_q_pair, reg_gamma_pair};

/// Below this Rician factor the channel is treated as Rayleigh; the
/// Rician LCR expression is 0/0 at `K = 0`.
pub const RAYLEIGH_K_THRESHOLD: f64 = 1e-12;

pub(crate) const SQRT_2PI: f64 = 2.506_628_274_631_000_5;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FadingParams {
    n_antennas: u32,
    rician_k: f64,
    avg_snr: f64,
    doppler_hz: f64,
}

impl FadingParams {
    pub fn new(n_antennas: u32, rician_k: f64, avg_snr: f64, doppler_hz: f64) -> Result<Self> {
        if n_antennas == 0 {
            return Err(Error::invalid("n_antennas", "must be >= 1"));
        }
        if !(rician_k >= 0.0 && rician_k.is_finite()) {
            return Err(Error::invalid("rician_k", "must be finite and >= 0"));
        }
        if !(avg_snr > 0.0 && avg_snr.is_finite()) {
            return Err(Error::invalid("avg_snr", "must be finite and > 0"));
        }
        if !(doppler_hz >= 0.0 && doppler_hz.is_finite()) {
            return Err(Error::invalid("doppler_hz", "must be finite and >= 0"));
        }
        Ok(Self {
            n_antennas,
            rician_k,
            avg_snr,
            doppler_hz,
        })
    }

    pub fn n_antennas(&self) -> u32 {
        self.n_antennas
    }

    pub fn rician_k(&self) -> f64 {
        self.rician_k
    }

    pub fn avg_snr(&self) -> f64 {
        self.avg_snr
    }

    pub fn doppler_hz(&self) -> f64 {
        self.doppler_hz
    }

    pub fn is_rayleigh(&self) -> bool {
        self.rician_k < RAYLEIGH_K_THRESHOLD
    }

    pub fn with_n_antennas(self, n: u32) -> Result<Self> {
        Self::new(n, self.rician_k, self.avg_snr, self.doppler_hz)
    }

    pub fn with_rician_k(self, k: f64) -> Result<Self> {
        Self::new(self.n_antennas, k, self.avg_snr, self.doppler_hz)
    }

    pub fn with_avg_snr(self, snr: f64) -> Result<Self> {
        Self::new(self.n_antennas, self.rician_k, snr, self.doppler_hz)
    }

    pub fn with_doppler_hz(self, fd: f64) -> Result<Self> {
        Self::new(self.n_antennas, self.rician_k, self.avg_snr, fd)
    }
}

/// Maximum Doppler shift `u / lambda` for speed `u` at carrier `f_c`.
pub fn doppler_from_speed(speed_mps: f64, carrier_hz: f64) -> f64 {
    const C: f64 = 299_792_458.0;
    speed_mps * carrier_hz / C
}

pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

/// Target rate `R` and its SNR threshold `2^R - 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RateThreshold {
    rate_bps_hz: f64,
    gamma_th: f64,
}

impl RateThreshold {
    pub fn new(rate_bps_hz: f64) -> Result<Self> {
        if !(rate_bps_hz > 0.0 && rate_bps_hz.is_finite()) {
            return Err(Error::invalid("rate_bps_hz", "must be finite and > 0"));
        }
        Ok(Self {
            rate_bps_hz,
            gamma_th: rate_bps_hz.exp2() - 1.0,
        })
    }

    pub fn rate_bps_hz(&self) -> f64 {
        self.rate_bps_hz
    }

    pub fn gamma_th(&self) -> f64 {
        self.gamma_th
    }
}

fn check_threshold(gamma_th: f64) -> Result<()> {
    if gamma_th.is_nan() || gamma_th < 0.0 {
        return Err(Error::invalid("gamma_th", "must be >= 0"));
    }
    Ok(())
}

/// `(F(gamma_th), 1 - F(gamma_th))` with both sides accurate.
pub fn snr_cdf_pair(fp: &FadingParams, gamma_th: f64) -> Result<(f64, f64)> {
    check_threshold(gamma_th)?;
    if gamma_th == 0.0 {
        return Ok((0.0, 1.0));
    }
    let n = fp.n_antennas;
    if fp.is_rayleigh() {
        // Erlang CDF
        return Ok(reg_gamma_pair(n, gamma_th / fp.avg_snr)?);
    }
    let k = fp.rician_k;
    let a = (2.0 * f64::from(n) * k).sqrt();
    let b = (2.0 * gamma_th * (k + 1.0) / fp.avg_snr).sqrt();
    let (q, c) = marcum_q_pair(n, a, b)?;
    Ok((c, q))
}

/// CDF of the combined SNR, `1 - Q_N(sqrt(2NK), sqrt(2 gamma_th (K+1) / avg_snr))`.
pub fn snr_cdf(fp: &FadingParams, gamma_th: f64) -> Result<f64> {
    snr_cdf_pair(fp, gamma_th).map(|(f, _)| f)
}

/// Level crossing rate of the combined SNR at `gamma_th`, crossings per second.
///
/// The Bessel factor and the exponential are paired in log space.
pub fn lcr(fp: &FadingParams, gamma_th: f64) -> Result<f64> {
    check_threshold(gamma_th)?;
    let fd = fp.doppler_hz;
    if fd == 0.0 || gamma_th == 0.0 {
        return Ok(0.0);
    }
    let n = f64::from(fp.n_antennas);
    let ln_shape = if fp.is_rayleigh() {
        let x = gamma_th / fp.avg_snr;
        (n - 0.5) * x.ln() - x - ln_factorial(u64::from(fp.n_antennas - 1))
    } else {
        let k = fp.rician_k;
        let u = gamma_th * (k + 1.0) / fp.avg_snr;
        let nk = n * k;
        let z = 2.0 * (u * nk).sqrt();
        0.5 * n * u.ln() + ln_bessel_i(fp.n_antennas - 1, z)? - u - nk - 0.5 * (n - 1.0) * nk.ln()
    };
    Ok(SQRT_2PI * fd * ln_shape.exp())
}

/// Large-array approximation `x^N / N! * e^{-x}`, `x = gamma_th / avg_snr`,
/// of the Rayleigh CDF. Only meaningful for large `N`; it is the leading
/// term of the Erlang tail series and always undershoots the exact CDF.
pub fn snr_cdf_massive_n(fp: &FadingParams, gamma_th: f64) -> Result<f64> {
    check_threshold(gamma_th)?;
    if !fp.is_rayleigh() {
        return Err(Error::invalid(
            "rician_k",
            "the large-array CDF approximation is defined for Rayleigh fading only",
        ));
    }
    if gamma_th == 0.0 {
        return Ok(0.0);
    }
    let x = gamma_th / fp.avg_snr;
    let n = fp.n_antennas;
    Ok((f64::from(n) * x.ln() - ln_factorial(u64::from(n)) - x)
        .exp()
        .min(1.0))
}

/// Average fade duration `F / LCR` at `gamma_th`, seconds.
pub fn avg_fade_duration(fp: &FadingParams, gamma_th: f64) -> Result<f64> {
    let f = snr_cdf(fp, gamma_th)?;
    let l = lcr(fp, gamma_th)?;
    Ok(if l > 0.0 { f / l } else { f64::INFINITY })
}
