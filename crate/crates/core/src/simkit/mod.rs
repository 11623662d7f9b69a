//! Monte-Carlo oracles for the closed forms.
//!
//! * [`simulate_packet_process`] plays the stop-and-wait protocol slot by
//!   slot with i.i.d. packet errors and integrates the non-linear age.
//! * [`simulate_fading_process`] generates correlated Rician fading with a
//!   sum-of-sinusoids model and measures the SNR CDF, level crossing rate
//!   and packet error frequency directly from the time series.
//!
//! Each replication owns a ChaCha stream derived from the master seed, and
//! replications are merged in index order, so results do not depend on
//! the number of worker threads.

mod fading;
mod packet;

pub use fading::{simulate_fading_process, ChannelSimOutput, FadingBranch};
pub use packet::{simulate_packet_process, PacketSimOutput};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const DEFAULT_SINUSOIDS: u32 = 64;

/// Default channel sampling: this many samples per `1 / f_D`.
pub const DEFAULT_SAMPLES_PER_DOPPLER_PERIOD: f64 = 256.0;

/// Coarsest allowed channel sampling, samples per `1 / f_D`.
pub const MIN_SAMPLES_PER_DOPPLER_PERIOD: f64 = 64.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SimConfig {
    pub seed: u64,
    /// Successful receptions per replication (packet oracle).
    pub n_packets: u64,
    /// Simulated seconds per replication (channel oracle).
    pub sim_duration_s: f64,
    pub replication_count: u32,
    /// Channel sampling step. The default is the largest step that divides
    /// `T_p` exactly and is at most `min(1 / (256 f_D), T_p / 8)`. Must not
    /// exceed `1 / (64 f_D)`.
    pub time_step_s: Option<f64>,
    pub n_sinusoids: u32,
    /// Arrival angle of the line-of-sight ray relative to the direction of
    /// motion. `pi / 2` gives the LoS component no Doppler shift.
    pub los_arrival_angle_rad: f64,
    /// Worker threads; `None` uses the global rayon pool.
    pub threads: Option<usize>,
}

impl Default for SimConfig {
    fn default() -> Self {
        Self {
            seed: 0,
            n_packets: 100_000,
            sim_duration_s: 10.0,
            replication_count: 16,
            time_step_s: None,
            n_sinusoids: DEFAULT_SINUSOIDS,
            los_arrival_angle_rad: std::f64::consts::FRAC_PI_2,
            threads: None,
        }
    }
}

impl SimConfig {
    pub fn with_seed(seed: u64) -> Self {
        Self {
            seed,
            ..Self::default()
        }
    }

    fn validate_common(&self) -> Result<()> {
        if self.replication_count < 2 {
            return Err(Error::invalid(
                "replication_count",
                "need at least 2 replications for a standard error",
            ));
        }
        if self.threads == Some(0) {
            return Err(Error::invalid("threads", "must be >= 1"));
        }
        Ok(())
    }

    pub(crate) fn validate_packet(&self) -> Result<()> {
        self.validate_common()?;
        if self.n_packets == 0 {
            return Err(Error::invalid("n_packets", "must be >= 1"));
        }
        Ok(())
    }

    pub(crate) fn validate_channel(&self) -> Result<()> {
        self.validate_common()?;
        if !(self.sim_duration_s > 0.0 && self.sim_duration_s.is_finite()) {
            return Err(Error::invalid("sim_duration_s", "must be finite and > 0"));
        }
        if self.n_sinusoids < 32 {
            return Err(Error::invalid("n_sinusoids", "must be >= 32"));
        }
        if !self.los_arrival_angle_rad.is_finite() {
            return Err(Error::invalid("los_arrival_angle_rad", "must be finite"));
        }
        if let Some(dt) = self.time_step_s {
            if !(dt > 0.0 && dt.is_finite()) {
                return Err(Error::invalid("time_step_s", "must be finite and > 0"));
            }
        }
        Ok(())
    }

    /// Independent stream for replication `rep`.
    pub(crate) fn rng(&self, rep: u32) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(u64::from(rep));
        rng
    }

    /// Runs `f` for every replication index and returns the results in
    /// index order.
    pub(crate) fn run_replications<T, F>(&self, f: F) -> Result<Vec<T>>
    where
        T: Send,
        F: Fn(u32) -> T + Sync + Send,
    {
        let work = || {
            (0..self.replication_count)
                .into_par_iter()
                .map(&f)
                .collect::<Vec<T>>()
        };
        match self.threads {
            None => Ok(work()),
            Some(n) => {
                let pool = rayon::ThreadPoolBuilder::new()
                    .num_threads(n)
                    .build()
                    .map_err(|e| Error::invalid("threads", e.to_string()))?;
                Ok(pool.install(work))
            }
        }
    }
}

/// A Monte-Carlo estimate with its replication-level standard error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SimResult {
    pub estimate: f64,
    pub std_error: f64,
    pub n_samples: u64,
    pub seed: u64,
    pub divergence_detected: bool,
}

impl SimResult {
    /// `estimate` is passed in so ratio estimators can pool numerators and
    /// denominators; the spread comes from the per-replication values.
    pub(crate) fn from_replications(
        estimate: f64,
        per_rep: &[f64],
        n_samples: u64,
        seed: u64,
        divergence_detected: bool,
    ) -> Self {
        let r = per_rep.len() as f64;
        let mean = per_rep.iter().sum::<f64>() / r;
        let var = per_rep.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (r - 1.0);
        Self {
            estimate,
            std_error: (var / r).sqrt(),
            n_samples,
            seed,
            divergence_detected,
        }
    }

    /// `|estimate - reference|` in standard errors.
    pub fn z_score(&self, reference: f64) -> f64 {
        (self.estimate - reference).abs() / self.std_error
    }

    pub fn rel_error(&self, reference: f64) -> f64 {
        ((self.estimate - reference) / reference).abs()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn standard_error_from_replications() {
        let r = SimResult::from_replications(2.5, &[1.0, 2.0, 3.0, 4.0], 40, 9, false);
        // sample variance 5/3, SE = sqrt(5/12)
        assert!((r.std_error - (5.0_f64 / 12.0).sqrt()).abs() < 1e-15);
        assert_eq!(r.estimate, 2.5);
    }

    #[test]
    fn streams_are_distinct_and_repeatable() {
        use rand::Rng;
        let cfg = SimConfig::with_seed(11);
        let a: u64 = cfg.rng(0).random();
        let b: u64 = cfg.rng(1).random();
        let a2: u64 = cfg.rng(0).random();
        assert_ne!(a, b);
        assert_eq!(a, a2);
    }

    #[test]
    fn config_validation() {
        let cfg = SimConfig {
            replication_count: 1,
            ..SimConfig::default()
        };
        assert_eq!(cfg.validate_packet().unwrap_err().field(), Some("replication_count"));
        let cfg = SimConfig {
            n_sinusoids: 16,
            ..SimConfig::default()
        };
        assert_eq!(cfg.validate_channel().unwrap_err().field(), Some("n_sinusoids"));
    }
}
