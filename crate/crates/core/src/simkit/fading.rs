use std::f64::consts::PI;

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use super::{SimConfig, SimResult, DEFAULT_SAMPLES_PER_DOPPLER_PERIOD, MIN_SAMPLES_PER_DOPPLER_PERIOD};
use crate::channel::FadingParams;
use crate::error::{Error, Result};
use crate::pep::PacketParams;

/// Re-evaluate the phasors exactly every this many recursive steps.
const RESYNC_EVERY: usize = 1024;

/// One unit-power Rician branch:
///
/// `h(t) = sqrt(K/(K+1)) e^{j(w0 t + phi0)} + sqrt(1/(K+1)) g(t)`,
///
/// where the diffuse part `g(t) = L^{-1/2} sum_l A_l e^{j(w_l t + phi_l)}`
/// has complex Gaussian weights `A_l ~ CN(0, 1)`, uniform phases, and
/// Doppler frequencies `w_l = 2 pi f_D cos(alpha_l)` with one arrival angle
/// drawn uniformly in each of `L` equal sectors of the circle. The LoS ray
/// arrives at a fixed angle, so `w0 = 2 pi f_D cos(angle)`.
#[derive(Debug, Clone)]
pub struct FadingBranch {
    los: Complex64,
    los_omega: f64,
    coeffs: Vec<Complex64>,
    omegas: Vec<f64>,
}

impl FadingBranch {
    pub fn new<R: Rng + ?Sized>(
        rician_k: f64,
        doppler_hz: f64,
        n_sinusoids: u32,
        los_angle_rad: f64,
        rng: &mut R,
    ) -> Self {
        let l = n_sinusoids as usize;
        let diffuse = (1.0 / ((rician_k + 1.0) * l as f64)).sqrt();
        let los_amp = (rician_k / (rician_k + 1.0)).sqrt();
        let w_d = 2.0 * PI * doppler_hz;
        let mut coeffs = Vec::with_capacity(l);
        let mut omegas = Vec::with_capacity(l);
        for i in 0..l {
            let re: f64 = rng.sample(StandardNormal);
            let im: f64 = rng.sample(StandardNormal);
            let phase = 2.0 * PI * rng.random::<f64>();
            let alpha = 2.0 * PI * (i as f64 + rng.random::<f64>()) / l as f64;
            let weight = Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2;
            coeffs.push(weight * Complex64::from_polar(diffuse, phase));
            omegas.push(w_d * alpha.cos());
        }
        let los_phase = 2.0 * PI * rng.random::<f64>();
        Self {
            los: Complex64::from_polar(los_amp, los_phase),
            los_omega: w_d * los_angle_rad.cos(),
            coeffs,
            omegas,
        }
    }

    /// Complex gain at time `t`, evaluated directly.
    pub fn gain(&self, t: f64) -> Complex64 {
        let mut h = self.los * Complex64::from_polar(1.0, self.los_omega * t);
        for (c, w) in self.coeffs.iter().zip(&self.omegas) {
            h += c * Complex64::from_polar(1.0, w * t);
        }
        h
    }

    fn stepper(&self, t0: f64, dt: f64) -> Stepper<'_> {
        let n = self.coeffs.len() + 1;
        let mut s = Stepper {
            branch: self,
            t0,
            dt,
            step: 0,
            re: vec![0.0; n],
            im: vec![0.0; n],
            rot_re: vec![0.0; n],
            rot_im: vec![0.0; n],
        };
        for (i, w) in std::iter::once(&self.los_omega).chain(&self.omegas).enumerate() {
            let r = Complex64::from_polar(1.0, w * dt);
            s.rot_re[i] = r.re;
            s.rot_im[i] = r.im;
        }
        s.resync();
        s
    }
}

/// Advances every phasor by a fixed rotation per sample.
struct Stepper<'a> {
    branch: &'a FadingBranch,
    t0: f64,
    dt: f64,
    step: usize,
    re: Vec<f64>,
    im: Vec<f64>,
    rot_re: Vec<f64>,
    rot_im: Vec<f64>,
}

impl Stepper<'_> {
    fn resync(&mut self) {
        let t = self.t0 + self.step as f64 * self.dt;
        let b = self.branch;
        let all = std::iter::once((&b.los, &b.los_omega)).chain(b.coeffs.iter().zip(&b.omegas));
        for (i, (c, w)) in all.enumerate() {
            let v = c * Complex64::from_polar(1.0, w * t);
            self.re[i] = v.re;
            self.im[i] = v.im;
        }
    }

    /// `|h(t)|^2` at the current sample, then advance one step.
    fn next_power(&mut self) -> f64 {
        let mut sr = 0.0;
        let mut si = 0.0;
        for i in 0..self.re.len() {
            let (r, m) = (self.re[i], self.im[i]);
            sr += r;
            si += m;
            self.re[i] = r * self.rot_re[i] - m * self.rot_im[i];
            self.im[i] = r * self.rot_im[i] + m * self.rot_re[i];
        }
        self.step += 1;
        if self.step % RESYNC_EVERY == 0 {
            self.resync();
        }
        sr * sr + si * si
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChannelSimOutput {
    /// Fraction of samples with `gamma < gamma_th`.
    pub cdf: SimResult,
    /// Downward crossings of `gamma_th` per second.
    pub lcr: SimResult,
    /// Fraction of `T_p` windows that touch `gamma < gamma_th`.
    pub pep: SimResult,
    pub time_step_s: f64,
    pub samples_per_packet: u64,
}

struct Counts {
    samples: u64,
    below: u64,
    crossings: u64,
    windows: u64,
    bad_windows: u64,
    seconds: f64,
}

/// Channel-level oracle: simulates `N` independent branches, combines them
/// with MRC, `gamma(t) = avg_snr * sum_i |h_i(t)|^2`, and counts outage
/// samples, downward level crossings and erroneous packets.
///
/// Packets are consecutive non-overlapping windows of one long trajectory;
/// a window is in error if any sample in it, endpoints included, lies below
/// the threshold. The trajectory starts after `100 / f_D` seconds. With
/// `f_D = 0` every packet sees an independent static channel draw instead.
pub fn simulate_fading_process(
    fp: &FadingParams,
    pp: &PacketParams,
    gamma_th: f64,
    cfg: &SimConfig,
) -> Result<ChannelSimOutput> {
    cfg.validate_channel()?;
    if !(gamma_th >= 0.0) {
        return Err(Error::invalid("gamma_th", "must be >= 0"));
    }
    let fd = fp.doppler_hz();
    let t_p = pp.t_packet_s();
    if fd == 0.0 {
        return simulate_static(fp, pp, gamma_th, cfg);
    }
    let dt = match cfg.time_step_s {
        Some(dt) => dt,
        None => {
            let coarsest = (1.0 / (DEFAULT_SAMPLES_PER_DOPPLER_PERIOD * fd)).min(t_p / 8.0);
            t_p / (t_p / coarsest).ceil()
        }
    };
    if dt > 1.0 / (MIN_SAMPLES_PER_DOPPLER_PERIOD * fd) * (1.0 + 1e-12) {
        return Err(Error::invalid(
            "time_step_s",
            format!(
                "{dt} s is too coarse for f_D = {fd} Hz; need at most 1/(64 f_D) = {} s",
                1.0 / (MIN_SAMPLES_PER_DOPPLER_PERIOD * fd)
            ),
        ));
    }
    let per_packet = (t_p / dt).round() as u64;
    if per_packet == 0 {
        return Err(Error::invalid(
            "time_step_s",
            "time step is longer than the packet",
        ));
    }
    let n_steps = (cfg.sim_duration_s / dt).floor() as u64;
    if n_steps < 2 {
        return Err(Error::invalid("sim_duration_s", "shorter than two time steps"));
    }
    let t0 = 100.0 / fd;
    let n = fp.n_antennas() as usize;
    let snr = fp.avg_snr();

    let reps = cfg.run_replications(|rep| {
        let mut rng = cfg.rng(rep);
        let branches: Vec<FadingBranch> = (0..n)
            .map(|_| {
                FadingBranch::new(
                    fp.rician_k(),
                    fd,
                    cfg.n_sinusoids,
                    cfg.los_arrival_angle_rad,
                    &mut rng,
                )
            })
            .collect();
        let mut steppers: Vec<Stepper<'_>> = branches.iter().map(|b| b.stepper(t0, dt)).collect();
        let mut c = Counts {
            samples: n_steps,
            below: 0,
            crossings: 0,
            windows: 0,
            bad_windows: 0,
            seconds: n_steps as f64 * dt,
        };
        let mut prev_below = false;
        let mut window_bad = false;
        for i in 0..n_steps {
            let gamma = snr * steppers.iter_mut().map(|s| s.next_power()).sum::<f64>();
            let below = gamma < gamma_th;
            if below {
                c.below += 1;
                if i > 0 && !prev_below {
                    c.crossings += 1;
                }
            }
            if i > 0 && i % per_packet == 0 {
                // window closes on its end sample, next one opens on it
                c.windows += 1;
                if window_bad || below {
                    c.bad_windows += 1;
                }
                window_bad = below;
            } else {
                window_bad |= below;
            }
            prev_below = below;
        }
        c
    })?;

    Ok(summarize(&reps, cfg, dt, per_packet))
}

fn simulate_static(
    fp: &FadingParams,
    pp: &PacketParams,
    gamma_th: f64,
    cfg: &SimConfig,
) -> Result<ChannelSimOutput> {
    let t_p = pp.t_packet_s();
    let draws = (cfg.sim_duration_s / t_p).floor().max(1.0) as u64;
    let n = fp.n_antennas();
    let reps = cfg.run_replications(|rep| {
        let mut rng = cfg.rng(rep);
        let mut below = 0;
        for _ in 0..draws {
            let power: f64 = (0..n)
                .map(|_| {
                    FadingBranch::new(fp.rician_k(), 0.0, cfg.n_sinusoids, 0.0, &mut rng)
                        .gain(0.0)
                        .norm_sqr()
                })
                .sum();
            if fp.avg_snr() * power < gamma_th {
                below += 1;
            }
        }
        Counts {
            samples: draws,
            below,
            crossings: 0,
            windows: draws,
            bad_windows: below,
            seconds: draws as f64 * t_p,
        }
    })?;
    Ok(summarize(&reps, cfg, t_p, 1))
}

fn summarize(reps: &[Counts], cfg: &SimConfig, dt: f64, per_packet: u64) -> ChannelSimOutput {
    let samples: u64 = reps.iter().map(|c| c.samples).sum();
    let windows: u64 = reps.iter().map(|c| c.windows).sum();
    let seconds: f64 = reps.iter().map(|c| c.seconds).sum();
    let cdf_reps: Vec<f64> = reps.iter().map(|c| c.below as f64 / c.samples as f64).collect();
    let lcr_reps: Vec<f64> = reps.iter().map(|c| c.crossings as f64 / c.seconds).collect();
    let pep_reps: Vec<f64> = reps
        .iter()
        .map(|c| c.bad_windows as f64 / c.windows.max(1) as f64)
        .collect();
    let below: u64 = reps.iter().map(|c| c.below).sum();
    let crossings: u64 = reps.iter().map(|c| c.crossings).sum();
    let bad: u64 = reps.iter().map(|c| c.bad_windows).sum();
    ChannelSimOutput {
        cdf: SimResult::from_replications(below as f64 / samples as f64, &cdf_reps, samples, cfg.seed, false),
        lcr: SimResult::from_replications(crossings as f64 / seconds, &lcr_reps, samples, cfg.seed, false),
        pep: SimResult::from_replications(
            bad as f64 / windows.max(1) as f64,
            &pep_reps,
            windows,
            cfg.seed,
            false,
        ),
        time_step_s: dt,
        samples_per_packet: per_packet,
    }
}
