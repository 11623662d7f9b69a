use rand::Rng;
use serde::{Deserialize, Serialize};

use super::{SimConfig, SimResult};
use crate::aoi_metrics::AoiParams;
use crate::error::{Error, Result};

/// Output of the packet-level oracle. Counts (`mean_y`, `mean_z`,
/// `mean_x`) are in transmission slots of length `T_p`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PacketSimOutput {
    pub avg_aoi: SimResult,
    pub avg_paoi: SimResult,
    /// Attempts between consecutive receptions.
    pub mean_y: SimResult,
    /// Attempts spent on each received packet.
    pub mean_z: SimResult,
    /// Slots between the generation times of consecutive received packets.
    pub mean_x: SimResult,
    /// `z_histogram[l - 1]` counts receptions with `Z~ = l`. For unbounded
    /// `M` the last bin collects everything at or above its index.
    pub z_histogram: Vec<u64>,
}

const UNBOUNDED_BINS: usize = 64;

/// `int_0^u C(v) dv = (e^{au} - 1 - au) / a^2`.
fn cost_area(u: f64, a: f64) -> f64 {
    let x = a * u;
    if x.abs() < 1e-4 {
        u * u * (0.5 + x * (1.0 / 6.0 + x * (1.0 / 24.0 + x / 120.0)))
    } else {
        (x.exp_m1() - x) / (a * a)
    }
}

fn cost(u: f64, a: f64) -> f64 {
    let x = a * u;
    if x.abs() < 1e-8 {
        u * (1.0 + 0.5 * x)
    } else {
        x.exp_m1() / a
    }
}

#[derive(Default)]
struct Rep {
    area: f64,
    time: f64,
    peaks: f64,
    y: u64,
    z: u64,
    x: u64,
    hist: Vec<u64>,
    cycles: u64,
}

/// Slot-level stop-and-wait simulation with i.i.d. packet errors of
/// probability `p`.
///
/// Between receptions `i - 1` and `i` the age runs from `Z_{i-1}` to
/// `Z_{i-1} + Y_i`; each cycle contributes the exact integral of the cost
/// over that span and its peak `C(Z_{i-1} + Y_i)`. The first reception of
/// every replication only seeds the state and is not counted.
pub fn simulate_packet_process(
    p: f64,
    params: &AoiParams,
    cfg: &SimConfig,
) -> Result<PacketSimOutput> {
    if !(0.0..1.0).contains(&p) {
        return Err(Error::invalid("p", "must lie in [0, 1)"));
    }
    cfg.validate_packet()?;

    let a = params.a();
    let t = params.t_packet_s();
    let cap = params.max_tx().get();
    let bins = cap.map_or(UNBOUNDED_BINS, |m| m as usize);
    let divergent = a > 0.0 && p.ln() + a * t >= 0.0;

    let reps = cfg.run_replications(|rep| {
        let mut rng = cfg.rng(rep);
        let mut out = Rep {
            hist: vec![0; bins],
            ..Rep::default()
        };
        let mut now: u64 = 0;
        let mut gen: u64 = 0;
        let mut attempts: u32 = 0;
        let mut last: Option<(u64, u64, u64)> = None; // (reception slot, age at reception, generation slot)
        while out.cycles < cfg.n_packets {
            now += 1;
            attempts += 1;
            let success = rng.random::<f64>() >= p;
            if success {
                let z = now - gen;
                if let Some((prev_rx, prev_z, prev_gen)) = last {
                    let y = now - prev_rx;
                    let u0 = prev_z as f64 * t;
                    let u1 = (prev_z + y) as f64 * t;
                    out.area += cost_area(u1, a) - cost_area(u0, a);
                    out.time += y as f64 * t;
                    out.peaks += cost(u1, a);
                    out.y += y;
                    out.z += z;
                    out.x += gen - prev_gen;
                    out.hist[(z as usize).min(bins) - 1] += 1;
                    out.cycles += 1;
                }
                last = Some((now, z, gen));
                gen = now;
                attempts = 0;
            } else if Some(attempts) == cap {
                gen = now;
                attempts = 0;
            }
        }
        out
    })?;

    let n_total: u64 = reps.iter().map(|r| r.cycles).sum();
    let area: f64 = reps.iter().map(|r| r.area).sum();
    let time: f64 = reps.iter().map(|r| r.time).sum();
    let per = |f: &dyn Fn(&Rep) -> f64| reps.iter().map(f).collect::<Vec<f64>>();
    let mean_of = |v: &[f64]| v.iter().sum::<f64>() / v.len() as f64;

    let aoi_reps = per(&|r| r.area / r.time);
    let paoi_reps = per(&|r| r.peaks / r.cycles as f64);
    let y_reps = per(&|r| r.y as f64 / r.cycles as f64);
    let z_reps = per(&|r| r.z as f64 / r.cycles as f64);
    let x_reps = per(&|r| r.x as f64 / r.cycles as f64);

    let mut hist = vec![0u64; bins];
    for r in &reps {
        for (h, c) in hist.iter_mut().zip(&r.hist) {
            *h += c;
        }
    }

    let res = |est: f64, v: &[f64], div: bool| {
        SimResult::from_replications(est, v, n_total, cfg.seed, div)
    };
    Ok(PacketSimOutput {
        avg_aoi: res(area / time, &aoi_reps, divergent),
        avg_paoi: res(mean_of(&paoi_reps), &paoi_reps, divergent),
        mean_y: res(mean_of(&y_reps), &y_reps, false),
        mean_z: res(mean_of(&z_reps), &z_reps, false),
        mean_x: res(mean_of(&x_reps), &x_reps, false),
        z_histogram: hist,
    })
}
