//! Parameter sweeps and one-dimensional minimization of `eta` / `eta_p`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::aoi_metrics::{MaxTx, MetricValue, MetricsReport};
use crate::channel::{db_to_linear, RateThreshold};
use crate::error::{Error, Result};
use crate::pep::PepCache;
use crate::scenario::{objective_value, Scenario};

/// The single field a sweep varies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepVariable {
    /// Target rate `R`, bps/Hz.
    Rate,
    /// Per-branch average SNR in dB.
    SnrDb,
    /// Transmission cap `M`.
    MaxTx,
    /// Receive antennas `N`.
    NAntennas,
}

impl SweepVariable {
    /// Column header used in emitted tables.
    pub fn column(self) -> &'static str {
        match self {
            Self::Rate => "rate_bps_hz",
            Self::SnrDb => "snr_db",
            Self::MaxTx => "max_tx",
            Self::NAntennas => "n_antennas",
        }
    }

    pub fn is_continuous(self) -> bool {
        matches!(self, Self::Rate | Self::SnrDb)
    }

    /// `base` with this field set to `x`.
    pub fn apply(self, base: &Scenario, x: f64) -> Result<Scenario> {
        let mut s = *base;
        match self {
            Self::Rate => s.link.rate = RateThreshold::new(x)?,
            Self::SnrDb => {
                if !x.is_finite() {
                    return Err(Error::invalid("snr_db", "must be finite"));
                }
                s.link.fading = s.link.fading.with_avg_snr(db_to_linear(x))?;
            }
            Self::MaxTx => s.protocol.max_tx = MaxTx::bounded(integer("max_tx", x)?)?,
            Self::NAntennas => s.link.fading = s.link.fading.with_n_antennas(integer("n_antennas", x)?)?,
        }
        Ok(s)
    }
}

fn integer(field: &'static str, x: f64) -> Result<u32> {
    if x.fract() == 0.0 && (1.0..=f64::from(u32::MAX)).contains(&x) {
        Ok(x as u32)
    } else {
        Err(Error::invalid(field, format!("{x} is not a positive integer")))
    }
}

/// A reported quantity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Output {
    P,
    AvgAoi,
    AvgPaoi,
    Ee,
    Eta,
    EtaP,
}

impl Output {
    pub const ALL: [Output; 6] = [
        Output::P,
        Output::AvgAoi,
        Output::AvgPaoi,
        Output::Ee,
        Output::Eta,
        Output::EtaP,
    ];

    pub fn column(self) -> &'static str {
        match self {
            Self::P => "p",
            Self::AvgAoi => "avg_aoi",
            Self::AvgPaoi => "avg_paoi",
            Self::Ee => "ee",
            Self::Eta => "eta",
            Self::EtaP => "eta_p",
        }
    }

    pub fn value(self, r: &MetricsReport) -> MetricValue {
        match self {
            Self::P => MetricValue::Finite(r.p),
            Self::AvgAoi => r.avg_aoi,
            Self::AvgPaoi => r.avg_paoi,
            Self::Ee => MetricValue::Finite(r.ee),
            Self::Eta => r.eta,
            Self::EtaP => r.eta_p,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepSpec {
    variable: SweepVariable,
    grid: Vec<f64>,
    base: Scenario,
    outputs: Vec<Output>,
}

impl SweepSpec {
    /// The swept field of `base` is ignored. `grid` must be strictly
    /// increasing with at least two points; empty `outputs` means all.
    pub fn new(variable: SweepVariable, grid: Vec<f64>, base: Scenario, outputs: Vec<Output>) -> Result<Self> {
        if grid.len() < 2 {
            return Err(Error::invalid("sweep.grid", "need at least 2 points"));
        }
        if grid.iter().any(|x| !x.is_finite()) {
            return Err(Error::invalid("sweep.grid", "values must be finite"));
        }
        if grid.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::invalid("sweep.grid", "must be strictly increasing"));
        }
        for &x in &grid {
            variable
                .apply(&base, x)
                .map_err(|e| Error::invalid("sweep.grid", e.to_string()))?;
        }
        let outputs = if outputs.is_empty() { Output::ALL.to_vec() } else { outputs };
        Ok(Self {
            variable,
            grid,
            base,
            outputs,
        })
    }

    /// `n` evenly spaced points on `[lo, hi]`.
    pub fn linspace(variable: SweepVariable, lo: f64, hi: f64, n: usize, base: Scenario) -> Result<Self> {
        Self::new(variable, linspace(lo, hi, n), base, Vec::new())
    }

    pub fn variable(&self) -> SweepVariable {
        self.variable
    }

    pub fn grid(&self) -> &[f64] {
        &self.grid
    }

    pub fn base(&self) -> &Scenario {
        &self.base
    }

    pub fn outputs(&self) -> &[Output] {
        &self.outputs
    }
}

pub(crate) fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![lo],
        _ => (0..n)
            .map(|i| if i == n - 1 { hi } else { lo + (hi - lo) * i as f64 / (n - 1) as f64 })
            .collect(),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub x: f64,
    pub report: MetricsReport,
    pub divergent: bool,
}

/// One row per grid point, in grid order. Grid points are evaluated in
/// parallel and share one PEP cache.
pub fn run_sweep(spec: &SweepSpec) -> Result<Vec<SweepRow>> {
    let cache = PepCache::new();
    spec.grid
        .par_iter()
        .map(|&x| {
            let report = spec.variable.apply(&spec.base, x)?.evaluate_cached(Some(&cache))?;
            Ok(SweepRow {
                x,
                divergent: report.any_divergent(),
                report,
            })
        })
        .collect()
}

/// `value / min(value)` over the finite entries of a column; divergent
/// entries stay divergent. `None` if every entry diverges.
pub fn normalize(values: &[MetricValue]) -> Option<Vec<MetricValue>> {
    let min = values
        .iter()
        .filter_map(|v| v.finite())
        .fold(f64::INFINITY, f64::min);
    if !min.is_finite() || min <= 0.0 {
        return None;
    }
    Some(values.iter().map(|v| v.map(|x| x / min)).collect())
}

/// Which ratio to minimize.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Objective {
    Eta,
    EtaP,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MinimizeOptions {
    pub grid_points: usize,
    /// Absolute tolerance on the variable.
    pub tol: f64,
}

impl Default for MinimizeOptions {
    fn default() -> Self {
        Self {
            grid_points: 64,
            tol: 1e-4,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OptimResult {
    pub argmin: f64,
    pub min_value: f64,
    pub bracket: (f64, f64),
    pub evaluations: usize,
}

/// Minimizes `objective` over a continuous `variable` (rate or SNR) on
/// `bracket`, holding the rest of `base` fixed.
pub fn minimize_eta(
    objective: Objective,
    variable: SweepVariable,
    bracket: (f64, f64),
    base: &Scenario,
    opts: MinimizeOptions,
) -> Result<OptimResult> {
    if !variable.is_continuous() {
        return Err(Error::invalid(
            "minimize.variable",
            "only rate and snr_db can be minimized over",
        ));
    }
    let cache = PepCache::new();
    let f = |x: f64| -> Result<f64> {
        let report = variable.apply(base, x)?.evaluate_cached(Some(&cache))?;
        Ok(objective_value(&report, objective == Objective::EtaP))
    };
    minimize_scalar(f, bracket, opts)
}

/// Grid scan followed by golden-section refinement around the best grid
/// cell. Heuristic for non-convex objectives; `+inf` marks points where
/// the objective diverges.
pub fn minimize_scalar<F>(f: F, bracket: (f64, f64), opts: MinimizeOptions) -> Result<OptimResult>
where
    F: Fn(f64) -> Result<f64> + Sync,
{
    let (lo, hi) = bracket;
    if !(lo.is_finite() && hi.is_finite() && lo < hi) {
        return Err(Error::invalid("minimize.bracket", "need finite lo < hi"));
    }
    if opts.grid_points < 3 {
        return Err(Error::invalid("minimize.grid_points", "must be >= 3"));
    }
    if !(opts.tol > 0.0) {
        return Err(Error::invalid("minimize.tol", "must be > 0"));
    }
    let xs = linspace(lo, hi, opts.grid_points);
    let ys = xs.par_iter().map(|&x| f(x)).collect::<Result<Vec<f64>>>()?;
    let mut evaluations = xs.len();

    let (k, &y_best) = ys
        .iter()
        .enumerate()
        .filter(|(_, y)| y.is_finite())
        .min_by(|a, b| a.1.total_cmp(b.1))
        .ok_or(Error::NoMinimum { lo, hi })?;
    let mut best = (xs[k], y_best);

    let mut a = xs[k.saturating_sub(1)];
    let mut b = xs[(k + 1).min(xs.len() - 1)];
    const INV_PHI: f64 = 0.618_033_988_749_894_8;
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = f(c)?;
    let mut fd = f(d)?;
    evaluations += 2;
    while b - a > opts.tol {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d)?;
        }
        evaluations += 1;
        for (x, y) in [(c, fc), (d, fd)] {
            if y < best.1 {
                best = (x, y);
            }
        }
    }
    debug_assert!(ys.iter().all(|&y| best.1 <= y));
    Ok(OptimResult {
        argmin: best.0,
        min_value: best.1,
        bracket,
        evaluations,
    })
}
