//! Non-linear age of information of a stop-and-wait link.
//!
//! Age is passed through the cost `C(t) = (e^{at} - 1) / a`: exponential-like
//! for `a > 0`, log-like for `a < 0`, linear as `a -> 0`. Every successful
//! reception is followed by a fresh sample; a packet is retransmitted until
//! it gets through or `M` attempts are used up, after which a new packet
//! replaces it. With per-attempt error probability `p`:
//!
//! * `Y~` (attempts between receptions) is geometric, mean `1 / (1 - p)`;
//! * `Z~` (attempts spent on the packet that got through) is the geometric
//!   folded onto `1..=M`.
//!
//! For `a > 0` both averages only exist while `p e^{a T_p} < 1`; past that
//! boundary the result is [`MetricValue::Divergent`] rather than an error.

use std::fmt;
use std::num::NonZeroU32;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// `|a T_p max(M, E[Y~])|` below this uses the `a -> 0` closed forms.
pub const LINEAR_BRANCH_THRESHOLD: f64 = 1e-6;

/// `p^M` below this is flushed to zero.
const POW_UNDERFLOW: f64 = 1e-300;

/// Maximum number of transmissions per packet.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MaxTx {
    Bounded(NonZeroU32),
    Unbounded,
}

impl MaxTx {
    pub fn bounded(m: u32) -> Result<Self> {
        NonZeroU32::new(m)
            .map(Self::Bounded)
            .ok_or_else(|| Error::invalid("max_tx", "must be >= 1"))
    }

    pub fn get(self) -> Option<u32> {
        match self {
            Self::Bounded(m) => Some(m.get()),
            Self::Unbounded => None,
        }
    }
}

impl fmt::Display for MaxTx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Bounded(m) => write!(f, "{m}"),
            Self::Unbounded => f.write_str("unbounded"),
        }
    }
}

impl Serialize for MaxTx {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Self::Bounded(m) => s.serialize_u32(m.get()),
            Self::Unbounded => s.serialize_str("unbounded"),
        }
    }
}

impl<'de> Deserialize<'de> for MaxTx {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Count(u32),
            Word(String),
        }
        match Raw::deserialize(d)? {
            Raw::Count(m) => MaxTx::bounded(m).map_err(serde::de::Error::custom),
            Raw::Word(w) if w == "unbounded" || w == "inf" => Ok(MaxTx::Unbounded),
            Raw::Word(w) => Err(serde::de::Error::custom(format!(
                "expected a positive count or \"unbounded\", got {w:?}"
            ))),
        }
    }
}

/// A metric that is either finite or diverges.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MetricValue {
    Finite(f64),
    Divergent,
}

impl MetricValue {
    pub fn finite(self) -> Option<f64> {
        match self {
            Self::Finite(v) => Some(v),
            Self::Divergent => None,
        }
    }

    pub fn is_divergent(self) -> bool {
        matches!(self, Self::Divergent)
    }

    /// Divergent values become `+inf`, for ranking.
    pub fn or_infinity(self) -> f64 {
        self.finite().unwrap_or(f64::INFINITY)
    }

    pub fn map(self, f: impl FnOnce(f64) -> f64) -> Self {
        match self {
            Self::Finite(v) => Self::Finite(f(v)),
            Self::Divergent => Self::Divergent,
        }
    }

    /// Panics on a divergent value.
    pub fn unwrap(self) -> f64 {
        self.finite().expect("metric diverges")
    }
}

impl Serialize for MetricValue {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Self::Finite(v) => s.serialize_f64(*v),
            Self::Divergent => s.serialize_str("divergent"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AoiParams {
    a: f64,
    t_packet_s: f64,
    max_tx: MaxTx,
}

impl AoiParams {
    /// `a == 0.0` selects the linear age directly.
    pub fn new(a: f64, t_packet_s: f64, max_tx: MaxTx) -> Result<Self> {
        if !a.is_finite() {
            return Err(Error::invalid("a", "must be finite"));
        }
        if !(t_packet_s > 0.0 && t_packet_s.is_finite()) {
            return Err(Error::invalid("t_packet_s", "must be finite and > 0"));
        }
        Ok(Self {
            a,
            t_packet_s,
            max_tx,
        })
    }

    pub fn linear(t_packet_s: f64, max_tx: MaxTx) -> Result<Self> {
        Self::new(0.0, t_packet_s, max_tx)
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn t_packet_s(&self) -> f64 {
        self.t_packet_s
    }

    pub fn max_tx(&self) -> MaxTx {
        self.max_tx
    }

    pub fn with_a(self, a: f64) -> Result<Self> {
        Self::new(a, self.t_packet_s, self.max_tx)
    }

    /// Whether `avg_aoi`/`avg_paoi` route to the `a -> 0` closed forms.
    pub fn uses_linear_branch(&self, p: f64) -> bool {
        if self.a == 0.0 {
            return true;
        }
        let ey = 1.0 / (1.0 - p);
        let scale = match self.max_tx {
            MaxTx::Bounded(m) => f64::from(m.get()).max(ey),
            MaxTx::Unbounded => ey,
        };
        (self.a * self.t_packet_s * scale).abs() < LINEAR_BRANCH_THRESHOLD
    }
}

fn check_p(p: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::invalid("p", "must lie in [0, 1]"));
    }
    Ok(())
}

fn check_p_open(p: f64, quantity: &'static str) -> Result<()> {
    check_p(p)?;
    if p >= 1.0 {
        return Err(Error::Divergent {
            quantity,
            reason: "every transmission fails (p = 1)".into(),
        });
    }
    Ok(())
}

/// `p^M` as `exp(M ln p)`, flushed to zero below 1e-300.
fn pow_m(p: f64, m: u32) -> f64 {
    flush((f64::from(m) * p.ln()).exp())
}

fn flush(v: f64) -> f64 {
    if v < POW_UNDERFLOW {
        0.0
    } else {
        v
    }
}

/// `1 - p^M`, accurate when `p^M` is close to one.
fn one_minus_pow_m(p: f64, m: u32) -> f64 {
    one_minus_pow(p, f64::from(m))
}

fn one_minus_pow(p: f64, m: f64) -> f64 {
    -(m * p.ln()).exp_m1()
}

/// The age cost `C(t) = (e^{at} - 1) / a`, with `C(t) = t` at `a = 0`.
pub fn cost(t: f64, a: f64) -> Result<f64> {
    if !(t >= 0.0) {
        return Err(Error::invalid("t", "must be >= 0"));
    }
    if a == 0.0 {
        return Ok(t);
    }
    let at = a * t;
    let v = if at.abs() < LINEAR_BRANCH_THRESHOLD {
        t + 0.5 * a * t * t
    } else {
        at.exp_m1() / a
    };
    if !v.is_finite() {
        return Err(Error::Overflow("cost"));
    }
    Ok(v)
}

/// `E[Y~] = 1 / (1 - p)`.
pub fn exp_y(p: f64) -> Result<f64> {
    check_p_open(p, "E[Y]")?;
    Ok(1.0 / (1.0 - p))
}

/// `Pr[Z~ = l] = (1 - p) p^{l-1} / (1 - p^M)` for `1 <= l <= M`.
pub fn z_pmf(p: f64, m: u32, l: u32) -> Result<f64> {
    check_p_open(p, "Pr[Z]")?;
    if m == 0 {
        return Err(Error::invalid("max_tx", "must be >= 1"));
    }
    if l == 0 || l > m {
        return Err(Error::invalid("l", format!("must lie in 1..={m}")));
    }
    if p == 0.0 {
        return Ok(if l == 1 { 1.0 } else { 0.0 });
    }
    Ok((1.0 - p) * pow_m(p, l - 1) / one_minus_pow_m(p, m))
}

/// `E[Z~] = 1 / (1 - p) - M p^M / (1 - p^M)`; `1 / (1 - p)` for unbounded `M`.
pub fn exp_z(p: f64, max_tx: MaxTx) -> Result<f64> {
    check_p_open(p, "E[Z]")?;
    let ey = 1.0 / (1.0 - p);
    match max_tx {
        MaxTx::Unbounded => Ok(ey),
        MaxTx::Bounded(m) => {
            let m = m.get();
            if p == 0.0 {
                return Ok(1.0);
            }
            Ok(ey - f64::from(m) * pow_m(p, m) / one_minus_pow_m(p, m))
        }
    }
}

/// `M p^M / (1 - p^M)`, zero for unbounded `M`.
fn folded_correction(p: f64, max_tx: MaxTx) -> f64 {
    match max_tx {
        MaxTx::Bounded(m) if p > 0.0 => {
            let m = m.get();
            f64::from(m) * pow_m(p, m) / one_minus_pow_m(p, m)
        }
        _ => 0.0,
    }
}

/// Time-average non-linear AoI.
///
/// `(1-p)^2 e^{s}(e^{s}-1)(1 - p^M e^{sM}) / (a^2 T_p (1 - p e^{s})^2 (1 - p^M)) - 1/a`
/// with `s = a T_p`, the ratio of the expected per-cycle cost area to the
/// expected cycle length `T_p / (1 - p)`. Near `a = 0` this is
/// `T_p [(3 + p) / (2 (1 - p)) - M p^M / (1 - p^M)]`.
pub fn avg_aoi(p: f64, params: &AoiParams) -> Result<MetricValue> {
    check_p(p)?;
    if p >= 1.0 {
        return Ok(MetricValue::Divergent);
    }
    let t = params.t_packet_s;
    if params.uses_linear_branch(p) {
        let v = t * ((3.0 + p) / (2.0 * (1.0 - p)) - folded_correction(p, params.max_tx));
        return Ok(MetricValue::Finite(v));
    }
    let Some(ln_g) = ln_mgf(p, params) else {
        return Ok(MetricValue::Divergent);
    };
    let s = params.a * t;
    let ln_ratio = ln_g - s + (s.exp_m1() / s).ln();
    finite(ln_ratio.exp_m1() / params.a, "average AoI")
}

/// Average peak AoI, `E[C(Z_{i-1} + Y_i)]`.
///
/// `{e^{2s}(1 - 2p + p^{M+2}) + 2 e^{s} p (1 - p^M) - e^{(M+2)s}(1-p)^2 p^M + p^M - 1}
///  / (a (1 - e^{s} p)^2 (1 - p^M))`; near `a = 0`,
/// `T_p (2 / (1 - p) - M p^M / (1 - p^M))`.
pub fn avg_paoi(p: f64, params: &AoiParams) -> Result<MetricValue> {
    check_p(p)?;
    if p >= 1.0 {
        return Ok(MetricValue::Divergent);
    }
    let t = params.t_packet_s;
    if params.uses_linear_branch(p) {
        let v = t * (2.0 / (1.0 - p) - folded_correction(p, params.max_tx));
        return Ok(MetricValue::Finite(v));
    }
    let Some(ln_g) = ln_mgf(p, params) else {
        return Ok(MetricValue::Divergent);
    };
    finite(ln_g.exp_m1() / params.a, "average peak AoI")
}

fn finite(v: f64, what: &'static str) -> Result<MetricValue> {
    if v.is_finite() {
        Ok(MetricValue::Finite(v))
    } else {
        Err(Error::Overflow(what))
    }
}

/// `ln E[e^{s (Z~ + Y~)}]` with `s = a T_p`:
///
/// `2 s - 2 ln(1 - p (e^s - 1) / (1 - p)) + ln(1 - p^M (e^{sM} - 1) / (1 - p^M))`,
///
/// which is the log of `(1-p)^2 e^{2s} (1 - p^M e^{sM}) / ((1 - p e^s)^2 (1 - p^M))`
/// arranged so nothing cancels as `p -> 1` or `s -> 0`. `None` when
/// `p e^s >= 1`.
fn ln_mgf(p: f64, params: &AoiParams) -> Option<f64> {
    let s = params.a * params.t_packet_s;
    if p.ln() + s >= 0.0 {
        return None;
    }
    let uncapped = -(-p * s.exp_m1() / (1.0 - p)).ln_1p();
    let capped = match params.max_tx {
        MaxTx::Bounded(m) if p > 0.0 => {
            let m = f64::from(m.get());
            let pm = flush((m * p.ln()).exp());
            // p^M (e^{sM} - 1)
            let gap = if (s * m).abs() < 1.0 {
                pm * (s * m).exp_m1()
            } else {
                flush((m * (p.ln() + s)).exp()) - pm
            };
            (-gap / one_minus_pow(p, m)).ln_1p()
        }
        _ => 0.0,
    };
    let v = 2.0 * (s + uncapped) + capped;
    v.is_finite().then_some(v)
}

/// Summary of every metric at one operating point.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MetricsReport {
    pub p: f64,
    pub avg_aoi: MetricValue,
    pub avg_paoi: MetricValue,
    /// Bits/Hz/Joule; zero when `p = 1`.
    pub ee: f64,
    pub eta: MetricValue,
    pub eta_p: MetricValue,
    pub regime_notes: Vec<String>,
}

impl MetricsReport {
    pub fn any_divergent(&self) -> bool {
        self.avg_aoi.is_divergent()
            || self.avg_paoi.is_divergent()
            || self.eta.is_divergent()
            || self.eta_p.is_divergent()
    }
}
