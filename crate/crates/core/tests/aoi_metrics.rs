mod common;

use aoi_link::aoi_metrics::{avg_aoi, avg_paoi, cost, exp_y, exp_z, z_pmf, AoiParams, MaxTx, MetricValue};
use common::rel;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn params(a: f64, t: f64, m: MaxTx) -> AoiParams {
    AoiParams::new(a, t, m).unwrap()
}

fn bounded(m: u32) -> MaxTx {
    MaxTx::bounded(m).unwrap()
}

/// Slots between receptions are geometric; the attempt count of the
/// received packet is that gap folded modulo `M`.
struct Renewal {
    y: Vec<f64>,
    z: Vec<f64>,
}

impl Renewal {
    fn new(p: f64, m: Option<u32>, len: usize) -> Self {
        let y: Vec<f64> = (0..len).map(|k| (1.0 - p) * p.powi(k as i32)).collect();
        let mut z = vec![0.0; len];
        for (k, w) in y.iter().enumerate() {
            let l = m.map_or(k, |m| k % m as usize);
            z[l] += w;
        }
        Self { y, z }
    }

    /// `E[g(Z_{i-1}, Y_i)]` in slots, both indices starting at 1.
    fn expect(&self, g: impl Fn(f64, f64) -> f64) -> f64 {
        let mut s = 0.0;
        for (l, wz) in self.z.iter().enumerate().filter(|(_, w)| **w > 0.0) {
            for (k, wy) in self.y.iter().enumerate() {
                s += wz * wy * g((l + 1) as f64, (k + 1) as f64);
            }
        }
        s
    }
}

fn area(u: f64, a: f64) -> f64 {
    if a == 0.0 {
        0.5 * u * u
    } else {
        ((a * u).exp_m1() - a * u) / (a * a)
    }
}

fn oracle_aoi(p: f64, a: f64, t: f64, m: Option<u32>) -> (f64, f64) {
    // terms decay like (p e^{aT})^k; stop well below double precision
    let decay = p.ln() + (a * t).max(0.0);
    let r = Renewal::new(p, m, (-60.0 / decay).ceil() as usize + 10);
    let ey = r.expect(|_, y| y);
    let num = r.expect(|z, y| area((z + y) * t, a) - area(z * t, a));
    let peak = r.expect(|z, y| if a == 0.0 { (z + y) * t } else { (a * (z + y) * t).exp_m1() / a });
    (num / (t * ey), peak)
}

#[test]
fn cost_function() {
    assert_eq!(cost(0.0, 0.7).unwrap(), 0.0);
    assert_eq!(cost(2.0, 0.0).unwrap(), 2.0);
    assert!(rel(cost(2.0, 1e-12).unwrap(), 2.0) < 1e-11);
    assert!(rel(cost(2.0, 0.4).unwrap(), (0.8_f64.exp() - 1.0) / 0.4) < 1e-14);
    assert!(cost(3.0, -0.5).unwrap() < 3.0);
    assert!(cost(-1.0, 0.1).is_err());
    assert!(cost(1e4, 1.0).is_err());
}

#[test]
fn geometric_and_folded_moments() {
    assert_eq!(exp_y(0.0).unwrap(), 1.0);
    assert_eq!(exp_y(0.5).unwrap(), 2.0);
    assert!(exp_y(1.0).is_err());
    for m in 1..6 {
        assert_eq!(z_pmf(0.0, m, 1).unwrap(), 1.0);
        assert_eq!(exp_z(0.0, bounded(m)).unwrap(), 1.0);
    }
    assert!(z_pmf(0.3, 3, 0).is_err());
    assert!(z_pmf(0.3, 3, 4).is_err());

    let direct: f64 = (1..=4).map(|l| f64::from(l) * z_pmf(0.6, 4, l).unwrap()).sum();
    assert!(rel(exp_z(0.6, bounded(4)).unwrap(), direct) < 1e-14);
    assert!(rel(exp_z(0.6, MaxTx::Unbounded).unwrap(), 2.5) < 1e-15);
    assert!(rel(exp_z(0.6, bounded(400)).unwrap(), 2.5) < 1e-12);
}

#[test]
fn folded_pmf_against_sampling() {
    let (p, m) = (0.4, 5u32);
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    let n = 1_000_000;
    let mut counts = [0u64; 5];
    let mut y_sum = 0.0;
    for _ in 0..n {
        let mut y = 1u32;
        while rng.random::<f64>() < p {
            y += 1;
        }
        y_sum += f64::from(y);
        counts[((y - 1) % m) as usize] += 1;
    }
    for (i, &c) in counts.iter().enumerate() {
        let q = z_pmf(p, m, i as u32 + 1).unwrap();
        let est = c as f64 / f64::from(n);
        let se = (q * (1.0 - q) / f64::from(n)).sqrt();
        assert!((est - q).abs() < 3.0 * se, "l={}", i + 1);
    }
    let mean = y_sum / f64::from(n);
    let se = (p.sqrt() / (1.0 - p)) / f64::from(n).sqrt();
    assert!((mean - exp_y(p).unwrap()).abs() < 3.0 * se);
}

#[test]
fn matches_renewal_oracle() {
    let cases = [
        (0.2, 0.4, 0.1, Some(3)),
        (0.45, 0.7, 0.2, Some(4)),
        (0.3, -0.5, 0.1, Some(5)),
        (0.6, 1.5, 0.1, None),
        (0.1, -2.0, 0.5, Some(1)),
        (0.7, 0.0, 1.0, Some(6)),
        (0.5, 2.0, 0.05, Some(2)),
    ];
    for (p, a, t, m) in cases {
        let cap = m.map_or(MaxTx::Unbounded, bounded);
        let pr = if a == 0.0 { AoiParams::linear(t, cap).unwrap() } else { params(a, t, cap) };
        let (c, cp) = oracle_aoi(p, a, t, m);
        assert!(rel(avg_aoi(p, &pr).unwrap().unwrap(), c) < 1e-10, "aoi p={p} a={a} M={m:?}");
        assert!(rel(avg_paoi(p, &pr).unwrap().unwrap(), cp) < 1e-10, "paoi p={p} a={a} M={m:?}");
    }
}

#[test]
fn lower_bounds_at_perfect_link() {
    let pr = AoiParams::linear(0.3, MaxTx::Unbounded).unwrap();
    assert!(rel(avg_aoi(0.0, &pr).unwrap().unwrap(), 0.45) < 1e-15);
    assert!(rel(avg_paoi(0.0, &pr).unwrap().unwrap(), 0.6) < 1e-15);
}

#[test]
fn linear_limit_is_continuous() {
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    for _ in 0..200 {
        let p = rng.random_range(0.0..0.95);
        let t = rng.random_range(1e-3..1.0);
        let m = if rng.random_bool(0.3) { MaxTx::Unbounded } else { bounded(rng.random_range(1..20)) };
        let lin = AoiParams::linear(t, m).unwrap();
        let near = params(1e-8, t, m);
        assert!(rel(avg_aoi(p, &near).unwrap().unwrap(), avg_aoi(p, &lin).unwrap().unwrap()) < 1e-6);
        assert!(rel(avg_paoi(p, &near).unwrap().unwrap(), avg_paoi(p, &lin).unwrap().unwrap()) < 1e-6);
    }
}

#[test]
fn increasing_in_error_probability() {
    for &a in &[-1.0, 0.0, 0.5, 2.0] {
        for m in [MaxTx::Unbounded, bounded(1), bounded(3)] {
            let pr = if a == 0.0 { AoiParams::linear(0.1, m).unwrap() } else { params(a, 0.1, m) };
            let mut last = (0.0, 0.0);
            for i in 0..200 {
                let p = 0.004 * f64::from(i);
                let (MetricValue::Finite(c), MetricValue::Finite(cp)) =
                    (avg_aoi(p, &pr).unwrap(), avg_paoi(p, &pr).unwrap())
                else {
                    break;
                };
                assert!(c > last.0 && cp > last.1, "a={a} M={m} p={p}");
                last = (c, cp);
            }
        }
    }
}

#[test]
fn cost_shape_ordering() {
    let mut rng = ChaCha8Rng::seed_from_u64(29);
    for _ in 0..300 {
        let p = rng.random_range(0.0..0.8);
        let t = rng.random_range(0.01..0.5);
        let a = rng.random_range(0.05..1.5);
        let m = if rng.random_bool(0.3) { MaxTx::Unbounded } else { bounded(rng.random_range(1..10)) };
        let lin = avg_aoi(p, &AoiParams::linear(t, m).unwrap()).unwrap().unwrap();
        let log = avg_aoi(p, &params(-a, t, m)).unwrap().unwrap();
        let exp = avg_aoi(p, &params(a, t, m)).unwrap().or_infinity();
        assert!(log < lin && lin < exp, "p={p} t={t} a={a} M={m}");
    }
}

#[test]
fn unbounded_is_the_large_cap_limit() {
    for &p in &[0.05, 0.3, 0.6, 0.9] {
        for &a in &[-0.3, 0.0, 0.2] {
            let mk = |m| if a == 0.0 { AoiParams::linear(0.1, m).unwrap() } else { params(a, 0.1, m) };
            let inf = avg_aoi(p, &mk(MaxTx::Unbounded)).unwrap().unwrap();
            let big = avg_aoi(p, &mk(bounded(1_000_000))).unwrap().unwrap();
            assert!(rel(big, inf) < 1e-9, "p={p} a={a}");
        }
    }
}

#[test]
fn time_scale_invariance() {
    for &(p, a, t, m) in &[(0.3, 0.8, 0.1, bounded(4)), (0.5, -0.4, 0.2, MaxTx::Unbounded), (0.1, 2.0, 0.05, bounded(1))] {
        let base = avg_aoi(p, &params(a, t, m)).unwrap().unwrap();
        let base_p = avg_paoi(p, &params(a, t, m)).unwrap().unwrap();
        for c in [0.25, 3.0, 10.0] {
            let scaled = params(a / c, c * t, m);
            assert!(rel(avg_aoi(p, &scaled).unwrap().unwrap(), c * base) < 1e-11);
            assert!(rel(avg_paoi(p, &scaled).unwrap().unwrap(), c * base_p) < 1e-11);
        }
    }
}

#[test]
fn divergence_is_flagged() {
    let pr = params(2.0, 0.5, MaxTx::Unbounded);
    // p e^{aT} = 0.4 e > 1
    assert!(avg_aoi(0.4, &pr).unwrap().is_divergent());
    assert!(avg_paoi(0.4, &pr).unwrap().is_divergent());
    assert!(!avg_aoi(0.3, &pr).unwrap().is_divergent());
    assert!(avg_aoi(1.0, &AoiParams::linear(0.1, MaxTx::Unbounded).unwrap()).unwrap().is_divergent());
    // a bounded cap does not rescue a divergent exponential cost
    assert!(avg_aoi(0.4, &params(2.0, 0.5, bounded(3))).unwrap().is_divergent());
    assert!(avg_aoi(-0.1, &pr).is_err());
}

#[test]
fn parameter_validation() {
    assert!(AoiParams::new(f64::NAN, 0.1, MaxTx::Unbounded).is_err());
    assert!(AoiParams::new(0.1, 0.0, MaxTx::Unbounded).is_err());
    assert!(MaxTx::bounded(0).is_err());
    assert_eq!(MaxTx::bounded(7).unwrap().get(), Some(7));
    assert_eq!(MaxTx::Unbounded.get(), None);
}
