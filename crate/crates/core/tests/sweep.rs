use aoi_link::aoi_metrics::{MaxTx, MetricValue};
use aoi_link::channel::{db_to_linear, FadingParams, RateThreshold};
use aoi_link::energy::PowerProfile;
use aoi_link::pep::PacketParams;
use aoi_link::scenario::{objective_value, CostShape, LinkConfig, ProtocolConfig, Scenario};
use aoi_link::sweep::{
    minimize_eta, minimize_scalar, normalize, run_sweep, MinimizeOptions, Objective, Output, SweepSpec,
    SweepVariable,
};
use aoi_link::Error;

fn scenario(n: u32, snr_db: f64, fd: f64, t: f64, r: f64, m: MaxTx, cost: CostShape) -> Scenario {
    Scenario {
        link: LinkConfig {
            fading: FadingParams::new(n, 0.0, db_to_linear(snr_db), fd).unwrap(),
            packet: PacketParams::new(t).unwrap(),
            rate: RateThreshold::new(r).unwrap(),
        },
        protocol: ProtocolConfig { max_tx: m, cost },
        power: PowerProfile::uniform(1.0).unwrap(),
    }
}

fn mobile(cost: CostShape) -> Scenario {
    scenario(8, 0.0, 200.0, 0.1, 1.0, MaxTx::Unbounded, cost)
}

fn eta_at(s: &Scenario, v: SweepVariable, x: f64, peak: bool) -> f64 {
    objective_value(&v.apply(s, x).unwrap().evaluate().unwrap(), peak)
}

#[test]
fn spec_validation() {
    let base = mobile(CostShape::Fixed(0.2));
    let err = SweepSpec::new(SweepVariable::Rate, vec![1.0], base.clone(), Output::ALL.to_vec()).unwrap_err();
    assert_eq!(err.field(), Some("sweep.grid"));
    assert!(SweepSpec::new(SweepVariable::Rate, vec![1.0, 1.0], base.clone(), Output::ALL.to_vec()).is_err());
    assert!(SweepSpec::new(SweepVariable::Rate, vec![2.0, 1.0], base.clone(), Output::ALL.to_vec()).is_err());
    assert!(SweepSpec::new(SweepVariable::MaxTx, vec![1.0, 2.5], base.clone(), Output::ALL.to_vec()).is_err());
    assert!(SweepSpec::new(SweepVariable::NAntennas, vec![0.0, 2.0], base, Output::ALL.to_vec()).is_err());
}

#[test]
fn rows_match_direct_evaluation() {
    let base = mobile(CostShape::GenerationRate);
    let spec = SweepSpec::new(SweepVariable::Rate, vec![0.7, 1.3], base.clone(), vec![Output::Eta]).unwrap();
    let rows = run_sweep(&spec).unwrap();
    for row in &rows {
        let direct = SweepVariable::Rate.apply(&base, row.x).unwrap().evaluate().unwrap();
        assert_eq!(row.report, direct);
        assert_eq!(row.divergent, direct.any_divergent());
    }
}

#[test]
fn every_variable_is_applied() {
    let base = scenario(2, 5.0, 30.0, 0.01, 1.0, MaxTx::bounded(2).unwrap(), CostShape::Fixed(0.3));
    let s = SweepVariable::SnrDb.apply(&base, 10.0).unwrap();
    assert!((s.link.fading.avg_snr() - 10.0).abs() < 1e-12);
    let s = SweepVariable::MaxTx.apply(&base, 5.0).unwrap();
    assert_eq!(s.protocol.max_tx.get(), Some(5));
    let s = SweepVariable::NAntennas.apply(&base, 7.0).unwrap();
    assert_eq!(s.link.fading.n_antennas(), 7);
    let s = SweepVariable::Rate.apply(&base, 2.0).unwrap();
    assert_eq!(s.link.rate.gamma_th(), 3.0);
}

#[test]
fn permuting_the_grid_permutes_rows() {
    let base = mobile(CostShape::Fixed(-0.5));
    let grid = SweepSpec::linspace(SweepVariable::Rate, 0.2, 3.0, 15, base.clone()).unwrap().grid().to_vec();
    let forward = run_sweep(&SweepSpec::new(SweepVariable::Rate, grid.clone(), base.clone(), Output::ALL.to_vec()).unwrap())
        .unwrap();
    // two interleaved halves, each strictly increasing
    let odd: Vec<f64> = grid.iter().copied().skip(1).step_by(2).collect();
    let even: Vec<f64> = grid.iter().copied().step_by(2).collect();
    let mut rows = run_sweep(&SweepSpec::new(SweepVariable::Rate, odd, base.clone(), Output::ALL.to_vec()).unwrap()).unwrap();
    rows.extend(run_sweep(&SweepSpec::new(SweepVariable::Rate, even, base, Output::ALL.to_vec()).unwrap()).unwrap());
    rows.sort_by(|a, b| a.x.total_cmp(&b.x));
    assert_eq!(rows, forward);
}

#[test]
fn sweep_is_independent_of_worker_count() {
    let spec = SweepSpec::linspace(SweepVariable::Rate, 0.1, 4.0, 40, mobile(CostShape::GenerationRate)).unwrap();
    let many = run_sweep(&spec).unwrap();
    let pool = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
    let one = pool.install(|| run_sweep(&spec).unwrap());
    assert_eq!(many, one);
}

#[test]
fn divergent_points_are_kept_and_flagged() {
    // large exponential cost: high rates push p e^{aT} past one
    let base = scenario(1, 0.0, 50.0, 0.01, 1.0, MaxTx::Unbounded, CostShape::Fixed(80.0));
    let spec = SweepSpec::linspace(SweepVariable::Rate, 0.1, 4.0, 30, base).unwrap();
    let rows = run_sweep(&spec).unwrap();
    assert_eq!(rows.len(), 30);
    assert!(rows.iter().any(|r| r.divergent));
    assert!(rows.iter().any(|r| !r.divergent));
    for r in rows.iter().filter(|r| r.divergent) {
        assert!(r.report.eta.is_divergent() || r.report.eta_p.is_divergent());
    }
}

#[test]
fn normalization() {
    let v = [MetricValue::Finite(4.0), MetricValue::Divergent, MetricValue::Finite(2.0)];
    let n = normalize(&v).unwrap();
    assert_eq!(n, vec![MetricValue::Finite(2.0), MetricValue::Divergent, MetricValue::Finite(1.0)]);
    assert!(normalize(&[MetricValue::Divergent]).is_none());
}

#[test]
fn antenna_count_helps_only_at_low_snr() {
    for &(snr_db, expect_interior) in &[(-5.0, true), (20.0, false)] {
        let base = scenario(1, snr_db, 100.0, 0.01, 1.0, MaxTx::Unbounded, CostShape::Fixed(0.4));
        let spec = SweepSpec::new(
            SweepVariable::NAntennas,
            (1..=64).map(f64::from).collect(),
            base,
            vec![Output::Eta],
        )
        .unwrap();
        let etas: Vec<f64> = run_sweep(&spec).unwrap().iter().map(|r| r.report.eta.or_infinity()).collect();
        let imin = (0..etas.len()).min_by(|&i, &j| etas[i].total_cmp(&etas[j])).unwrap();
        if expect_interior {
            assert!(imin > 0 && imin < etas.len() - 1, "SNR {snr_db} dB: argmin N = {}", imin + 1);
            assert!(etas[..=imin].windows(2).all(|w| w[1] <= w[0]));
            assert!(etas[imin..].windows(2).all(|w| w[1] >= w[0]));
        } else {
            // a single antenna beats every large array
            assert!(etas[7..].iter().all(|&e| e > etas[0]), "SNR {snr_db} dB");
        }
    }
}

#[test]
fn scalar_harness_finds_a_shifted_parabola() {
    for c in [-1.3, 0.0, 0.417, 2.9] {
        let r = minimize_scalar(|x| Ok((x - c) * (x - c)), (-3.0, 3.0), MinimizeOptions::default()).unwrap();
        assert!((r.argmin - c).abs() < 1e-4);
        assert_eq!(r.bracket, (-3.0, 3.0));
    }
}

#[test]
fn no_finite_value_is_an_error() {
    let err = minimize_scalar(|_| Ok(f64::INFINITY), (0.0, 1.0), MinimizeOptions::default()).unwrap_err();
    assert!(matches!(err, Error::NoMinimum { .. }));
    assert!(minimize_scalar(|x| Ok(x), (1.0, 0.0), MinimizeOptions::default()).is_err());
    let opts = MinimizeOptions { grid_points: 2, tol: 1e-4 };
    assert!(minimize_scalar(|x| Ok(x), (0.0, 1.0), opts).is_err());
}

#[test]
fn discrete_variables_cannot_be_minimized() {
    let err = minimize_eta(Objective::Eta, SweepVariable::NAntennas, (1.0, 8.0), &mobile(CostShape::Fixed(0.1)), MinimizeOptions::default())
        .unwrap_err();
    assert_eq!(err.field(), Some("minimize.variable"));
}

#[test]
fn minimum_against_dense_grid() {
    let configs = [
        (mobile(CostShape::GenerationRate), Objective::Eta),
        (mobile(CostShape::GenerationRate), Objective::EtaP),
        (mobile(CostShape::Fixed(-0.5)), Objective::Eta),
        (scenario(2, 10.0, 50.0, 1e-3, 1.0, MaxTx::bounded(3).unwrap(), CostShape::Fixed(0.4)), Objective::Eta),
    ];
    for (base, obj) in configs {
        let peak = obj == Objective::EtaP;
        let opts = MinimizeOptions::default();
        let r = minimize_eta(obj, SweepVariable::Rate, (0.1, 4.0), &base, opts).unwrap();
        assert!((0.1..=4.0).contains(&r.argmin));
        assert!((r.min_value - eta_at(&base, SweepVariable::Rate, r.argmin, peak)).abs() <= 1e-12 * r.min_value);

        let coarse = SweepSpec::linspace(SweepVariable::Rate, 0.1, 4.0, opts.grid_points, base.clone()).unwrap();
        for &x in coarse.grid() {
            assert!(r.min_value <= eta_at(&base, SweepVariable::Rate, x, peak));
        }

        let dense = SweepSpec::linspace(SweepVariable::Rate, 0.1, 4.0, 10_000, base.clone()).unwrap();
        let best = run_sweep(&dense)
            .unwrap()
            .iter()
            .map(|row| objective_value(&row.report, peak))
            .fold(f64::INFINITY, f64::min);
        assert!((r.min_value - best).abs() < 1e-3 * best, "{} vs dense {best}", r.min_value);
    }
}

#[test]
fn rate_beyond_the_optimum_only_hurts() {
    for cost in [CostShape::GenerationRate, CostShape::Fixed(-0.5), CostShape::Fixed(0.0)] {
        let base = mobile(cost);
        let r = minimize_eta(Objective::Eta, SweepVariable::Rate, (0.1, 4.0), &base, MinimizeOptions::default()).unwrap();
        let grid = SweepSpec::linspace(SweepVariable::Rate, r.argmin, 4.0, 200, base).unwrap();
        // once p is within rounding of one its last bits are noise
        let vals: Vec<f64> = run_sweep(&grid)
            .unwrap()
            .iter()
            .filter(|row| row.report.p < 1.0 - 1e-9)
            .map(|row| row.report.eta.or_infinity())
            .collect();
        assert!(vals.len() > 50);
        assert!(vals.windows(2).all(|w| w[1] >= w[0]), "{cost:?}");
    }
}

#[test]
fn fig5_like_optimum() {
    let base = mobile(CostShape::GenerationRate);
    for obj in [Objective::Eta, Objective::EtaP] {
        let r = minimize_eta(obj, SweepVariable::Rate, (0.1, 4.0), &base, MinimizeOptions::default()).unwrap();
        assert!((1.0..=1.6).contains(&r.argmin), "{obj:?}: {}", r.argmin);
    }
}

#[test]
fn snr_can_be_minimized_over() {
    let base = scenario(4, 0.0, 20.0, 0.01, 1.0, MaxTx::Unbounded, CostShape::Fixed(0.2));
    let r = minimize_eta(Objective::Eta, SweepVariable::SnrDb, (-20.0, 30.0), &base, MinimizeOptions::default()).unwrap();
    assert!((-20.0..=30.0).contains(&r.argmin));
    assert!(r.evaluations > 64);
}
