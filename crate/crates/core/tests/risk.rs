use mfrisk_core::ensemble::{map_paths, EnsembleSpec};
use mfrisk_core::mfpp::simulate_mfpp;
use mfrisk_core::risk::{
    increment_var_leading, increments, lrd_correlation, lrd_exponent, martingale_check, mfrp2_cov, mfrp_cov,
    simulate_surplus, srd_correlation, surplus_from_counts, surplus_mean, ClaimModel, MeanProperty, RiskConfig,
    Variant,
};
use mfrisk_core::stats::{mean, variance};
use mfrisk_core::subordinators::{mean_inverse, sample_inverse_path};
use mfrisk_core::{Estimate, Grid, MixedParams};
use proptest::prelude::*;

fn params() -> MixedParams {
    MixedParams::new(0.9, 0.5, 0.5, 0.5, 1.0).unwrap()
}

fn spec(n_paths: usize, seed: u64) -> EnsembleSpec {
    EnsembleSpec {
        n_paths,
        seed,
        workers: 0,
        step: 0.05,
        op_step: 1e-3,
    }
}

#[test]
fn surplus_means() {
    let p = params();
    let claims = ClaimModel::exponential(1.0).unwrap();
    let grid = Grid::with_len(0.1, 11).unwrap();
    for cfg in [
        RiskConfig::new(2.0, 0.2, 1.0, None, Variant::Mfrp).unwrap(),
        RiskConfig::new(2.0, 0.2, 1.0, None, Variant::MfrpVariant).unwrap(),
        RiskConfig::new(2.0, 0.0, 1.0, Some(1.5), Variant::Mfrp2).unwrap(),
    ] {
        let r1 = map_paths(10_000, 31, 0, |_, rng| {
            let y = sample_inverse_path(&p, 1e-3, &grid, rng).unwrap();
            *simulate_surplus(&p, &cfg, &claims, &y, rng).unwrap().values().last().unwrap()
        })
        .unwrap();
        let e = Estimate::mean_of(&r1, 31);
        let want = surplus_mean(&p, &cfg, 1.0).unwrap();
        assert!(e.within(want, 3.0), "{cfg:?}: {e:?} vs {want}");
    }
}

#[test]
fn martingale_properties() {
    let p = params();
    let claims = ClaimModel::exponential(1.0).unwrap();
    let ts = [0.5, 1.0, 2.0];
    for (rho, prop) in [
        (0.0, MeanProperty::Constant),
        (0.3, MeanProperty::Increasing),
        (-0.3, MeanProperty::Decreasing),
    ] {
        let cfg = RiskConfig::new(2.0, rho, 1.0, None, Variant::Mfrp).unwrap();
        let rep = martingale_check(&p, &cfg, &claims, &ts, &spec(10_000, 32)).unwrap();
        assert_eq!(rep.property, prop);
        assert!(rep.holds, "{rep:?}");
    }
}

/// MC covariances at `(s, t) = (1, 5)` against the closed forms, with
/// `Cov(Y(s), Y(t))` and `E N(s)` estimated from the same ensemble.
#[test]
fn covariance_identities() {
    let p = params();
    let claims = ClaimModel::exponential(1.0).unwrap();
    let cfg = RiskConfig::new(2.0, 0.5, 1.0, None, Variant::Mfrp).unwrap();
    let cfg2 = RiskConfig::new(2.0, 0.0, 1.0, Some(1.5), Variant::Mfrp2).unwrap();
    let grid = Grid::with_len(1.0, 6).unwrap();
    let rows = map_paths(20_000, 33, 0, |_, rng| {
        let y = sample_inverse_path(&p, 1e-2, &grid, rng).unwrap();
        let n = simulate_mfpp(&p, &y, rng);
        let r = surplus_from_counts(&p, &cfg, &claims, &y, &n, rng).unwrap();
        let r2 = surplus_from_counts(&p, &cfg2, &claims, &y, &n, rng).unwrap();
        let (yv, rv, r2v) = (y.values(), r.values(), r2.values());
        [yv[1], yv[5], n.counts()[1] as f64, rv[1], rv[5], r2v[1], r2v[5]]
    })
    .unwrap();
    let col = |j: usize| rows.iter().map(|r| r[j]).collect::<Vec<f64>>();
    let (ys, yt, ns) = (col(0), col(1), col(2));
    let cov_y = Estimate::covariance_of(&ys, &yt, 33).value;
    let mean_n = mean(&ns);

    let mc = Estimate::covariance_of(&col(3), &col(4), 33);
    let want = mfrp_cov(&p, &cfg, &claims, 1.0, 5.0, cov_y, mean_n).unwrap();
    assert!(mc.within(want, 3.0), "MFRP {mc:?} vs {want}");

    let mc = Estimate::covariance_of(&col(5), &col(6), 33);
    let want = mfrp2_cov(&p, &claims, 1.0, 5.0, cov_y, mean_n).unwrap();
    assert!(mc.within(want, 3.0), "MFRP-II {mc:?} vs {want}");

    // variance through s = t
    let mc = Estimate::variance_of(&col(3), 33);
    let want = mfrp_cov(&p, &cfg, &claims, 1.0, 1.0, variance(&ys), mean_n).unwrap();
    assert!(mc.within(want, 3.0), "Var {mc:?} vs {want}");
}

#[test]
fn increment_variance_at_t50() {
    let p = params();
    let claims = ClaimModel::exponential(1.0).unwrap();
    let cfg = RiskConfig::new(2.0, 0.2, 1.0, None, Variant::Mfrp).unwrap();
    let grid = Grid::with_len(1.0, 52).unwrap();
    let z = map_paths(10_000, 34, 0, |_, rng| {
        let y = sample_inverse_path(&p, 1e-2, &grid, rng).unwrap();
        let r = simulate_surplus(&p, &cfg, &claims, &y, rng).unwrap();
        increments(&r, 1.0).unwrap().values()[50]
    })
    .unwrap();
    let v = Estimate::variance_of(&z, 34).value;
    let lead = increment_var_leading(&p, &claims, 1.0, 50.0).unwrap();
    assert!((v / lead - 1.0).abs() <= 0.25, "{v} vs {lead}");
}

fn log_times() -> Vec<f64> {
    (0..=40).map(|i| 10f64.powf(2.0 + i as f64 / 20.0)).collect()
}

#[test]
fn lrd_and_srd_exponents() {
    let claims = ClaimModel::degenerate(1.0).unwrap();
    let cfg = RiskConfig::new(2.0, 1.0, 1.0, None, Variant::Mfrp).unwrap();
    for a2 in [0.3, 0.5, 0.7] {
        let p = MixedParams::new(0.9, a2, 0.5, 0.5, 2.0).unwrap();
        let var_y1 = 0.1;
        let lrd: Vec<(f64, f64)> =
            log_times().into_iter().map(|t| (t, lrd_correlation(&p, &cfg, &claims, 1.0, var_y1, t).unwrap())).collect();
        let nu = lrd_exponent(&lrd).unwrap();
        assert!((nu - a2).abs() <= 0.05 && nu > 0.0 && nu < 1.0, "alpha2={a2}: LRD {nu}");
        let srd: Vec<(f64, f64)> =
            log_times().into_iter().map(|t| (t, srd_correlation(&p, &cfg, &claims, 1.0, 1.0, t).unwrap())).collect();
        let nu = lrd_exponent(&srd).unwrap();
        assert!((nu - (3.0 - a2) / 2.0).abs() <= 0.05 && nu > 1.0 && nu < 1.5, "alpha2={a2}: SRD {nu}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn mfrp_paths_rise_between_claims(rho in -1.0f64..2.0, seed in 0u64..1000) {
        let p = params();
        let cfg = RiskConfig::new(1.0, rho, 1.0, None, Variant::Mfrp).unwrap();
        let grid = Grid::with_len(0.05, 21).unwrap();
        let mut rng = mfrisk_core::ensemble::substream(seed, 0);
        let y = sample_inverse_path(&p, 1e-3, &grid, &mut rng).unwrap();
        let n = simulate_mfpp(&p, &y, &mut rng);
        let r = surplus_from_counts(&p, &cfg, &ClaimModel::exponential(1.0).unwrap(), &y, &n, &mut rng).unwrap();
        prop_assert_eq!(r.values()[0], 1.0);
        for i in 1..grid.len() {
            if n.counts()[i] == n.counts()[i - 1] {
                prop_assert!(r.values()[i] >= r.values()[i - 1]);
            }
        }
        if let Some(k) = r.ruin_index() {
            prop_assert!(r.values()[k] < 0.0 && r.values()[..k].iter().all(|&v| v >= 0.0));
        }
    }

    #[test]
    fn mfrp2_mean_identity(t in 0.0f64..20.0, c in 0.1f64..5.0) {
        let p = params();
        let cfg = RiskConfig::new(2.0, 0.0, 1.5, Some(c), Variant::Mfrp2).unwrap();
        let want = 2.0 + c * t - 1.5 * mean_inverse(&p, t).unwrap();
        prop_assert!((surplus_mean(&p, &cfg, t).unwrap() - want).abs() < 1e-12);
    }
}
