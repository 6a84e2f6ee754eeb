use mfrisk_core::ensemble::EnsembleSpec;
use mfrisk_core::risk::{ClaimModel, RiskConfig, Variant};
use mfrisk_core::ruin::{
    ruin_asymptotic_subexp, ruin_lt, ruin_prob_density, ruin_prob_lt, ruin_prob_mc, ruin_sandwich_mc,
};
use mfrisk_core::MixedParams;
use proptest::prelude::*;

fn params() -> MixedParams {
    MixedParams::new(0.9, 0.5, 0.5, 0.5, 1.0).unwrap()
}

fn spec(n_paths: usize, seed: u64) -> EnsembleSpec {
    EnsembleSpec { n_paths, seed, workers: 0, step: 0.05, op_step: 1e-3 }
}

fn mfrp2(u: f64, c: f64, mean: f64) -> RiskConfig {
    RiskConfig::new(u, 0.0, mean, Some(c), Variant::Mfrp2).unwrap()
}

#[test]
fn exponential_claims_triangle() {
    let p = params();
    let claims = ClaimModel::exponential(1.0).unwrap();
    let mc = ruin_prob_mc(&p, &mfrp2(2.0, 1.5, 1.0), &claims, 5.0, &spec(100_000, 41)).unwrap();
    let lt = ruin_prob_lt(&p, 2.0, 1.5, 1.0, 5.0).unwrap();
    let dens = ruin_prob_density(&p, 2.0, 1.5, 1.0, 5.0, 2e-3, 400).unwrap();
    println!("mc {mc:?}\nlt {lt:?}\ndensity {dens:?}");
    assert!((mc.probability - lt.probability).abs() <= 3.0 * mc.std_error);
    assert!((mc.probability - dens.probability).abs() <= 3.0 * mc.std_error);
}

#[test]
fn monotone_ladders() {
    let p = params();
    let claims = ClaimModel::exponential(1.0).unwrap();
    let in_u: Vec<f64> = [0.5, 1.0, 2.0, 4.0, 8.0]
        .iter()
        .map(|&u| ruin_prob_mc(&p, &mfrp2(u, 1.5, 1.0), &claims, 5.0, &spec(20_000, 42)).unwrap().probability)
        .collect();
    assert!(in_u.windows(2).all(|w| w[1] <= w[0]), "{in_u:?}");
    let in_t: Vec<f64> = [0.5, 1.0, 2.0, 5.0, 10.0]
        .iter()
        .map(|&t| ruin_prob_mc(&p, &mfrp2(2.0, 1.5, 1.0), &claims, t, &spec(20_000, 43)).unwrap().probability)
        .collect();
    assert!(in_t.windows(2).all(|w| w[1] >= w[0]), "{in_t:?}");
    let lt: Vec<f64> = [0.5, 1.0, 2.0, 5.0, 10.0]
        .iter()
        .map(|&t| ruin_prob_lt(&p, 2.0, 1.5, 1.0, t).unwrap().probability)
        .collect();
    assert!(lt.windows(2).all(|w| w[1] >= w[0] - 1e-6), "{lt:?}");
}

#[test]
fn pareto_sandwich_and_asymptote() {
    let p = params();
    let claims = ClaimModel::pareto(1.5, 1.0).unwrap();
    let u = claims.quantile(0.999).unwrap();
    for (u, c) in [(2.0, 1.5), (10.0, 1.0), (u, 1.5)] {
        let cfg = mfrp2(u, c, claims.mean());
        let s = ruin_sandwich_mc(&p, &cfg, &claims, 1.0, &spec(20_000, 44)).unwrap();
        assert!(s.ordered(), "u={u}: {s:?}");
    }
    let cfg = mfrp2(u, 1.5, claims.mean());
    let mc = ruin_prob_mc(&p, &cfg, &claims, 1.0, &spec(200_000, 45)).unwrap();
    let asym = ruin_asymptotic_subexp(&p, &claims, u, 1.0).unwrap();
    let ratio = mc.probability / asym;
    println!("u={u} mc {mc:?} asymptote {asym} ratio {ratio}");
    assert!((0.7..=1.3).contains(&ratio), "{ratio}");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn transform_is_a_sub_probability(s in 1e-3f64..1e3, u in 0.0f64..20.0, c in 0.1f64..5.0) {
        let v = ruin_lt(&params(), u, c, 1.0, s).unwrap();
        prop_assert!(v > 0.0 && s * v <= 1.0);
    }

    #[test]
    fn asymptote_is_monotone(u in 2.0f64..1e3, t in 0.1f64..10.0) {
        let p = params();
        let claims = ClaimModel::pareto(1.5, 1.0).unwrap();
        let a = ruin_asymptotic_subexp(&p, &claims, u, t).unwrap();
        prop_assert!(ruin_asymptotic_subexp(&p, &claims, u * 1.5, t).unwrap() < a);
        prop_assert!(ruin_asymptotic_subexp(&p, &claims, u, t * 1.5).unwrap() > a);
    }
}
