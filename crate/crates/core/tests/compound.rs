use mfrisk_core::compound::{
    compound_mean, compound_overdispersion, compound_state_prob, compound_var, simulate_compound,
    DiscreteClaimLaw,
};
use mfrisk_core::ensemble::map_paths;
use mfrisk_core::mfpp::{mfpp_mean, simulate_mfpp};
use mfrisk_core::stats::variance;
use mfrisk_core::subordinators::sample_inverse_path;
use mfrisk_core::{Estimate, Grid, MixedParams};
use proptest::prelude::*;

const N_PATHS: usize = 10_000;

fn params() -> MixedParams {
    MixedParams::new(0.9, 0.5, 0.5, 0.5, 1.0).unwrap()
}

fn law() -> DiscreteClaimLaw {
    DiscreteClaimLaw::new(vec![0.5, 0.5]).unwrap()
}

/// `(Y(1), C(1))` per path.
fn ensemble(seed: u64) -> (Vec<f64>, Vec<f64>) {
    let p = params();
    let l = law();
    let grid = Grid::with_len(0.1, 11).unwrap();
    map_paths(N_PATHS, seed, 0, |_, rng| {
        let y = sample_inverse_path(&p, 1e-3, &grid, rng).unwrap();
        let n = simulate_mfpp(&p, &y, rng);
        let c = simulate_compound(&n, &l, rng);
        (*y.values().last().unwrap(), *c.values().last().unwrap())
    })
    .unwrap()
    .into_iter()
    .unzip()
}

#[test]
fn moments_match_monte_carlo() {
    let p = params();
    let (ys, cs) = ensemble(21);
    let m = Estimate::mean_of(&cs, 21);
    assert!(m.within(compound_mean(&p, &law(), 1.0).unwrap(), 3.0), "{m:?}");
    let v = Estimate::variance_of(&cs, 21);
    let var_y = variance(&ys);
    assert!(v.within(compound_var(&p, &law(), 1.0, var_y).unwrap(), 3.0), "{v:?}");
    assert!(compound_overdispersion(&p, &law(), 1.0, var_y).unwrap() > 0.0);
}

#[test]
fn histogram_matches_state_probabilities() {
    let p = params();
    let (_, cs) = ensemble(22);
    for n in 0..=6 {
        let hits = cs.iter().filter(|&&c| c == n as f64).count();
        let est = Estimate::proportion(hits, cs.len(), 22);
        let want = compound_state_prob(&p, &law(), n, 1.0).unwrap();
        assert!(est.within(want, 3.0), "n={n}: {est:?} vs {want}");
    }
}

#[test]
fn state_probabilities_normalize() {
    let p = params();
    let t = 1.0;
    let mean = compound_mean(&p, &law(), t).unwrap();
    // Var Y <= E Y^2 <= 2 U^2 bounds the spread generously
    let u = mfpp_mean(&p, t).unwrap();
    let sd = compound_var(&p, &law(), t, 2.0 * u * u).unwrap().sqrt();
    let cut = (mean + 10.0 * sd).ceil() as usize;
    let total: f64 = (0..=cut).map(|n| compound_state_prob(&p, &law(), n, t).unwrap()).sum();
    assert!((1.0 - total).abs() <= 1e-3, "{total}");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn overdispersion_is_positive(
        w in proptest::collection::vec(0.01f64..1.0, 1..5),
        t in 0.1f64..10.0,
        var_y in 1e-6f64..10.0,
    ) {
        let total: f64 = w.iter().sum();
        let law = DiscreteClaimLaw::new(w.iter().map(|x| x / total).collect()).unwrap();
        let m = law.mean();
        let v = compound_overdispersion(&params(), &law, t, var_y).unwrap();
        prop_assert!(v > 0.0);
        prop_assert!(v >= params().lambda().powi(2) * var_y * m * m * (1.0 - 1e-12));
    }

    #[test]
    fn convolution_rows_are_subprobabilities(w in proptest::collection::vec(0.01f64..1.0, 1..4)) {
        let total: f64 = w.iter().sum();
        let law = DiscreteClaimLaw::new(w.iter().map(|x| x / total).collect()).unwrap();
        let r = law.convolution_table(12);
        for row in &r {
            let s: f64 = row.iter().sum();
            prop_assert!(s <= 1.0 + 1e-12);
        }
    }
}
