use mfrisk_core::ensemble::map_paths;
use mfrisk_core::mfpp::{
    interarrival_cdf, interarrival_density, mfpp_mean, pgf, sample_interarrival, simulate_mfpp,
    state_prob_p0, state_prob_pn, PnMethod, DEFAULT_KMAX,
};
use mfrisk_core::stats::variance;
use mfrisk_core::subordinators::{mean_inverse, sample_inverse_path};
use mfrisk_core::{Estimate, Grid, MixedParams};
use proptest::prelude::*;

const N_PATHS: usize = 10_000;
const H_OP: f64 = 1e-3;

fn params(lambda: f64) -> MixedParams {
    MixedParams::new(0.9, 0.5, 0.5, 0.5, lambda).unwrap()
}

/// `(Y(1), N(1))` per path.
fn ensemble(p: &MixedParams, seed: u64) -> (Vec<f64>, Vec<u64>) {
    let grid = Grid::with_len(0.05, 21).unwrap();
    let out = map_paths(N_PATHS, seed, 0, |_, rng| {
        let y = sample_inverse_path(p, H_OP, &grid, rng).unwrap();
        let n = simulate_mfpp(p, &y, rng);
        assert!(n.counts().windows(2).all(|w| w[0] <= w[1]) && n.counts()[0] == 0);
        (*y.values().last().unwrap(), *n.counts().last().unwrap())
    })
    .unwrap();
    out.into_iter().unzip()
}

#[test]
fn mean_and_variance_of_n1() {
    let p = params(2.0);
    let (ys, ns) = ensemble(&p, 11);
    let nf: Vec<f64> = ns.iter().map(|&n| n as f64).collect();
    let m = Estimate::mean_of(&nf, 11);
    let want = 2.0 * mean_inverse(&p, 1.0).unwrap();
    assert!(m.within(want, 3.0), "{m:?} vs {want}");
    assert!((mfpp_mean(&p, 1.0).unwrap() - want).abs() < 1e-15);

    let v = Estimate::variance_of(&nf, 11);
    let want = 2.0 * mean_inverse(&p, 1.0).unwrap() + 4.0 * variance(&ys);
    assert!(v.within(want, 3.0), "{v:?} vs {want}");
}

#[test]
fn state_probabilities_match_histogram() {
    let p = params(1.0);
    let (_, ns) = ensemble(&p, 12);
    for k in 0..=5u64 {
        let hits = ns.iter().filter(|&&n| n == k).count();
        let est = Estimate::proportion(hits, ns.len(), 12);
        let want = state_prob_pn(&p, k as usize, 1.0, PnMethod::Laplace).unwrap();
        assert!(est.within(want, 3.0), "n={k}: {est:?} vs {want}");
    }
    let zero = ns.iter().filter(|&&n| n == 0).count();
    let est = Estimate::proportion(zero, ns.len(), 12);
    assert!(est.within(state_prob_p0(&p, 1.0, DEFAULT_KMAX).unwrap(), 3.0));
}

#[test]
fn first_jump_time_matches_integrated_density() {
    let p = params(1.0);
    let mut w = map_paths(N_PATHS, 13, 0, |_, rng| sample_interarrival(&p, rng)).unwrap();
    w.sort_by(f64::total_cmp);
    let cdf = interarrival_cdf(&p, &w).unwrap();
    let mut d = 0.0f64;
    let n = w.len() as f64;
    for (i, f) in cdf.iter().enumerate() {
        d = d.max((f - i as f64 / n).abs()).max(((i + 1) as f64 / n - f).abs());
    }
    assert!(d <= 0.02, "KS = {d}");
    // the time-changed paths agree with the renewal sampler on [0, 1]
    let (_, ns) = ensemble(&p, 14);
    let jumped = ns.iter().filter(|&&c| c > 0).count() as f64 / n;
    let renewal = w.iter().filter(|&&x| x <= 1.0).count() as f64 / n;
    assert!((jumped - renewal).abs() < 4.0 * (2.0 * 0.25 / n).sqrt());
}

#[test]
fn density_normalizes() {
    let p = params(1.0);
    let horizon = 1e6;
    let mass = interarrival_cdf(&p, &[horizon]).unwrap()[0];
    // P(W > t) ~ (C2 / lambda) t^-alpha2 / Gamma(1 - alpha2)
    let tail = 0.5 * horizon.powf(-0.5) / std::f64::consts::PI.sqrt();
    assert!((mass + tail - 1.0).abs() <= 1e-3, "{mass} + {tail}");
    assert!(interarrival_density(&p, 1.0, DEFAULT_KMAX).unwrap() > 0.0);
}

#[test]
fn pn_normalization_with_moment_cutoff() {
    let p = params(1.0);
    let t = 2.0;
    let m = mfpp_mean(&p, t).unwrap();
    // Var N <= lambda U + lambda^2 E Y^2; a generous bound on sd suffices for the cutoff
    let sd = (m + 2.0 * m * m).sqrt();
    let cut = (m + 10.0 * sd).ceil() as usize;
    let total: f64 = (0..=cut).map(|n| state_prob_pn(&p, n, t, PnMethod::Laplace).unwrap()).sum();
    assert!((1.0 - total).abs() <= 1e-4, "{total}");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn pgf_is_monotone_and_convex(t in 0.1f64..5.0, lambda in 0.2f64..3.0) {
        let p = params(lambda);
        let zs: Vec<f64> = (0..=10).map(|i| i as f64 / 10.0).collect();
        let g: Vec<f64> = zs.iter().map(|&z| pgf(&p, z, t).unwrap()).collect();
        for w in g.windows(2) {
            prop_assert!(w[1] >= w[0] - 1e-12);
        }
        for w in g.windows(3) {
            prop_assert!(w[0] + w[2] - 2.0 * w[1] >= -1e-10);
        }
    }

    #[test]
    fn p0_is_a_decreasing_probability(t in 0.01f64..20.0, dt in 0.01f64..5.0) {
        let p = params(1.0);
        let a = state_prob_p0(&p, t, DEFAULT_KMAX).unwrap();
        let b = state_prob_p0(&p, t + dt, DEFAULT_KMAX).unwrap();
        prop_assert!(a <= 1.0 && b >= 0.0 && b <= a + 1e-12);
    }
}
