//! Finite-horizon ruin of the MFRP-II `u + c t - sum X_i`.
//!
//! Claim sizes in the exponential-claims formulas are parametrized by their
//! rate `mu_rate`; the claim mean of the risk configuration is a different
//! quantity and is never substituted for it.

use rand::distr::Distribution;
use serde::{Deserialize, Serialize};

use crate::ensemble::{map_paths, EnsembleSpec};
use crate::error::{Error, Result};
use crate::mfpp::{interarrival_density, sample_interarrival, DEFAULT_KMAX};
use crate::numerics::{
    bracket_roots, convolve, fixed_point, integrate, try_laplace_invert, Grid, GridFunction, DEFAULT_DAMPING,
    DEFAULT_ORDER,
};
use crate::risk::{ClaimModel, RiskConfig, Variant};
use crate::stats::Estimate;
use crate::subordinators::{mean_inverse, MixedParams};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RuinMethod {
    MonteCarlo,
    LaplaceInversion,
    DensityIntegral,
    Asymptotic,
}

/// `psi_u(t)` with its uncertainty. For Monte Carlo `std_error` is the
/// binomial standard error; for the deterministic methods it is a
/// discretization indicator (order 14 vs 12 inversion, step h vs 2h
/// quadrature).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RuinEstimate {
    pub probability: f64,
    pub std_error: f64,
    pub n_paths: usize,
    pub horizon: f64,
    pub method: RuinMethod,
}

impl RuinEstimate {
    /// `|self - other|` within `k` combined standard errors.
    pub fn agrees_with(&self, other: &RuinEstimate, k: f64) -> bool {
        let se = (self.std_error.powi(2) + other.std_error.powi(2)).sqrt();
        (self.probability - other.probability).abs() <= k * se
    }
}

/// Monte Carlo estimates of the two sides of
/// `P(S(t) > u + c t) <= psi_u(t) <= P(S(t) > u)` with `S` the aggregate claims.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RuinSandwich {
    pub lower: Estimate,
    pub ruin: RuinEstimate,
    pub upper: Estimate,
}

impl RuinSandwich {
    pub fn ordered(&self) -> bool {
        self.lower.value <= self.ruin.probability && self.ruin.probability <= self.upper.value
    }
}

fn premium_rate(cfg: &RiskConfig) -> Result<f64> {
    match (cfg.variant(), cfg.c()) {
        (Variant::Mfrp2, Some(c)) => Ok(c),
        _ => Err(Error::InvalidParams("ruin estimation needs an MFRP-II configuration".into())),
    }
}

/// Per path: ruined by `horizon`, `S > u + c horizon`, `S > u`.
///
/// Claims arrive at renewal epochs with exactly simulated interarrival
/// times; the premium grows between claims, so ruin can only happen at a
/// claim and is detected without grid error.
fn ruin_path<R: rand::Rng + ?Sized>(
    p: &MixedParams,
    u: f64,
    c: f64,
    claims: &crate::risk::ClaimSampler,
    horizon: f64,
    rng: &mut R,
) -> (bool, bool, bool) {
    let mut t = 0.0;
    let mut s = 0.0;
    let mut ruined = false;
    loop {
        t += sample_interarrival(p, rng);
        if t > horizon {
            break;
        }
        s += claims.sample(rng);
        if u + c * t - s < 0.0 {
            ruined = true;
        }
    }
    (ruined, s > u + c * horizon, s > u)
}

/// Monte Carlo ruin probability with both bounds of the sandwich inequality.
pub fn ruin_sandwich_mc(
    p: &MixedParams,
    cfg: &RiskConfig,
    claims: &ClaimModel,
    horizon: f64,
    ens: &EnsembleSpec,
) -> Result<RuinSandwich> {
    let c = premium_rate(cfg)?;
    if !(horizon.is_finite() && horizon > 0.0) {
        return Err(Error::domain("ruin_prob_mc", format!("horizon must be positive, got {horizon}")));
    }
    let sampler = claims.sampler();
    let flags = map_paths(ens.n_paths, ens.seed, ens.workers, |_, rng| {
        ruin_path(p, cfg.u(), c, &sampler, horizon, rng)
    })?;
    let count = |f: fn(&(bool, bool, bool)) -> bool| flags.iter().filter(|x| f(x)).count();
    let n = flags.len();
    let ruin = Estimate::proportion(count(|x| x.0), n, ens.seed);
    Ok(RuinSandwich {
        lower: Estimate::proportion(count(|x| x.1), n, ens.seed),
        ruin: RuinEstimate {
            probability: ruin.value,
            std_error: ruin.std_error,
            n_paths: n,
            horizon,
            method: RuinMethod::MonteCarlo,
        },
        upper: Estimate::proportion(count(|x| x.2), n, ens.seed),
    })
}

/// Monte Carlo `psi_u(t)`.
pub fn ruin_prob_mc(
    p: &MixedParams,
    cfg: &RiskConfig,
    claims: &ClaimModel,
    horizon: f64,
    ens: &EnsembleSpec,
) -> Result<RuinEstimate> {
    Ok(ruin_sandwich_mc(p, cfg, claims, horizon, ens)?.ruin)
}

fn check_exp_args(op: &'static str, u: f64, c: f64, mu_rate: f64) -> Result<()> {
    if !(u >= 0.0 && u.is_finite() && c > 0.0 && c.is_finite() && mu_rate > 0.0 && mu_rate.is_finite()) {
        return Err(Error::domain(
            op,
            format!("need u >= 0, c > 0, mu_rate > 0; got u={u}, c={c}, mu_rate={mu_rate}"),
        ));
    }
    Ok(())
}

/// Ruin-time density with exponential claims on every point of `grid`:
/// `e^(-mu (u+ct)) sum_n mu^n (u+ct)^(n-1) / n! (u + ct/(n+1)) f_W^{*(n+1)}(t)`,
/// the convolution powers of the interarrival density taken on the grid.
/// Summation stops once a term is below 1e-14 of the partial sum everywhere.
pub fn ruin_density_exp_grid(
    p: &MixedParams,
    u: f64,
    c: f64,
    mu_rate: f64,
    grid: &Grid,
    n_terms: usize,
) -> Result<GridFunction> {
    check_exp_args("ruin_density_exp", u, c, mu_rate)?;
    let f_w = GridFunction::try_from_fn(*grid, |t| {
        if t == 0.0 {
            Ok(f64::INFINITY)
        } else {
            interarrival_density(p, t, DEFAULT_KMAX)
        }
    })?;
    let pts: Vec<f64> = grid.points().collect();
    // log of e^(-mu x) mu^n x^(n-1) / n! without the (u + ct/(n+1)) factor, x = u + ct
    let ln_weight = |n: usize, x: f64| {
        -mu_rate * x + n as f64 * mu_rate.ln() + (n as f64 - 1.0) * x.ln() - ln_factorial(n)
    };
    let mut sum = vec![0.0f64; pts.len()];
    let mut power = f_w.clone();
    for n in 0..n_terms {
        let mut biggest = 0.0f64;
        for (i, &t) in pts.iter().enumerate() {
            let x = u + c * t;
            let fv = power.values()[i];
            let term = if x == 0.0 {
                // u = 0 at t = 0: only n = 0 survives, with weight 1
                if n == 0 {
                    fv
                } else {
                    0.0
                }
            } else {
                ln_weight(n, x).exp() * (u + c * t / (n as f64 + 1.0)) * fv
            };
            if term.is_finite() {
                biggest = biggest.max(term.abs() / sum[i].abs().max(1e-300));
            }
            sum[i] += term;
        }
        if n > 0 && biggest < 1e-14 {
            return GridFunction::new(*grid, sum);
        }
        power = convolve(&power, &f_w)?;
    }
    Err(Error::NonConvergence {
        op: "ruin_density_exp",
        iterations: n_terms,
    })
}

fn ln_factorial(n: usize) -> f64 {
    (2..=n).map(|k| (k as f64).ln()).sum()
}

/// Ruin-time density at `t`, which must be a point of `grid`.
pub fn ruin_density_exp(
    p: &MixedParams,
    u: f64,
    c: f64,
    mu_rate: f64,
    t: f64,
    n_terms: usize,
    grid: &Grid,
) -> Result<f64> {
    let i = grid
        .index_of(t)
        .ok_or_else(|| Error::Grid(format!("t = {t} is not a point of the grid")))?;
    if t == 0.0 {
        return Err(Error::domain("ruin_density_exp", "need t > 0"));
    }
    let g = Grid::with_len(grid.step(), i + 1)?;
    Ok(*ruin_density_exp_grid(p, u, c, mu_rate, &g, n_terms)?.values().last().unwrap())
}

/// `psi_u(t) = int_0^t f_T` on a grid of step about `step`.
pub fn ruin_prob_density(
    p: &MixedParams,
    u: f64,
    c: f64,
    mu_rate: f64,
    horizon: f64,
    step: f64,
    n_terms: usize,
) -> Result<RuinEstimate> {
    let n = ((horizon / step).ceil() as usize).max(2);
    let n = n + n % 2;
    let grid = Grid::with_len(horizon / n as f64, n + 1)?;
    let f = ruin_density_exp_grid(p, u, c, mu_rate, &grid, n_terms)?;
    let fine = integrate(&f)?;
    let coarse_vals: Vec<f64> = f.values().iter().step_by(2).copied().collect();
    let coarse = integrate(&GridFunction::new(Grid::with_len(2.0 * grid.step(), n / 2 + 1)?, coarse_vals)?)?;
    Ok(RuinEstimate {
        probability: fine,
        std_error: (fine - coarse).abs(),
        n_paths: 0,
        horizon,
        method: RuinMethod::DensityIntegral,
    })
}

/// Root `y(s)` in `[0, 1]` of
/// `y = lambda / (C1 (s + c mu (1-y))^alpha1 + C2 (s + c mu (1-y))^alpha2 + lambda)`.
///
/// The right side increases in `y`, is positive at 0 and below 1 at 1, so a
/// root exists; more than one sign change is reported as an instability.
pub fn ruin_y(p: &MixedParams, c: f64, mu_rate: f64, s: f64) -> Result<f64> {
    let lam = p.lambda();
    let map = |y: f64| lam / (p.laplace_exponent(s + c * mu_rate * (1.0 - y)) + lam);
    let brackets = bracket_roots(map, 0.0, 1.0, 64);
    if brackets.len() > 1 {
        return Err(Error::NumericalInstability {
            op: "ruin_lt",
            msg: format!("{} roots of the y(s) equation in [0, 1] at s={s}", brackets.len()),
        });
    }
    fixed_point(map, 0.5, 1e-14, DEFAULT_DAMPING)
}

/// `psi~_u(s) = y(s) exp(-u mu (1 - y(s))) / s`.
pub fn ruin_lt(p: &MixedParams, u: f64, c: f64, mu_rate: f64, s: f64) -> Result<f64> {
    check_exp_args("ruin_lt", u, c, mu_rate)?;
    if !(s.is_finite() && s > 0.0) {
        return Err(Error::domain("ruin_lt", format!("need s > 0, got {s}")));
    }
    let y = ruin_y(p, c, mu_rate, s)?;
    Ok(y * (-u * mu_rate * (1.0 - y)).exp() / s)
}

/// `psi_u(t)` by Gaver-Stehfest inversion of [`ruin_lt`].
pub fn ruin_prob_lt(p: &MixedParams, u: f64, c: f64, mu_rate: f64, horizon: f64) -> Result<RuinEstimate> {
    let f = |s: f64| ruin_lt(p, u, c, mu_rate, s);
    let hi = try_laplace_invert(f, horizon, DEFAULT_ORDER)?;
    let lo = try_laplace_invert(f, horizon, DEFAULT_ORDER - 2)?;
    Ok(RuinEstimate {
        probability: hi,
        std_error: (hi - lo).abs(),
        n_paths: 0,
        horizon,
        method: RuinMethod::LaplaceInversion,
    })
}

/// Large-`u` asymptote `lambda U(t) P(X > u)` for subexponential claims.
pub fn ruin_asymptotic_subexp(p: &MixedParams, claims: &ClaimModel, u: f64, t: f64) -> Result<f64> {
    if !claims.is_subexponential() {
        return Err(Error::NotSubexponential(format!("{claims:?}")));
    }
    Ok(p.lambda() * mean_inverse(p, t)? * claims.tail(u))
}

/// `(lambda / D(s))^k` inverted on a Talbot contour: the density of the sum
/// of `k` interarrival times. Used to check the grid convolutions.
#[cfg(test)]
fn interarrival_sum_density(p: &MixedParams, k: usize, t: f64) -> f64 {
    crate::numerics::talbot_invert(
        |s: num_complex::Complex64| {
            let ln_s = s.ln();
            let d = p.c1() * (p.alpha1() * ln_s).exp() + p.c2() * (p.alpha2() * ln_s).exp();
            k as f64 * (p.lambda().ln() - (d + p.lambda()).ln())
        },
        t,
        40,
    )
}
