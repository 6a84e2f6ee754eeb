//! Compound MFPP `C(t) = X_1 + ... + X_N(t)` with positive-integer claims.

use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::mfpp::{state_prob_pn_grid, state_prob_pn, CountingPath, PnMethod};
use crate::numerics::{caputo_l1, Grid, GridFunction, SamplePath};
use crate::subordinators::{mean_inverse, MixedParams};

/// `P(X = i) = probs[i - 1]` for `i = 1..=probs.len()`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawLaw", into = "RawLaw")]
pub struct DiscreteClaimLaw {
    probs: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawLaw {
    probs: Vec<f64>,
}

impl TryFrom<RawLaw> for DiscreteClaimLaw {
    type Error = Error;

    fn try_from(r: RawLaw) -> Result<Self> {
        Self::new(r.probs)
    }
}

impl From<DiscreteClaimLaw> for RawLaw {
    fn from(l: DiscreteClaimLaw) -> Self {
        RawLaw { probs: l.probs }
    }
}

impl DiscreteClaimLaw {
    pub fn new(probs: Vec<f64>) -> Result<Self> {
        if probs.is_empty() || probs.iter().any(|&r| !(r.is_finite() && r >= 0.0)) {
            return Err(Error::InvalidParams(
                "claim probabilities must be a non-empty list of finite non-negative numbers".into(),
            ));
        }
        let total: f64 = probs.iter().sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidParams(format!("claim probabilities sum to {total}, not 1")));
        }
        Ok(Self { probs })
    }

    /// All mass on `k >= 1`.
    pub fn degenerate(k: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidParams("claims must be at least 1".into()));
        }
        let mut probs = vec![0.0; k];
        probs[k - 1] = 1.0;
        Ok(Self { probs })
    }

    /// `P(X = i)`, zero outside the support.
    pub fn prob(&self, i: usize) -> f64 {
        if i == 0 {
            0.0
        } else {
            self.probs.get(i - 1).copied().unwrap_or(0.0)
        }
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn mean(&self) -> f64 {
        self.probs.iter().enumerate().map(|(i, r)| (i + 1) as f64 * r).sum()
    }

    pub fn second_moment(&self) -> f64 {
        self.probs.iter().enumerate().map(|(i, r)| ((i + 1) * (i + 1)) as f64 * r).sum()
    }

    fn sampler(&self) -> WeightedIndex<f64> {
        WeightedIndex::new(&self.probs).expect("validated weights")
    }

    /// `r[k][m] = P(X_1 + ... + X_k = m)` for `k, m <= n`.
    pub fn convolution_table(&self, n: usize) -> Vec<Vec<f64>> {
        let mut r = vec![vec![0.0; n + 1]; n + 1];
        r[0][0] = 1.0;
        for k in 1..=n {
            // k claims total at least k
            for m in k..=n {
                r[k][m] = (1..=m - (k - 1)).map(|i| self.prob(i) * r[k - 1][m - i]).sum();
            }
        }
        r
    }
}

/// `C(t_i)`: each jump of the counting path adds an independent claim.
pub fn simulate_compound<R: Rng + ?Sized>(path: &CountingPath, law: &DiscreteClaimLaw, rng: &mut R) -> SamplePath {
    let sampler = law.sampler();
    let mut total = 0u64;
    let mut prev = 0u64;
    let values = path
        .counts()
        .iter()
        .map(|&c| {
            for _ in prev..c {
                total += sampler.sample(rng) as u64 + 1;
            }
            prev = c;
            total as f64
        })
        .collect();
    GridFunction::new(*path.grid(), values).expect("one value per grid point")
}

/// `P(C(t) = n) = sum_{k=1..n} P(X_1 + ... + X_k = n) p_k(t)`, and `p_0(t)` for `n = 0`.
pub fn compound_state_prob(p: &MixedParams, law: &DiscreteClaimLaw, n: usize, t: f64) -> Result<f64> {
    if n == 0 {
        return state_prob_pn(p, 0, t, PnMethod::Laplace);
    }
    let r = law.convolution_table(n);
    let mut q = 0.0;
    for (k, row) in r.iter().enumerate().skip(1) {
        if row[n] > 0.0 {
            q += row[n] * state_prob_pn(p, k, t, PnMethod::Laplace)?;
        }
    }
    Ok(q)
}

/// `q_0, ..., q_n` on `grid`.
fn compound_probs_grid(p: &MixedParams, law: &DiscreteClaimLaw, n: usize, grid: &Grid) -> Result<Vec<GridFunction>> {
    let r = law.convolution_table(n);
    let pk: Vec<GridFunction> = (0..=n)
        .map(|k| state_prob_pn_grid(p, k, grid, PnMethod::Laplace))
        .collect::<Result<_>>()?;
    let mut q = vec![pk[0].clone()];
    for m in 1..=n {
        let mut acc = GridFunction::from_fn(*grid, |_| 0.0);
        for k in 1..=m {
            if r[k][m] > 0.0 {
                acc = acc.axpby(1.0, &pk[k], r[k][m])?;
            }
        }
        q.push(acc);
    }
    Ok(q)
}

/// `C1 D^alpha1 q_n + C2 D^alpha2 q_n + lambda q_n - lambda sum_{i=1..n} r_i q_{n-i}`
/// with Caputo derivatives from the L1 scheme; zero up to discretization error.
pub fn compound_fde_residual(p: &MixedParams, law: &DiscreteClaimLaw, n: usize, grid: &Grid) -> Result<GridFunction> {
    if grid.len() < 3 {
        return Err(Error::Grid("the residual needs at least 3 grid points".into()));
    }
    let q = compound_probs_grid(p, law, n, grid)?;
    let lam = p.lambda();
    let mut res = q[n].scaled(lam);
    for (a, c) in p.components() {
        res = res.axpby(1.0, &caputo_l1(&q[n], a)?, c)?;
    }
    for i in 1..=n {
        let r = law.prob(i);
        if r > 0.0 {
            res = res.axpby(1.0, &q[n - i], -lam * r)?;
        }
    }
    Ok(res)
}

/// `E C(t) = lambda U(t) E X`.
pub fn compound_mean(p: &MixedParams, law: &DiscreteClaimLaw, t: f64) -> Result<f64> {
    Ok(p.lambda() * mean_inverse(p, t)? * law.mean())
}

/// `Var C(t) = lambda U(t) E X^2 + lambda^2 Var Y(t) (E X)^2`, with `Var Y(t)` supplied.
pub fn compound_var(p: &MixedParams, law: &DiscreteClaimLaw, t: f64, var_y: f64) -> Result<f64> {
    let l = p.lambda();
    let m = law.mean();
    Ok(l * mean_inverse(p, t)? * law.second_moment() + l * l * var_y * m * m)
}

/// `Var C(t) - E C(t) = lambda U(t) (E X^2 - E X) + lambda^2 Var Y(t) (E X)^2`.
pub fn compound_overdispersion(p: &MixedParams, law: &DiscreteClaimLaw, t: f64, var_y: f64) -> Result<f64> {
    let l = p.lambda();
    let m = law.mean();
    Ok(l * mean_inverse(p, t)? * (law.second_moment() - m) + l * l * var_y * m * m)
}
