//! Surplus processes driven by the MFPP: the MFRP
//! `u + mu (1+rho) lambda Y(t) - sum X_i`, its variant with `U(t)` in place of
//! `Y(t)`, and the MFRP-II `u + c t - sum X_i`.

use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::Rng;
use rand_distr::{Exp, Pareto};
use serde::{Deserialize, Serialize};

use crate::compound::DiscreteClaimLaw;
use crate::ensemble::{try_map_paths, EnsembleSpec};
use crate::error::{Error, Result};
use crate::mfpp::{simulate_mfpp, CountingPath};
use crate::numerics::{Grid, GridFunction, SamplePath};
use crate::stats::{ols, Estimate};
use crate::subordinators::{
    cov_inverse_fixed_s, k_s, mean_inverse, sample_inverse_path, var_inverse_asymptotic, InversePath,
    MixedParams,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Variant {
    /// Premium `mu (1+rho) lambda Y(t)`.
    Mfrp,
    /// Premium `mu (1+rho) lambda U(t)`.
    MfrpVariant,
    /// Premium `c t`.
    Mfrp2,
}

/// Initial capital `u`, loading `rho`, claim mean `mu`, premium rate `c`
/// (MFRP-II only) and the surplus variant.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawRiskConfig", into = "RawRiskConfig")]
pub struct RiskConfig {
    u: f64,
    rho: f64,
    mu: f64,
    c: Option<f64>,
    variant: Variant,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawRiskConfig {
    u: f64,
    #[serde(default)]
    rho: f64,
    mu: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    c: Option<f64>,
    variant: Variant,
}

impl TryFrom<RawRiskConfig> for RiskConfig {
    type Error = Error;

    fn try_from(r: RawRiskConfig) -> Result<Self> {
        Self::new(r.u, r.rho, r.mu, r.c, r.variant)
    }
}

impl From<RiskConfig> for RawRiskConfig {
    fn from(c: RiskConfig) -> Self {
        RawRiskConfig {
            u: c.u,
            rho: c.rho,
            mu: c.mu,
            c: c.c,
            variant: c.variant,
        }
    }
}

impl RiskConfig {
    pub fn new(u: f64, rho: f64, mu: f64, c: Option<f64>, variant: Variant) -> Result<Self> {
        if !(u.is_finite() && u > 0.0) {
            return Err(Error::InvalidParams(format!("initial capital u must be positive, got {u}")));
        }
        if !(mu.is_finite() && mu > 0.0) {
            return Err(Error::InvalidParams(format!("claim mean mu must be positive, got {mu}")));
        }
        if !rho.is_finite() {
            return Err(Error::InvalidParams(format!("loading rho must be finite, got {rho}")));
        }
        match (variant, c) {
            (Variant::Mfrp2, Some(c)) if c.is_finite() && c > 0.0 => {}
            (Variant::Mfrp2, _) => {
                return Err(Error::InvalidParams("the MFRP-II needs a positive premium rate c".into()))
            }
            (_, Some(_)) => {
                return Err(Error::InvalidParams("premium rate c is only used by the MFRP-II".into()))
            }
            (_, None) => {}
        }
        if rho < 0.0 && variant != Variant::Mfrp2 {
            log::warn!("negative safety loading rho = {rho} violates the net profit condition");
        }
        Ok(Self { u, rho, mu, c, variant })
    }

    pub fn u(&self) -> f64 {
        self.u
    }

    pub fn rho(&self) -> f64 {
        self.rho
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    pub fn c(&self) -> Option<f64> {
        self.c
    }

    pub fn variant(&self) -> Variant {
        self.variant
    }

    pub fn with_u(&self, u: f64) -> Result<Self> {
        Self::new(u, self.rho, self.mu, self.c, self.variant)
    }
}

/// Claim-size law.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", try_from = "RawClaimModel", into = "RawClaimModel")]
pub enum ClaimModel {
    Exponential { rate: f64 },
    /// Pareto type I: `P(X > x) = (scale / x)^shape` for `x >= scale`.
    Pareto { shape: f64, scale: f64 },
    Discrete { law: DiscreteClaimLaw },
    Degenerate { value: f64 },
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
enum RawClaimModel {
    Exponential { rate: f64 },
    Pareto { shape: f64, scale: f64 },
    Discrete { law: DiscreteClaimLaw },
    Degenerate { value: f64 },
}

impl TryFrom<RawClaimModel> for ClaimModel {
    type Error = Error;

    fn try_from(r: RawClaimModel) -> Result<Self> {
        let m = match r {
            RawClaimModel::Exponential { rate } => ClaimModel::Exponential { rate },
            RawClaimModel::Pareto { shape, scale } => ClaimModel::Pareto { shape, scale },
            RawClaimModel::Discrete { law } => ClaimModel::Discrete { law },
            RawClaimModel::Degenerate { value } => ClaimModel::Degenerate { value },
        };
        m.validate()?;
        Ok(m)
    }
}

impl From<ClaimModel> for RawClaimModel {
    fn from(m: ClaimModel) -> Self {
        match m {
            ClaimModel::Exponential { rate } => RawClaimModel::Exponential { rate },
            ClaimModel::Pareto { shape, scale } => RawClaimModel::Pareto { shape, scale },
            ClaimModel::Discrete { law } => RawClaimModel::Discrete { law },
            ClaimModel::Degenerate { value } => RawClaimModel::Degenerate { value },
        }
    }
}

fn positive(name: &str, v: f64) -> Result<()> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidParams(format!("{name} must be positive, got {v}")))
    }
}

impl ClaimModel {
    pub fn exponential(rate: f64) -> Result<Self> {
        let m = Self::Exponential { rate };
        m.validate()?;
        Ok(m)
    }

    pub fn pareto(shape: f64, scale: f64) -> Result<Self> {
        let m = Self::Pareto { shape, scale };
        m.validate()?;
        Ok(m)
    }

    pub fn degenerate(value: f64) -> Result<Self> {
        let m = Self::Degenerate { value };
        m.validate()?;
        Ok(m)
    }

    fn validate(&self) -> Result<()> {
        match *self {
            Self::Exponential { rate } => positive("exponential rate", rate),
            Self::Pareto { shape, scale } => {
                positive("Pareto scale", scale)?;
                positive("Pareto shape", shape)?;
                if shape <= 1.0 {
                    return Err(Error::InvalidParams(format!(
                        "Pareto shape must exceed 1 for a finite mean, got {shape}"
                    )));
                }
                Ok(())
            }
            Self::Discrete { .. } => Ok(()),
            Self::Degenerate { value } => positive("degenerate claim value", value),
        }
    }

    pub fn mean(&self) -> f64 {
        match self {
            Self::Exponential { rate } => 1.0 / rate,
            Self::Pareto { shape, scale } => shape * scale / (shape - 1.0),
            Self::Discrete { law } => law.mean(),
            Self::Degenerate { value } => *value,
        }
    }

    /// `E X^2`; a Pareto law needs `shape > 2`.
    pub fn second_moment(&self) -> Result<f64> {
        Ok(match self {
            Self::Exponential { rate } => 2.0 / (rate * rate),
            Self::Pareto { shape, scale } => {
                if *shape <= 2.0 {
                    return Err(Error::domain(
                        "second_moment",
                        format!("Pareto shape {shape} <= 2 has an infinite second moment"),
                    ));
                }
                shape * scale * scale / (shape - 2.0)
            }
            Self::Discrete { law } => law.second_moment(),
            Self::Degenerate { value } => value * value,
        })
    }

    /// `P(X > x)`.
    pub fn tail(&self, x: f64) -> f64 {
        match self {
            Self::Exponential { rate } => (-rate * x.max(0.0)).exp(),
            Self::Pareto { shape, scale } => {
                if x < *scale {
                    1.0
                } else {
                    (scale / x).powf(*shape)
                }
            }
            Self::Discrete { law } => {
                let below: f64 = (1..=law.probs().len()).filter(|&i| (i as f64) <= x).map(|i| law.prob(i)).sum();
                (1.0 - below).max(0.0)
            }
            Self::Degenerate { value } => {
                if x < *value {
                    1.0
                } else {
                    0.0
                }
            }
        }
    }

    /// Smallest `x` with `P(X <= x) >= q`, for `q` in `[0, 1)`.
    pub fn quantile(&self, q: f64) -> Result<f64> {
        if !(0.0..1.0).contains(&q) {
            return Err(Error::domain("quantile", format!("need q in [0, 1), got {q}")));
        }
        Ok(match self {
            Self::Exponential { rate } => -(-q).ln_1p() / rate,
            Self::Pareto { shape, scale } => scale * (1.0 - q).powf(-1.0 / shape),
            Self::Discrete { law } => {
                let mut cdf = 0.0;
                let mut k = law.probs().len();
                for (i, r) in law.probs().iter().enumerate() {
                    cdf += r;
                    if cdf >= q {
                        k = i + 1;
                        break;
                    }
                }
                k as f64
            }
            Self::Degenerate { value } => *value,
        })
    }

    pub fn is_subexponential(&self) -> bool {
        matches!(self, Self::Pareto { .. })
    }

    pub fn sampler(&self) -> ClaimSampler {
        match self {
            Self::Exponential { rate } => ClaimSampler::Exp(Exp::new(*rate).expect("validated rate")),
            Self::Pareto { shape, scale } => {
                ClaimSampler::Pareto(Pareto::new(*scale, *shape).expect("validated Pareto law"))
            }
            Self::Discrete { law } => {
                ClaimSampler::Discrete(WeightedIndex::new(law.probs()).expect("validated weights"))
            }
            Self::Degenerate { value } => ClaimSampler::Fixed(*value),
        }
    }
}

/// Sampler built once per path from a [`ClaimModel`].
#[derive(Debug, Clone)]
pub enum ClaimSampler {
    Exp(Exp<f64>),
    Pareto(Pareto<f64>),
    Discrete(WeightedIndex<f64>),
    Fixed(f64),
}

impl Distribution<f64> for ClaimSampler {
    fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        match self {
            Self::Exp(d) => d.sample(rng),
            Self::Pareto(d) => d.sample(rng),
            Self::Discrete(d) => (d.sample(rng) + 1) as f64,
            Self::Fixed(v) => *v,
        }
    }
}

/// Surplus `R(t_i)` and the first grid index with `R < 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct SurplusPath {
    grid: Grid,
    values: Vec<f64>,
    ruin_index: Option<usize>,
}

impl SurplusPath {
    pub fn new(grid: Grid, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::Grid(format!("{} values on {} points", values.len(), grid.len())));
        }
        let ruin_index = values.iter().position(|&v| v < 0.0);
        Ok(Self { grid, values, ruin_index })
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn ruin_index(&self) -> Option<usize> {
        self.ruin_index
    }
}

fn check_claim_mean(cfg: &RiskConfig, claims: &ClaimModel) -> Result<()> {
    if cfg.variant != Variant::Mfrp2 && (claims.mean() - cfg.mu).abs() > 1e-9 * cfg.mu.max(1.0) {
        return Err(Error::ConfigMismatch {
            model: claims.mean(),
            configured: cfg.mu,
        });
    }
    Ok(())
}

/// Surplus on the grid of `y` for given counts `n`, drawing one claim per jump.
pub fn surplus_from_counts<R: Rng + ?Sized>(
    p: &MixedParams,
    cfg: &RiskConfig,
    claims: &ClaimModel,
    y: &InversePath,
    n: &CountingPath,
    rng: &mut R,
) -> Result<SurplusPath> {
    check_claim_mean(cfg, claims)?;
    if y.grid() != n.grid() {
        return Err(Error::Grid("inverse path and counting path are on different grids".into()));
    }
    let sampler = claims.sampler();
    let rate = cfg.mu * (1.0 + cfg.rho) * p.lambda();
    let mut total = 0.0;
    let mut prev = 0u64;
    let mut values = Vec::with_capacity(n.counts().len());
    for (i, &count) in n.counts().iter().enumerate() {
        for _ in prev..count {
            total += sampler.sample(rng);
        }
        prev = count;
        let t = y.grid().point(i);
        let premium = match cfg.variant {
            Variant::Mfrp => rate * y.values()[i],
            Variant::MfrpVariant => rate * mean_inverse(p, t)?,
            Variant::Mfrp2 => cfg.c.expect("validated") * t,
        };
        values.push(cfg.u + premium - total);
    }
    SurplusPath::new(*y.grid(), values)
}

/// Surplus path with claim counts from [`simulate_mfpp`] on `y`.
pub fn simulate_surplus<R: Rng + ?Sized>(
    p: &MixedParams,
    cfg: &RiskConfig,
    claims: &ClaimModel,
    y: &InversePath,
    rng: &mut R,
) -> Result<SurplusPath> {
    check_claim_mean(cfg, claims)?;
    let n = simulate_mfpp(p, y, rng);
    surplus_from_counts(p, cfg, claims, y, &n, rng)
}

/// `E R(t)`: `u + mu rho lambda U(t)` for the MFRP and its variant,
/// `u + c t - mu lambda U(t)` for the MFRP-II.
pub fn surplus_mean(p: &MixedParams, cfg: &RiskConfig, t: f64) -> Result<f64> {
    let lu = p.lambda() * mean_inverse(p, t)?;
    Ok(match cfg.variant {
        Variant::Mfrp | Variant::MfrpVariant => cfg.u + cfg.mu * cfg.rho * lu,
        Variant::Mfrp2 => cfg.u + cfg.c.expect("validated") * t - cfg.mu * lu,
    })
}

/// Which property of the mean `martingale_check` tested.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MeanProperty {
    /// `rho = 0`: `E R(t) - u` covers 0 within 3 SE at every time.
    Constant,
    /// `rho > 0`: estimated means increase along `t_list`.
    Increasing,
    /// `rho < 0`: estimated means decrease along `t_list`.
    Decreasing,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MartingaleReport {
    pub property: MeanProperty,
    /// `(t, estimate of E R(t) - u)`.
    pub rows: Vec<(f64, Estimate)>,
    pub holds: bool,
}

/// Checks the unconditional-mean consequence of the (sub/super)martingale
/// property of the MFRP: constant mean for `rho = 0`, increasing for
/// `rho > 0`, decreasing for `rho < 0`.
pub fn martingale_check(
    p: &MixedParams,
    cfg: &RiskConfig,
    claims: &ClaimModel,
    t_list: &[f64],
    ens: &EnsembleSpec,
) -> Result<MartingaleReport> {
    let horizon = t_list.iter().copied().fold(0.0, f64::max);
    let grid = Grid::new(ens.step, horizon)?;
    let idx: Vec<usize> = t_list
        .iter()
        .map(|&t| grid.index_of(t).ok_or_else(|| Error::Grid(format!("t = {t} is not on the grid"))))
        .collect::<Result<_>>()?;
    let paths = try_map_paths(ens.n_paths, ens.seed, ens.workers, |_, rng| {
        let y = sample_inverse_path(p, ens.op_step, &grid, rng)?;
        let r = simulate_surplus(p, cfg, claims, &y, rng)?;
        Ok(idx.iter().map(|&i| r.values()[i] - cfg.u).collect::<Vec<f64>>())
    })?;
    let rows: Vec<(f64, Estimate)> = t_list
        .iter()
        .enumerate()
        .map(|(j, &t)| {
            let xs: Vec<f64> = paths.iter().map(|row| row[j]).collect();
            (t, Estimate::mean_of(&xs, ens.seed))
        })
        .collect();
    let property = if cfg.rho == 0.0 {
        MeanProperty::Constant
    } else if cfg.rho > 0.0 {
        MeanProperty::Increasing
    } else {
        MeanProperty::Decreasing
    };
    let holds = match property {
        MeanProperty::Constant => rows.iter().all(|(_, e)| e.within(0.0, 3.0)),
        MeanProperty::Increasing => rows.windows(2).all(|w| w[1].1.value > w[0].1.value),
        MeanProperty::Decreasing => rows.windows(2).all(|w| w[1].1.value < w[0].1.value),
    };
    Ok(MartingaleReport { property, rows, holds })
}

fn check_order(op: &'static str, s: f64, t: f64) -> Result<()> {
    if !(0.0 <= s && s <= t) {
        return Err(Error::domain(op, format!("need 0 <= s <= t, got s={s}, t={t}")));
    }
    Ok(())
}

/// `Cov(R(s), R(t)) = mu^2 lambda^2 rho^2 Cov(Y(s), Y(t)) + E X^2 E N(s)` for the MFRP.
pub fn mfrp_cov(
    p: &MixedParams,
    cfg: &RiskConfig,
    claims: &ClaimModel,
    s: f64,
    t: f64,
    cov_y: f64,
    mean_n_s: f64,
) -> Result<f64> {
    check_order("mfrp_cov", s, t)?;
    let k = cfg.mu * p.lambda() * cfg.rho;
    Ok(k * k * cov_y + claims.second_moment()? * mean_n_s)
}

/// `Cov(R(s), R(t)) = E X^2 E N(s) + lambda^2 (E X)^2 Cov(Y(s), Y(t))` for the MFRP-II.
pub fn mfrp2_cov(
    p: &MixedParams,
    claims: &ClaimModel,
    s: f64,
    t: f64,
    cov_y: f64,
    mean_n_s: f64,
) -> Result<f64> {
    check_order("mfrp2_cov", s, t)?;
    let k = claims.mean() * p.lambda();
    Ok(claims.second_moment()? * mean_n_s + k * k * cov_y)
}

/// `Z(t_i) = R(t_i + delta) - R(t_i)` for every `t_i` with `t_i + delta` on the grid.
pub fn increments(path: &SurplusPath, delta: f64) -> Result<SamplePath> {
    let h = path.grid.step();
    let k = (delta / h).round();
    if !(k >= 1.0 && (k * h - delta).abs() <= 1e-9 * h) {
        return Err(Error::Grid(format!("delta = {delta} is not a positive multiple of the step {h}")));
    }
    let k = k as usize;
    if k >= path.values.len() {
        return Err(Error::Grid(format!("delta = {delta} exceeds the path horizon")));
    }
    let values: Vec<f64> = path.values.windows(k + 1).map(|w| w[k] - w[0]).collect();
    GridFunction::new(Grid::with_len(h, values.len())?, values)
}

/// Decay exponent `nu` of `corr ~ d t^-nu`: the negated least-squares slope of
/// `ln corr` against `ln t`.
pub fn lrd_exponent(corr_values: &[(f64, f64)]) -> Result<f64> {
    if corr_values.len() < 2 {
        return Err(Error::Fit("need at least two correlation values".into()));
    }
    if let Some(&(t, c)) = corr_values.iter().find(|&&(t, c)| !(t > 0.0 && c > 0.0)) {
        return Err(Error::Fit(format!("times and correlations must be positive, got ({t}, {c})")));
    }
    let (lo, hi) = corr_values
        .iter()
        .fold((f64::INFINITY, 0.0f64), |(lo, hi), &(t, _)| (lo.min(t), hi.max(t)));
    if hi / lo < 100.0 {
        return Err(Error::Fit(format!("times span {lo}..{hi}, less than two decades")));
    }
    let x: Vec<f64> = corr_values.iter().map(|&(t, _)| t.ln()).collect();
    let y: Vec<f64> = corr_values.iter().map(|&(_, c)| c.ln()).collect();
    Ok(-ols(&x, &y).0)
}

/// Large-`t` correlation `Corr(R(s), R(t))` of the MFRP: the covariance at
/// fixed `s` from its large-`t` limit, and `Var R(t)` from the large-`t`
/// variance of `Y` and the exact `E N(t)`. `var_y_s` is `Var Y(s)`.
pub fn lrd_correlation(
    p: &MixedParams,
    cfg: &RiskConfig,
    claims: &ClaimModel,
    s: f64,
    var_y_s: f64,
    t: f64,
) -> Result<f64> {
    check_order("lrd_correlation", s, t)?;
    let lam = p.lambda();
    let cov = mfrp_cov(p, cfg, claims, s, t, cov_inverse_fixed_s(p, s)?, lam * mean_inverse(p, s)?)?;
    let var_s = mfrp_cov(p, cfg, claims, s, s, var_y_s, lam * mean_inverse(p, s)?)?;
    let var_t = mfrp_cov(p, cfg, claims, t, t, var_inverse_asymptotic(p, t)?, lam * mean_inverse(p, t)?)?;
    Ok(cov / (var_s * var_t).sqrt())
}

/// Leading large-`t` term of `Var Z(t)`:
/// `lambda alpha2 delta E X^2 t^(alpha2-1) / (C2 Gamma(alpha2+1))`.
pub fn increment_var_leading(p: &MixedParams, claims: &ClaimModel, delta: f64, t: f64) -> Result<f64> {
    if p.c2() == 0.0 {
        return Err(Error::domain("increment_var_leading", "needs c2 > 0"));
    }
    let a = p.alpha2();
    Ok(p.lambda() * a * delta * claims.second_moment()? * t.powf(a - 1.0)
        / (p.c2() * statrs::function::gamma::gamma(a + 1.0)))
}

/// Large-`t` correlation `Corr(Z(s), Z(t))` of the increment process:
/// `mu^2 lambda^2 rho^2 (K(s+delta) - K(s)) (t^(alpha2-1) - (t+delta)^(alpha2-1))`
/// over `sqrt(Var Z(s) Var Z(t))`, both variances from their leading term.
/// Only the dependence on `t` is meaningful.
pub fn srd_correlation(
    p: &MixedParams,
    cfg: &RiskConfig,
    claims: &ClaimModel,
    s: f64,
    delta: f64,
    t: f64,
) -> Result<f64> {
    check_order("srd_correlation", s + delta, t)?;
    let a = p.alpha2();
    let k = cfg.mu * p.lambda() * cfg.rho;
    let cov = k * k * (k_s(p, s + delta)? - k_s(p, s)?) * (t.powf(a - 1.0) - (t + delta).powf(a - 1.0));
    let var_s = increment_var_leading(p, claims, delta, s.max(delta))?;
    let var_t = increment_var_leading(p, claims, delta, t)?;
    Ok(cov / (var_s * var_t).sqrt())
}
