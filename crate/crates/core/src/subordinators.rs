//! Stable and mixed stable subordinators, their inverses, and the moments of
//! the inverse mixed stable subordinator.

use std::f64::consts::PI;

use rand::Rng;
use rand_distr::{Exp1, Open01};
use serde::{Deserialize, Serialize};
use statrs::function::gamma::gamma;

use crate::error::{Error, Result};
use crate::mittag_leffler::{ml2, ml3, MLParams};
use crate::numerics::Grid;

/// `(alpha1, alpha2, C1, C2, lambda)`: the mixed subordinator
/// `D = C1^(1/alpha1) D_alpha1 + C2^(1/alpha2) D_alpha2` with Laplace
/// exponent `C1 s^alpha1 + C2 s^alpha2`, and the Poisson rate `lambda`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawMixedParams", into = "RawMixedParams")]
pub struct MixedParams {
    alpha1: f64,
    alpha2: f64,
    c1: f64,
    c2: f64,
    lambda: f64,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawMixedParams {
    alpha1: f64,
    alpha2: f64,
    c1: f64,
    c2: f64,
    lambda: f64,
}

impl TryFrom<RawMixedParams> for MixedParams {
    type Error = Error;
    fn try_from(r: RawMixedParams) -> Result<Self> {
        MixedParams::new(r.alpha1, r.alpha2, r.c1, r.c2, r.lambda)
    }
}

impl From<MixedParams> for RawMixedParams {
    fn from(p: MixedParams) -> Self {
        RawMixedParams {
            alpha1: p.alpha1,
            alpha2: p.alpha2,
            c1: p.c1,
            c2: p.c2,
            lambda: p.lambda,
        }
    }
}

impl MixedParams {
    pub fn new(alpha1: f64, alpha2: f64, c1: f64, c2: f64, lambda: f64) -> Result<Self> {
        let bad = |m: String| Err(Error::InvalidParams(m));
        for (name, a) in [("alpha1", alpha1), ("alpha2", alpha2)] {
            if !(a > 0.0 && a < 1.0) {
                return bad(format!("{name} must lie in (0, 1), got {a}"));
            }
        }
        if !(c1 >= 0.0 && c2 >= 0.0) || (c1 + c2 - 1.0).abs() > 1e-12 {
            return bad(format!("need c1, c2 >= 0 with c1 + c2 = 1, got {c1} and {c2}"));
        }
        if c1 > 0.0 && c2 > 0.0 && alpha2 >= alpha1 {
            return bad(format!("need alpha2 < alpha1, got {alpha2} and {alpha1}"));
        }
        if !(lambda.is_finite() && lambda > 0.0) {
            return bad(format!("lambda must be positive, got {lambda}"));
        }
        Ok(Self { alpha1, alpha2, c1, c2, lambda })
    }

    pub fn alpha1(&self) -> f64 {
        self.alpha1
    }
    pub fn alpha2(&self) -> f64 {
        self.alpha2
    }
    pub fn c1(&self) -> f64 {
        self.c1
    }
    pub fn c2(&self) -> f64 {
        self.c2
    }
    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    /// Same subordinator with a different Poisson rate.
    pub fn with_lambda(&self, lambda: f64) -> Result<Self> {
        Self::new(self.alpha1, self.alpha2, self.c1, self.c2, lambda)
    }

    /// The `(exponent, weight)` pairs with non-zero weight.
    pub(crate) fn components(&self) -> impl Iterator<Item = (f64, f64)> {
        [(self.alpha1, self.c1), (self.alpha2, self.c2)]
            .into_iter()
            .filter(|&(_, c)| c > 0.0)
    }

    /// `C1 s^alpha1 + C2 s^alpha2`, so that `E exp(-s D(1)) = exp(-laplace_exponent(s))`.
    pub fn laplace_exponent(&self, s: f64) -> f64 {
        self.components().map(|(a, c)| c * s.powf(a)).sum()
    }
}

/// Subordinator values `D(s_i)` on a uniform operational-time grid.
#[derive(Debug, Clone, PartialEq)]
pub struct SubordinatorPath {
    grid: Grid,
    values: Vec<f64>,
}

impl SubordinatorPath {
    /// Checks `values[0] = 0` and monotonicity.
    pub fn new(grid: Grid, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::Grid(format!("{} values on {} points", values.len(), grid.len())));
        }
        if values[0] != 0.0 || values.windows(2).any(|w| !(w[1] >= w[0])) {
            return Err(Error::InvalidParams("subordinator path must start at 0 and be non-decreasing".into()));
        }
        Ok(Self { grid, values })
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn last_value(&self) -> f64 {
        *self.values.last().unwrap()
    }

    /// Appends increments until `D` exceeds `level`.
    pub fn extend_past<R: Rng + ?Sized>(&mut self, p: &MixedParams, level: f64, rng: &mut R) {
        let h = self.grid.step();
        let mut d = self.last_value();
        while d <= level {
            d += mixed_increment(p, h, rng);
            self.values.push(d);
        }
        self.grid = self.grid.extended(self.values.len());
    }
}

/// Inverse subordinator values `Y(t_i)` on a real-time grid.
#[derive(Debug, Clone, PartialEq)]
pub struct InversePath {
    grid: Grid,
    values: Vec<f64>,
}

impl InversePath {
    pub fn new(grid: Grid, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::Grid(format!("{} values on {} points", values.len(), grid.len())));
        }
        if values.iter().any(|v| !(*v >= 0.0)) || values.windows(2).any(|w| w[1] < w[0]) {
            return Err(Error::InvalidParams("inverse path must be non-negative and non-decreasing".into()));
        }
        Ok(Self { grid, values })
    }

    /// `Y = 0` on the whole grid.
    pub fn zero(grid: Grid) -> Self {
        Self { values: vec![0.0; grid.len()], grid }
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }
}

/// Positive `alpha`-stable variate with `E exp(-s X) = exp(-dt s^alpha)`
/// (Kanter's representation).
pub fn sample_stable_increment<R: Rng + ?Sized>(alpha: f64, dt: f64, rng: &mut R) -> f64 {
    let u = PI * rng.sample::<f64, _>(Open01);
    let e: f64 = rng.sample(Exp1);
    let a = (alpha * u).sin() / u.sin().powf(1.0 / alpha);
    let b = (((1.0 - alpha) * u).sin() / e).powf((1.0 - alpha) / alpha);
    dt.powf(1.0 / alpha) * a * b
}

/// Increment of the mixed subordinator over operational time `ds`.
pub fn mixed_increment<R: Rng + ?Sized>(p: &MixedParams, ds: f64, rng: &mut R) -> f64 {
    let mut inc = 0.0;
    for (a, c) in [(p.alpha1, p.c1), (p.alpha2, p.c2)] {
        if c > 0.0 {
            inc += sample_stable_increment(a, c * ds, rng);
        }
    }
    inc
}

/// Mixed subordinator on `grid`, one pair of independent stable increments
/// per step. A zero weight drops its component.
pub fn sample_mixed_path<R: Rng + ?Sized>(p: &MixedParams, grid: &Grid, rng: &mut R) -> SubordinatorPath {
    let h = grid.step();
    let mut values = Vec::with_capacity(grid.len());
    let mut d = 0.0;
    values.push(d);
    for _ in 1..grid.len() {
        d += mixed_increment(p, h, rng);
        values.push(d);
    }
    SubordinatorPath { grid: *grid, values }
}

/// Mixed subordinator with step `h_op`, sampled until it exceeds `level`.
pub fn sample_mixed_path_past<R: Rng + ?Sized>(
    p: &MixedParams,
    h_op: f64,
    level: f64,
    rng: &mut R,
) -> Result<SubordinatorPath> {
    let mut path = SubordinatorPath {
        grid: Grid::with_len(h_op, 1)?,
        values: vec![0.0],
    };
    path.extend_past(p, level, rng);
    Ok(path)
}

/// First passage `Y(t) = inf{s : D(s) > t}` of the piecewise-linear
/// interpolant of `d`, by one merged sweep over both monotone sequences.
///
/// Interpolating keeps `Y` continuous and makes the inverse exact for linear
/// `D`; `|Y - Y_true| <= h_op` for the underlying path. A jump of `D` over
/// `t` maps to the operational time of the jump; if `t` equals a level where
/// `D` is flat, the right end of the flat piece is returned.
pub fn inverse_path(d: &SubordinatorPath, t_grid: &Grid) -> Result<InversePath> {
    let horizon = t_grid.last();
    if d.last_value() <= horizon {
        return Err(Error::ExtendNeeded { reached: d.last_value(), horizon });
    }
    let h = d.grid.step();
    let dv = &d.values;
    let mut out = Vec::with_capacity(t_grid.len());
    let mut j = 1;
    for t in t_grid.points() {
        while dv[j] <= t {
            j += 1;
        }
        // dv[j-1] <= t < dv[j]
        let frac = (t - dv[j - 1]) / (dv[j] - dv[j - 1]);
        out.push(((j - 1) as f64 + frac) * h);
    }
    Ok(InversePath { grid: *t_grid, values: out })
}

/// Samples `D` with step `h_op` past the end of `t_grid` and inverts it.
pub fn sample_inverse_path<R: Rng + ?Sized>(
    p: &MixedParams,
    h_op: f64,
    t_grid: &Grid,
    rng: &mut R,
) -> Result<InversePath> {
    let d = sample_mixed_path_past(p, h_op, t_grid.last(), rng)?;
    inverse_path(&d, t_grid)
}

fn check_time(op: &'static str, t: f64) -> Result<()> {
    if !(t.is_finite() && t >= 0.0) {
        return Err(Error::domain(op, format!("time must be finite and >= 0, got {t}")));
    }
    Ok(())
}

/// `U(t) = E Y(t) = (t^alpha1 / C1) E_{alpha1-alpha2, alpha1+1}(-C2 t^(alpha1-alpha2) / C1)`.
pub fn mean_inverse(p: &MixedParams, t: f64) -> Result<f64> {
    check_time("mean_inverse", t)?;
    if t == 0.0 {
        return Ok(0.0);
    }
    if p.c2 == 0.0 {
        return Ok(t.powf(p.alpha1) / (p.c1 * gamma(p.alpha1 + 1.0)));
    }
    if p.c1 == 0.0 {
        return Ok(t.powf(p.alpha2) / (p.c2 * gamma(p.alpha2 + 1.0)));
    }
    let d = p.alpha1 - p.alpha2;
    let e = ml2(d, p.alpha1 + 1.0, -p.c2 * t.powf(d) / p.c1)?;
    Ok(t.powf(p.alpha1) / p.c1 * e)
}

/// Which end of the time axis an asymptote describes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    Small,
    Large,
}

/// Small-`t` and large-`t` asymptotes of `U(t)`:
/// `t^alpha1 / (C1 Gamma(alpha1+1))` and `t^alpha2 / (C2 Gamma(alpha2+1))`.
pub fn mean_inverse_asymptotic(p: &MixedParams, t: f64, regime: Regime) -> Result<f64> {
    check_time("mean_inverse_asymptotic", t)?;
    let (a, c) = match regime {
        Regime::Small => (p.alpha1, p.c1),
        Regime::Large => (p.alpha2, p.c2),
    };
    if c == 0.0 {
        return Err(Error::domain(
            "mean_inverse_asymptotic",
            format!("the {regime:?} regime needs a non-zero weight on its exponent"),
        ));
    }
    Ok(t.powf(a) / (c * gamma(a + 1.0)))
}

/// Large-`t` variance `t^(2 alpha2) / C2^2 (2/Gamma(2alpha2+1) - 1/Gamma(alpha2+1)^2)`.
pub fn var_inverse_asymptotic(p: &MixedParams, t: f64) -> Result<f64> {
    check_time("var_inverse_asymptotic", t)?;
    if p.c2 == 0.0 {
        return Err(Error::domain("var_inverse_asymptotic", "needs c2 > 0"));
    }
    let a = p.alpha2;
    let g = gamma(a + 1.0);
    Ok(t.powf(2.0 * a) / (p.c2 * p.c2) * (2.0 / gamma(2.0 * a + 1.0) - 1.0 / (g * g)))
}

/// Large-`t` limit of `Cov(Y(s), Y(t))` at fixed `s`:
/// `s^(2 alpha1) / C1^2 E^2_{alpha1-alpha2, 2alpha1+1}(-C2 s^(alpha1-alpha2) / C1)`.
pub fn cov_inverse_fixed_s(p: &MixedParams, s: f64) -> Result<f64> {
    check_time("cov_inverse_fixed_s", s)?;
    if p.c1 == 0.0 {
        return Err(Error::domain("cov_inverse_fixed_s", "needs c1 > 0"));
    }
    if s == 0.0 {
        return Ok(0.0);
    }
    let d = p.alpha1 - p.alpha2;
    let e = ml3(&MLParams::new(d, 2.0 * p.alpha1 + 1.0, 2.0)?, -p.c2 * s.powf(d) / p.c1)?;
    Ok(s.powf(2.0 * p.alpha1) / (p.c1 * p.c1) * e)
}

/// `K(s) = s^(alpha1+1) / (C1 C2 Gamma(alpha2)) sum_k (k d + alpha1) x^k / Gamma(k d + alpha1 + 2)`
/// with `d = alpha1 - alpha2`, `x = -C2 s^d / C1`, evaluated as
/// `E_{d, alpha1+1}(x) - E_{d, alpha1+2}(x)`.
pub fn k_s(p: &MixedParams, s: f64) -> Result<f64> {
    check_time("k_s", s)?;
    if p.c1 == 0.0 || p.c2 == 0.0 {
        return Err(Error::domain("k_s", "needs c1 > 0 and c2 > 0"));
    }
    if s == 0.0 {
        return Ok(0.0);
    }
    let d = p.alpha1 - p.alpha2;
    let x = -p.c2 * s.powf(d) / p.c1;
    let sum = ml2(d, p.alpha1 + 1.0, x)? - ml2(d, p.alpha1 + 2.0, x)?;
    Ok(s.powf(p.alpha1 + 1.0) / (p.c1 * p.c2 * gamma(p.alpha2)) * sum)
}

/// Covariance asymptote with its first correction:
/// `cov_inverse_fixed_s(s) - t^(alpha2-1) K(s)`.
pub fn cov_inverse_corrected(p: &MixedParams, s: f64, t: f64) -> Result<f64> {
    check_time("cov_inverse_corrected", t)?;
    if t < s {
        return Err(Error::domain("cov_inverse_corrected", format!("need s <= t, got s={s}, t={t}")));
    }
    Ok(cov_inverse_fixed_s(p, s)? - t.powf(p.alpha2 - 1.0) * k_s(p, s)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ensemble::substream;

    fn ref_params() -> MixedParams {
        MixedParams::new(0.9, 0.5, 0.5, 0.5, 1.0).unwrap()
    }

    #[test]
    fn validation() {
        assert!(MixedParams::new(0.5, 0.9, 0.5, 0.5, 1.0).is_err());
        assert!(MixedParams::new(0.9, 0.5, 0.6, 0.5, 1.0).is_err());
        assert!(MixedParams::new(0.9, 0.5, 0.5, 0.5, 0.0).is_err());
        assert!(MixedParams::new(1.0, 0.5, 0.5, 0.5, 1.0).is_err());
        // order is irrelevant once a weight vanishes
        assert!(MixedParams::new(0.5, 0.9, 1.0, 0.0, 1.0).is_ok());
    }

    #[test]
    fn serde_validates() {
        let ok: MixedParams = serde_json::from_str(
            r#"{"alpha1":0.9,"alpha2":0.5,"c1":0.5,"c2":0.5,"lambda":2}"#,
        )
        .unwrap();
        assert_eq!(ok.lambda(), 2.0);
        assert!(serde_json::from_str::<MixedParams>(
            r#"{"alpha1":0.9,"alpha2":0.5,"c1":0.7,"c2":0.5,"lambda":2}"#
        )
        .is_err());
    }

    #[test]
    fn stable_laplace_transform() {
        let mut rng = substream(1, 0);
        let n = 100_000;
        let xs: Vec<f64> = (0..n)
            .map(|_| (-2.0 * sample_stable_increment(0.5, 1.0, &mut rng)).exp())
            .collect();
        let e = crate::stats::Estimate::mean_of(&xs, 1);
        assert!(e.within((-(2.0f64).sqrt()).exp(), 3.0), "{e:?}");
    }

    #[test]
    fn stable_draws_positive_and_median_near_one() {
        let mut rng = substream(2, 0);
        let mut xs: Vec<f64> = (0..20_001).map(|_| sample_stable_increment(0.99, 1.0, &mut rng)).collect();
        assert!(xs.iter().all(|&x| x > 0.0));
        xs.sort_by(f64::total_cmp);
        let med = xs[10_000];
        assert!((med - 1.0).abs() < 0.05, "{med}");
    }

    #[test]
    fn linear_subordinator_inverts_exactly() {
        let g = Grid::with_len(0.01, 2001).unwrap();
        let d = SubordinatorPath::new(g, g.points().map(|s| 2.0 * s).collect()).unwrap();
        let tg = Grid::new(0.05, 30.0).unwrap();
        let y = inverse_path(&d, &tg).unwrap();
        assert_eq!(y.values()[0], 0.0);
        for (t, v) in tg.points().zip(y.values()) {
            assert!((v - t / 2.0).abs() < 1e-12, "t={t}: {v}");
        }
        let short = Grid::new(0.05, 50.0).unwrap();
        assert!(matches!(inverse_path(&d, &short), Err(Error::ExtendNeeded { .. })));
    }

    #[test]
    fn flat_piece_returns_left_end() {
        let g = Grid::with_len(1.0, 4).unwrap();
        let d = SubordinatorPath::new(g, vec![0.0, 1.0, 1.0, 3.0]).unwrap();
        let y = inverse_path(&d, &Grid::with_len(0.5, 5).unwrap()).unwrap();
        // t = 1 sits on the flat piece [1, 2]: the first s with D(s) > 1 is 2
        assert_eq!(y.values(), &[0.0, 0.5, 2.0, 2.25, 2.5]);
    }

    #[test]
    fn mean_inverse_reductions() {
        let p = MixedParams::new(0.7, 0.3, 1.0, 0.0, 1.0).unwrap();
        for t in [0.0f64, 0.3, 2.0, 50.0] {
            let want = t.powf(0.7) / gamma(1.7);
            assert!((mean_inverse(&p, t).unwrap() - want).abs() < 1e-12);
            assert!((mean_inverse_asymptotic(&p, t, Regime::Small).unwrap() - want).abs() < 1e-12);
        }
        assert!(mean_inverse_asymptotic(&p, 2.0, Regime::Large).is_err());
        assert!(var_inverse_asymptotic(&p, 2.0).is_err());
        assert!(mean_inverse(&p, -1.0).is_err());
        let q = MixedParams::new(0.7, 0.3, 0.0, 1.0, 1.0).unwrap();
        assert!((mean_inverse(&q, 2.0).unwrap() - 2.0f64.powf(0.3) / gamma(1.3)).abs() < 1e-12);
        assert!(cov_inverse_fixed_s(&q, 1.0).is_err());
    }

    #[test]
    fn tau_asymptotes() {
        let p = ref_params();
        let big = mean_inverse(&p, 1e4).unwrap() / mean_inverse_asymptotic(&p, 1e4, Regime::Large).unwrap();
        let small = mean_inverse(&p, 1e-4).unwrap() / mean_inverse_asymptotic(&p, 1e-4, Regime::Small).unwrap();
        assert!((big - 1.0).abs() < 0.05, "{big}");
        assert!((small - 1.0).abs() < 0.05, "{small}");
    }

    #[test]
    fn variance_asymptote_shape() {
        let p = ref_params();
        let r = var_inverse_asymptotic(&p, 20.0).unwrap() / var_inverse_asymptotic(&p, 10.0).unwrap();
        assert!((r - 2.0f64.powf(1.0)).abs() < 1e-12);
        for a2 in [0.05, 0.3, 0.5, 0.8, 0.95] {
            let q = MixedParams::new(0.99, a2, 0.5, 0.5, 1.0).unwrap();
            assert!(var_inverse_asymptotic(&q, 3.0).unwrap() > 0.0);
        }
    }

    #[test]
    fn covariance_limits() {
        let p = ref_params();
        assert_eq!(cov_inverse_fixed_s(&p, 0.0).unwrap(), 0.0);
        for s in [0.1, 0.5, 1.0, 2.0] {
            let k = k_s(&p, s).unwrap();
            assert!(k > 0.0, "K({s}) = {k}");
            let lim = cov_inverse_fixed_s(&p, s).unwrap();
            assert!(cov_inverse_corrected(&p, s, 10.0).unwrap() < lim);
            let far = cov_inverse_corrected(&p, s, 1e12).unwrap();
            assert!((far - lim).abs() < 1e-5 * lim);
        }
    }

    #[test]
    fn k_matches_direct_series() {
        let p = ref_params();
        let s: f64 = 0.7;
        let d = 0.4;
        let x = -s.powf(d);
        let direct: f64 = (0..80)
            .map(|k| {
                let k = k as f64;
                (k * d + 0.9) * x.powf(k) / gamma(k * d + 2.9)
            })
            .sum();
        let want = s.powf(1.9) / (0.25 * gamma(0.5)) * direct;
        assert!((k_s(&p, s).unwrap() - want).abs() < 1e-12);
    }
}
