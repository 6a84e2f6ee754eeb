//! The mixed fractional Poisson process `N(Y(t))`: simulation by time change,
//! the interarrival law, state probabilities, pgf and moments.
//!
//! Every closed form here is built from the resolvent
//! `R(rho, t) = L^-1[s^(rho-1) / (C1 s^alpha1 + C2 s^alpha2 + lambda)](t)`,
//! expanded as a series of three-parameter Mittag-Leffler functions:
//! `t^(alpha1-rho)/C1 sum_k (-C2 t^(alpha1-alpha2)/C1)^k
//!  E^(k+1)_{alpha1, alpha1+(alpha1-alpha2)k-rho+1}(-lambda t^alpha1 / C1)`.
//! Where that alternating series loses too many digits to cancellation the
//! transform is inverted on a Talbot contour instead.

use num_complex::Complex64;
use rand::Rng;
use rand_distr::Exp1;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::mittag_leffler::{ml2, ml3, recip_gamma, MLParams};
use crate::numerics::{
    caputo_l1, convolve_power, talbot_invert, try_laplace_invert, Grid, GridFunction, DEFAULT_ORDER,
};
use crate::subordinators::{mean_inverse, mixed_increment, InversePath, MixedParams};

/// Default truncation cap for the k-series.
pub const DEFAULT_KMAX: usize = 200;
/// Largest gap between the two methods of `state_prob_pn_checked`.
pub const CROSS_CHECK_TOL: f64 = 5e-3;

/// The k-series is used while `(C2/C1)^(1/d) t` stays below this; beyond it
/// the terms peak around `exp((C2/C1)^(1/d) t)` and the contour is used.
const SERIES_REACH: f64 = 6.0;
const CANCELLATION_LIMIT: f64 = 1e4;
const CONTOUR_NODES: usize = 40;

/// Counts `N(t_i)` on a real-time grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CountingPath {
    grid: Grid,
    counts: Vec<u64>,
}

impl CountingPath {
    pub fn new(grid: Grid, counts: Vec<u64>) -> Result<Self> {
        if counts.len() != grid.len() {
            return Err(Error::Grid(format!("{} counts on {} points", counts.len(), grid.len())));
        }
        if counts[0] != 0 || counts.windows(2).any(|w| w[1] < w[0]) {
            return Err(Error::InvalidParams("counting path must start at 0 and be non-decreasing".into()));
        }
        Ok(Self { grid, counts })
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    /// First grid time with a positive count.
    pub fn first_jump(&self) -> Option<f64> {
        self.counts.iter().position(|&c| c > 0).map(|i| self.grid.point(i))
    }
}

/// Epochs of a rate-`lambda` Poisson process on `[0, horizon]`.
pub(crate) fn poisson_epochs<R: Rng + ?Sized>(lambda: f64, horizon: f64, rng: &mut R) -> Vec<f64> {
    let mut out = Vec::new();
    let mut g = 0.0;
    loop {
        g += rng.sample::<f64, _>(Exp1) / lambda;
        if g > horizon {
            return out;
        }
        out.push(g);
    }
}

/// `N(Y(t_i))` for a rate-`lambda` Poisson process `N` sampled on
/// `[0, max Y]` independently of `y`.
pub fn simulate_mfpp<R: Rng + ?Sized>(p: &MixedParams, y: &InversePath, rng: &mut R) -> CountingPath {
    let ys = y.values();
    let epochs = poisson_epochs(p.lambda(), *ys.last().unwrap(), rng);
    let mut counts = Vec::with_capacity(ys.len());
    let mut j = 0;
    for &v in ys {
        while j < epochs.len() && epochs[j] <= v {
            j += 1;
        }
        counts.push(j as u64);
    }
    CountingPath { grid: *y.grid(), counts }
}

/// One interarrival time, `D(E / lambda)` with `E ~ Exp(1)`: the first jump
/// of `N(Y(t))` happens when `Y` crosses the first Poisson epoch.
pub fn sample_interarrival<R: Rng + ?Sized>(p: &MixedParams, rng: &mut R) -> f64 {
    let e: f64 = rng.sample(Exp1);
    mixed_increment(p, e / p.lambda(), rng)
}

/// Jump times in `[0, horizon]` from the renewal representation.
pub fn sample_arrival_times<R: Rng + ?Sized>(p: &MixedParams, horizon: f64, rng: &mut R) -> Vec<f64> {
    let mut out = Vec::new();
    let mut t = 0.0;
    loop {
        t += sample_interarrival(p, rng);
        if t > horizon {
            return out;
        }
        out.push(t);
    }
}

/// `lambda / (C1 s^alpha1 + C2 s^alpha2 + lambda)`.
pub fn interarrival_lt(p: &MixedParams, s: f64) -> Result<f64> {
    if !(s.is_finite() && s > 0.0) {
        return Err(Error::domain("interarrival_lt", format!("need s > 0, got {s}")));
    }
    Ok(p.lambda() / (p.laplace_exponent(s) + p.lambda()))
}

/// Density of the interarrival time, `lambda R(1, t)`.
pub fn interarrival_density(p: &MixedParams, t: f64, kmax: usize) -> Result<f64> {
    if !(t.is_finite() && t > 0.0) {
        return Err(Error::domain("interarrival_density", format!("need t > 0, got {t}")));
    }
    Ok(p.lambda() * resolvent(p, p.lambda(), 1.0, t, kmax)?)
}

/// `P(W <= t_i)` at each of the increasing `points`, by integrating
/// `interarrival_density` in `ln t` with Simpson's rule from `1e-8`, where the
/// small-time power law supplies the initial mass.
pub fn interarrival_cdf(p: &MixedParams, points: &[f64]) -> Result<Vec<f64>> {
    if points.windows(2).any(|w| w[1] < w[0]) || points.iter().any(|&t| !(t >= 0.0 && t.is_finite())) {
        return Err(Error::domain("interarrival_cdf", "points must be finite, non-negative and sorted"));
    }
    const T0: f64 = 1e-8;
    const PER_DECADE: f64 = 64.0;
    let (a, c) = lead(p);
    let head = p.lambda() * T0.powf(a) * recip_gamma(a + 1.0) / c;
    let top = points.last().copied().unwrap_or(T0).max(T0);
    let decades = (top / T0).log10();
    let n = ((decades * PER_DECADE).ceil() as usize).max(2);
    let n = n + n % 2;
    let du = (top / T0).ln() / n as f64;
    let node = |i: usize| T0 * (i as f64 * du).exp();
    let g: Vec<f64> = (0..=n)
        .map(|i| {
            let t = node(i);
            interarrival_density(p, t, DEFAULT_KMAX).map(|f| f * t)
        })
        .collect::<Result<_>>()?;
    // cumulative integral at the even nodes, Simpson panels
    let mut cum = vec![head; n / 2 + 1];
    for j in 1..=n / 2 {
        let i = 2 * j;
        cum[j] = cum[j - 1] + du / 3.0 * (g[i - 2] + 4.0 * g[i - 1] + g[i]);
    }
    let step = 2.0 * du;
    Ok(points
        .iter()
        .map(|&t| {
            if t <= T0 {
                return p.lambda() * t.powf(a) * recip_gamma(a + 1.0) / c;
            }
            let u = (t / T0).ln() / step;
            let j = (u.floor() as usize).min(n / 2 - 1);
            let w = u - j as f64;
            (cum[j] * (1.0 - w) + cum[j + 1] * w).min(1.0)
        })
        .collect())
}

/// `P(N(t) = 0) = C1 R(alpha1, t) + C2 R(alpha2, t)`.
pub fn state_prob_p0(p: &MixedParams, t: f64, kmax: usize) -> Result<f64> {
    check_time("state_prob_p0", t)?;
    if t == 0.0 {
        return Ok(1.0);
    }
    survival(p, p.lambda(), t, kmax)
}

/// `C1 R(alpha1) + C2 R(alpha2)` for rate `lam`.
fn survival(p: &MixedParams, lam: f64, t: f64, kmax: usize) -> Result<f64> {
    let mut v = 0.0;
    for (a, c) in p.components() {
        v += c * resolvent(p, lam, a, t, kmax)?;
    }
    Ok(v)
}

/// How `state_prob_pn` evaluates `p_n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PnMethod {
    /// Gaver-Stehfest inversion of the Laplace transform of `p_n`.
    #[default]
    Laplace,
    /// `(n+1)`-fold self-convolutions of resolvent kernels on a grid.
    Convolution,
}

/// Grid resolution used by the scalar convolution method.
const CONV_STEP: f64 = 1e-3;
const CONV_MIN_POINTS: usize = 200;
const CONV_MAX_POINTS: usize = 4000;

/// `P(N(t) = n)`.
pub fn state_prob_pn(p: &MixedParams, n: usize, t: f64, method: PnMethod) -> Result<f64> {
    check_time("state_prob_pn", t)?;
    if t == 0.0 {
        return Ok(if n == 0 { 1.0 } else { 0.0 });
    }
    match method {
        PnMethod::Laplace => pn_laplace(p, n, t),
        PnMethod::Convolution => {
            let steps = ((t / CONV_STEP).ceil() as usize).clamp(CONV_MIN_POINTS, CONV_MAX_POINTS);
            let grid = Grid::with_len(t / steps as f64, steps + 1)?;
            Ok(*pn_convolution(p, n, &grid)?.values().last().unwrap())
        }
    }
}

/// Both methods, failing with `CrossCheckFailure` when they differ by more
/// than `CROSS_CHECK_TOL`; returns the Laplace value.
pub fn state_prob_pn_checked(p: &MixedParams, n: usize, t: f64) -> Result<f64> {
    let a = state_prob_pn(p, n, t, PnMethod::Laplace)?;
    let b = state_prob_pn(p, n, t, PnMethod::Convolution)?;
    if (a - b).abs() > CROSS_CHECK_TOL {
        return Err(Error::CrossCheckFailure {
            op: "state_prob_pn",
            a,
            b,
            tol: CROSS_CHECK_TOL,
        });
    }
    Ok(a)
}

/// `p_n` at every point of `grid`.
pub fn state_prob_pn_grid(p: &MixedParams, n: usize, grid: &Grid, method: PnMethod) -> Result<GridFunction> {
    match method {
        PnMethod::Convolution => pn_convolution(p, n, grid),
        PnMethod::Laplace => GridFunction::try_from_fn(*grid, |t| {
            if t == 0.0 {
                Ok(if n == 0 { 1.0 } else { 0.0 })
            } else {
                pn_laplace(p, n, t)
            }
        }),
    }
}

/// `C1 D^alpha1 p_n + C2 D^alpha2 p_n + lambda (p_n - p_{n-1})` with Caputo
/// derivatives from the L1 scheme and `p_n` from `method`; zero up to
/// discretization error.
pub fn governing_residual(p: &MixedParams, n: usize, grid: &Grid, method: PnMethod) -> Result<GridFunction> {
    let pn = state_prob_pn_grid(p, n, grid, method)?;
    let mut res = pn.scaled(p.lambda());
    for (a, c) in p.components() {
        res = res.axpby(1.0, &caputo_l1(&pn, a)?, c)?;
    }
    if n > 0 {
        res = res.axpby(1.0, &state_prob_pn_grid(p, n - 1, grid, method)?, -p.lambda())?;
    }
    Ok(res)
}

/// Inverts `lambda^n (C1 s^(alpha1-1) + C2 s^(alpha2-1)) / (C1 s^alpha1 + C2 s^alpha2 + lambda)^(n+1)`.
fn pn_laplace(p: &MixedParams, n: usize, t: f64) -> Result<f64> {
    let lam = p.lambda();
    try_laplace_invert(
        |s| {
            let num: f64 = p.components().map(|(a, c)| c * s.powf(a - 1.0)).sum();
            let q = lam / (p.laplace_exponent(s) + lam);
            Ok(num / lam * q.powi(n as i32 + 1))
        },
        t,
        DEFAULT_ORDER,
    )
}

/// `p_n = lambda^n sum_j C_j R_j^{*(n+1)}` with kernel `R_j = R(1 + (alpha_j - 1)/(n+1), .)`:
/// each kernel's transform is the `(n+1)`-th root of the matching term of the
/// transform of `p_n`.
fn pn_convolution(p: &MixedParams, n: usize, grid: &Grid) -> Result<GridFunction> {
    let lam = p.lambda();
    let mut total = GridFunction::from_fn(*grid, |_| 0.0);
    for (a, c) in p.components() {
        let rho = 1.0 + (a - 1.0) / (n as f64 + 1.0);
        let kernel = GridFunction::try_from_fn(*grid, |t| resolvent(p, lam, rho, t, DEFAULT_KMAX))?;
        let conv = convolve_power(&kernel, n + 1)?;
        total = total.axpby(1.0, &conv, c * lam.powi(n as i32))?;
    }
    Ok(total)
}

/// Probability generating function `E z^N(t) = C1 R(alpha1) + C2 R(alpha2)`
/// with the rate replaced by `lambda (1 - z)`.
pub fn pgf(p: &MixedParams, z: f64, t: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&z) {
        return Err(Error::domain("pgf", format!("need z in [0, 1], got {z}")));
    }
    check_time("pgf", t)?;
    if t == 0.0 {
        return Ok(1.0);
    }
    survival(p, p.lambda() * (1.0 - z), t, DEFAULT_KMAX)
}

/// `E N(t) = lambda U(t)`.
pub fn mfpp_mean(p: &MixedParams, t: f64) -> Result<f64> {
    Ok(p.lambda() * mean_inverse(p, t)?)
}

/// `Var N(t) = lambda U(t) + lambda^2 Var Y(t)`, with `Var Y(t)` supplied.
pub fn mfpp_var(p: &MixedParams, t: f64, var_y: f64) -> Result<f64> {
    let l = p.lambda();
    Ok(l * mean_inverse(p, t)? + l * l * var_y)
}

/// `Cov(N(s), N(t)) = lambda U(s) + lambda^2 Cov(Y(s), Y(t))` for `s <= t`.
pub fn mfpp_cov(p: &MixedParams, s: f64, t: f64, cov_y: f64) -> Result<f64> {
    if s > t {
        return Err(Error::domain("mfpp_cov", format!("need s <= t, got s={s}, t={t}")));
    }
    let l = p.lambda();
    Ok(l * mean_inverse(p, s)? + l * l * cov_y)
}

fn check_time(op: &'static str, t: f64) -> Result<()> {
    if !(t.is_finite() && t >= 0.0) {
        return Err(Error::domain(op, format!("time must be finite and >= 0, got {t}")));
    }
    Ok(())
}

/// The component that dominates at small times.
fn lead(p: &MixedParams) -> (f64, f64) {
    if p.c1() > 0.0 {
        (p.alpha1(), p.c1())
    } else {
        (p.alpha2(), p.c2())
    }
}

/// `R(rho, t)` for rate `lam >= 0` and `0 <= rho <= 1`.
pub(crate) fn resolvent(p: &MixedParams, lam: f64, rho: f64, t: f64, kmax: usize) -> Result<f64> {
    let (a1, c1) = lead(p);
    if t == 0.0 {
        let e = a1 - rho;
        return Ok(if e < 0.0 {
            f64::INFINITY
        } else if e == 0.0 {
            1.0 / c1
        } else {
            0.0
        });
    }
    let pref = t.powf(a1 - rho) / c1;
    if p.c1() == 0.0 || p.c2() == 0.0 {
        if lam == 0.0 {
            return Ok(pref * recip_gamma(a1 - rho + 1.0));
        }
        return Ok(pref * ml2(a1, a1 - rho + 1.0, -lam * t.powf(a1) / c1)?);
    }
    let (a2, c2) = (p.alpha2(), p.c2());
    let d = a1 - a2;
    let ratio = c2 / c1;
    if lam == 0.0 {
        return Ok(pref * ml2(d, a1 - rho + 1.0, -ratio * t.powf(d))?);
    }
    if ratio.powf(1.0 / d) * t > SERIES_REACH {
        return Ok(contour(p, lam, rho, t));
    }
    let x = -ratio * t.powf(d);
    let y = -lam * t.powf(a1) / c1;
    let mut pow = 1.0f64;
    let (mut sum, mut max_term) = (0.0f64, 0.0f64);
    let mut prev = f64::INFINITY;
    let mut small = 0;
    for k in 0..kmax {
        let kf = k as f64;
        let e = ml3(&MLParams::new(a1, a1 + d * kf - rho + 1.0, kf + 1.0)?, y)?;
        let term = pow * e;
        sum += term;
        let mag = term.abs();
        max_term = max_term.max(mag);
        if mag < prev && (mag < 1e-16 * sum.abs() || mag < 1e-300) {
            small += 1;
            if small == 3 {
                if max_term > CANCELLATION_LIMIT * sum.abs() {
                    return Ok(contour(p, lam, rho, t));
                }
                return Ok(pref * sum);
            }
        } else {
            small = 0;
        }
        prev = mag;
        pow *= x;
    }
    Err(Error::NonConvergence {
        op: "mfpp k-series",
        iterations: kmax,
    })
}

/// Talbot inversion of `s^(rho-1) / (C1 s^alpha1 + C2 s^alpha2 + lam)`.
/// The denominator has no zeros off the negative real axis: both powers of
/// `s` lie in the same open half-plane.
fn contour(p: &MixedParams, lam: f64, rho: f64, t: f64) -> f64 {
    let (a1, c1, a2, c2) = (p.alpha1(), p.c1(), p.alpha2(), p.c2());
    talbot_invert(
        |s: Complex64| {
            let ln_s = s.ln();
            let den = c1 * (a1 * ln_s).exp() + c2 * (a2 * ln_s).exp() + lam;
            (rho - 1.0) * ln_s - den.ln()
        },
        t,
        CONTOUR_NODES,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ensemble::substream;
    use crate::numerics::laplace_invert;

    fn ref_params(lambda: f64) -> MixedParams {
        MixedParams::new(0.9, 0.5, 0.5, 0.5, lambda).unwrap()
    }

    #[test]
    fn counting_path_validation() {
        let g = Grid::with_len(0.5, 3).unwrap();
        assert!(CountingPath::new(g, vec![0, 2, 1]).is_err());
        assert!(CountingPath::new(g, vec![1, 2, 3]).is_err());
        assert_eq!(CountingPath::new(g, vec![0, 0, 4]).unwrap().first_jump(), Some(1.0));
    }

    #[test]
    fn zero_inverse_path_gives_zero_counts() {
        let g = Grid::with_len(0.1, 11).unwrap();
        let path = simulate_mfpp(&ref_params(5.0), &InversePath::zero(g), &mut substream(1, 0));
        assert!(path.counts().iter().all(|&c| c == 0));
    }

    #[test]
    fn interarrival_lt_values() {
        let p = ref_params(1.0);
        assert_eq!(interarrival_lt(&p, 1.0).unwrap(), 0.5);
        assert!((interarrival_lt(&p, 1e-14).unwrap() - 1.0).abs() < 1e-6);
        assert!(interarrival_lt(&p, 2.0).unwrap() < interarrival_lt(&p, 1.5).unwrap());
        assert!(interarrival_lt(&p, 0.0).is_err());
    }

    #[test]
    fn series_and_contour_agree() {
        let p = ref_params(1.0);
        for &rho in &[0.0, 0.5, 0.9, 1.0] {
            for &t in &[0.3, 1.0, 3.0, 8.0] {
                let s = resolvent(&p, 1.0, rho, t, DEFAULT_KMAX).unwrap();
                let c = contour(&p, 1.0, rho, t);
                assert!((s - c).abs() < 1e-10 * s.abs().max(1.0), "rho={rho} t={t}: {s} vs {c}");
            }
        }
    }

    #[test]
    fn density_matches_stehfest_inversion() {
        let p = ref_params(1.0);
        for i in 0..=49 {
            let t = 0.1 + 0.1 * i as f64;
            let f = interarrival_density(&p, t, DEFAULT_KMAX).unwrap();
            let g = laplace_invert(|s| interarrival_lt(&p, s).unwrap(), t, DEFAULT_ORDER).unwrap();
            assert!((f - g).abs() < 1e-3, "t={t}: {f} vs {g}");
        }
    }

    #[test]
    fn density_reduces_to_ml_density() {
        let p = MixedParams::new(0.7, 0.4, 1.0, 0.0, 1.5).unwrap();
        for t in [0.2f64, 1.0, 4.0] {
            let want = 1.5 * t.powf(-0.3) * ml2(0.7, 0.7, -1.5 * t.powf(0.7)).unwrap();
            let got = interarrival_density(&p, t, DEFAULT_KMAX).unwrap();
            assert!((got - want).abs() < 1e-13 * want);
        }
    }

    #[test]
    fn tiny_kmax_reports_nonconvergence() {
        let p = ref_params(1.0);
        assert!(matches!(
            interarrival_density(&p, 2.0, 3),
            Err(Error::NonConvergence { .. })
        ));
    }

    #[test]
    fn p0_basics() {
        let p = ref_params(1.0);
        assert_eq!(state_prob_p0(&p, 0.0, DEFAULT_KMAX).unwrap(), 1.0);
        let single = MixedParams::new(0.8, 0.3, 1.0, 0.0, 2.0).unwrap();
        let want = ml2(0.8, 1.0, -2.0 * 1.3f64.powf(0.8)).unwrap();
        assert!((state_prob_p0(&single, 1.3, DEFAULT_KMAX).unwrap() - want).abs() < 1e-14);
        // p0 = 1 - cdf of the first jump
        let t = 1.7;
        let cdf = interarrival_cdf(&p, &[t]).unwrap()[0];
        assert!((state_prob_p0(&p, t, DEFAULT_KMAX).unwrap() + cdf - 1.0).abs() < 1e-6);
    }

    #[test]
    fn pgf_endpoints_and_slope() {
        let p = ref_params(1.0);
        let t = 1.0;
        assert!((pgf(&p, 1.0, t).unwrap() - 1.0).abs() < 1e-12);
        assert!((pgf(&p, 0.0, t).unwrap() - state_prob_p0(&p, t, DEFAULT_KMAX).unwrap()).abs() < 1e-15);
        let h = 1e-5;
        let slope = (pgf(&p, 1.0, t).unwrap() - pgf(&p, 1.0 - h, t).unwrap()) / h;
        let mean = mfpp_mean(&p, t).unwrap();
        assert!((slope - mean).abs() < 1e-3 * mean, "{slope} {mean}");
        assert!(pgf(&p, 1.2, t).is_err());
    }

    #[test]
    fn pn_methods_agree() {
        let p = ref_params(1.0);
        let t = 1.0;
        let p0 = state_prob_p0(&p, t, DEFAULT_KMAX).unwrap();
        for m in [PnMethod::Laplace, PnMethod::Convolution] {
            assert!((state_prob_pn(&p, 0, t, m).unwrap() - p0).abs() < 1e-3, "{m:?}");
        }
        for n in 1..4 {
            state_prob_pn_checked(&p, n, t).unwrap();
        }
    }

    #[test]
    fn pn_sums_to_one() {
        let p = ref_params(1.0);
        let t = 1.0;
        let total: f64 = (0..40).map(|n| state_prob_pn(&p, n, t, PnMethod::Laplace).unwrap()).sum();
        assert!((total - 1.0).abs() < 1e-4, "{total}");
    }

    #[test]
    fn moments() {
        let p = ref_params(2.0);
        let u = mean_inverse(&p, 1.0).unwrap();
        assert!((mfpp_mean(&p, 1.0).unwrap() - 2.0 * u).abs() < 1e-15);
        assert!(mfpp_var(&p, 1.0, 0.3).unwrap() - mfpp_mean(&p, 1.0).unwrap() > 0.0);
        assert_eq!(mfpp_cov(&p, 1.0, 1.0, 0.3).unwrap(), mfpp_var(&p, 1.0, 0.3).unwrap());
        assert!(mfpp_cov(&p, 2.0, 1.0, 0.3).is_err());
    }

    #[test]
    fn governing_equation_residual() {
        let p = ref_params(1.0);
        let grid = Grid::with_len(1e-3, 2001).unwrap();
        for n in 0..3 {
            let r = governing_residual(&p, n, &grid, PnMethod::Convolution).unwrap();
            let sup = r.values()[100..].iter().fold(0.0f64, |m, v| m.max(v.abs()));
            assert!(sup <= 5e-3, "n={n}: {sup}");
        }
    }
}
