//! Two- and three-parameter Mittag-Leffler functions on the real line.
//!
//! `ml3` sums the power series in log space. When the series suffers from
//! catastrophic cancellation (large negative arguments) the value is instead
//! obtained by inverting its Laplace transform
//! `s^(a*g - b) / (s^a - z)^g` along a Talbot contour.

use statrs::function::gamma::ln_gamma;

use crate::error::{Error, Result};
use crate::numerics::talbot_invert;

const TERM_CAP: usize = 10_000;
const TERM_TOL: f64 = 1e-16;
/// Largest tolerated ratio between the biggest series term and the sum.
const CANCELLATION_LIMIT: f64 = 1e3;
/// ln(f64::MAX) is about 709.8.
const LN_OVERFLOW: f64 = 700.0;

/// Parameters `(alpha, beta, gamma)` of `E^gamma_{alpha,beta}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MLParams {
    alpha: f64,
    beta: f64,
    gamma: f64,
}

impl MLParams {
    pub fn new(alpha: f64, beta: f64, gamma: f64) -> Result<Self> {
        for (name, v) in [("alpha", alpha), ("beta", beta), ("gamma", gamma)] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::InvalidParams(format!(
                    "Mittag-Leffler {name} must be finite and positive, got {v}"
                )));
            }
        }
        Ok(Self { alpha, beta, gamma })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }
}

/// `1 / Gamma(x)`, zero at the poles.
pub(crate) fn recip_gamma(x: f64) -> f64 {
    if x > 170.0 {
        (-ln_gamma(x)).exp()
    } else if x > 0.0 && x == x.floor() {
        1.0 / (2..x as u32).map(f64::from).product::<f64>()
    } else if x > 0.0 {
        1.0 / statrs::function::gamma::gamma(x)
    } else if x == x.floor() {
        0.0
    } else {
        1.0 / statrs::function::gamma::gamma(x)
    }
}

/// Three-parameter Mittag-Leffler function
/// `sum_k (gamma)_k z^k / (k! Gamma(k alpha + beta))`.
pub fn ml3(p: &MLParams, z: f64) -> Result<f64> {
    if !z.is_finite() {
        return Err(Error::domain("ml3", format!("argument must be finite, got {z}")));
    }
    if z == 0.0 {
        return Ok(recip_gamma(p.beta));
    }
    let outcome = series(p, z);
    if let Series::Converged { sum, max_term } = outcome {
        if z > 0.0 || max_term <= CANCELLATION_LIMIT * sum.abs() {
            return Ok(sum);
        }
    }
    if z < 0.0 && p.alpha <= 1.0 {
        return Ok(talbot(p, z));
    }
    match outcome {
        // alpha > 1: no contour route; accept the series if the rounding
        // error carried by the largest term is still small
        Series::Converged { sum, max_term } if max_term * 1e-16 <= 1e-12 => Ok(sum),
        _ => Err(Error::NonConvergence {
            op: "ml3",
            iterations: TERM_CAP,
        }),
    }
}

/// Two-parameter Mittag-Leffler function, `ml3` with `gamma = 1`.
pub fn ml2(alpha: f64, beta: f64, z: f64) -> Result<f64> {
    ml3(&MLParams::new(alpha, beta, 1.0)?, z)
}

/// Large-`t` asymptote of `E^gamma_{alpha,beta}(-lambda t^alpha)`:
/// `lambda^-gamma t^(-alpha gamma) / Gamma(beta - alpha gamma)`.
pub fn ml3_asymptotic(p: &MLParams, lambda: f64, t: f64) -> Result<f64> {
    if !(lambda > 0.0 && t > 0.0) {
        return Err(Error::domain(
            "ml3_asymptotic",
            format!("need lambda > 0 and t > 0, got lambda={lambda}, t={t}"),
        ));
    }
    let ag = p.alpha * p.gamma;
    if (p.beta - ag).abs() <= 1e-12 * p.beta.max(ag) {
        return Err(Error::domain(
            "ml3_asymptotic",
            "beta = alpha*gamma puts the leading coefficient at a pole of Gamma",
        ));
    }
    Ok(lambda.powf(-p.gamma) * t.powf(-ag) * recip_gamma(p.beta - ag))
}

#[derive(Debug, Clone, Copy)]
enum Series {
    Converged { sum: f64, max_term: f64 },
    Overflow,
    Capped,
}

fn series(p: &MLParams, z: f64) -> Series {
    let x = z.abs();
    let ln_x = x.ln();
    let alternating = z < 0.0;
    // coefficient (gamma)_k x^k / k!, kept linear while it is moderate
    let mut c = 1.0f64;
    let mut ln_c = 0.0f64;
    let mut prev_mag = f64::INFINITY;
    let (mut sum, mut comp) = (0.0f64, 0.0f64);
    let mut max_term = 0.0f64;
    let mut small = 0;
    for k in 0..TERM_CAP {
        let arg = k as f64 * p.alpha + p.beta;
        let ln_mag = ln_c - ln_gamma(arg);
        if ln_mag > LN_OVERFLOW {
            return Series::Overflow;
        }
        let mag = if c < 1e290 && arg <= 170.0 {
            c * recip_gamma(arg)
        } else {
            ln_mag.exp()
        };
        let term = if alternating && k % 2 == 1 { -mag } else { mag };
        // Neumaier summation
        let t = sum + term;
        if sum.abs() >= term.abs() {
            comp += (sum - t) + term;
        } else {
            comp += (term - t) + sum;
        }
        sum = t;
        max_term = max_term.max(mag);

        // only test once the terms are past their peak
        if mag < prev_mag && (mag < TERM_TOL * (sum + comp).abs() || mag < 1e-300) {
            small += 1;
            if small == 3 {
                return Series::Converged {
                    sum: sum + comp,
                    max_term,
                };
            }
        } else {
            small = 0;
        }
        prev_mag = mag;

        let kf = k as f64;
        let ratio = (p.gamma + kf) / (kf + 1.0);
        c *= ratio * x;
        ln_c += ratio.ln() + ln_x;
    }
    Series::Capped
}

/// `E^g_{a,b}(z)` as the inverse Laplace transform of
/// `s^(a g - b) / (s^a - z)^g` at time 1, for z < 0 and 0 < a <= 1 (the
/// branch cut of `(s^a - z)^g` then stays on the negative real axis).
fn talbot(p: &MLParams, z: f64) -> f64 {
    let expo = p.alpha * p.gamma - p.beta;
    talbot_invert(
        |s| {
            let ln_s = s.ln();
            expo * ln_s - p.gamma * ((p.alpha * ln_s).exp() - z).ln()
        },
        1.0,
        talbot_nodes(p.gamma),
    )
}

fn talbot_nodes(gamma: f64) -> usize {
    let n = (1.1 * gamma + 16.0).ceil().clamp(28.0, 256.0) as usize;
    n + n % 2
}
