use std::f64::consts::{LN_2, PI};

use num_complex::Complex64;

use crate::error::{Error, Result};

pub const DEFAULT_ORDER: usize = 14;

/// Gaver-Stehfest weights `V_k`, `k = 1..=order`.
pub fn stehfest_weights(order: usize) -> Vec<f64> {
    let m = order / 2;
    let fact = |k: usize| (1..=k).map(|i| i as f64).product::<f64>();
    (1..=order)
        .map(|k| {
            let mut v = 0.0;
            for j in k.div_ceil(2)..=k.min(m) {
                v += (j as f64).powi(m as i32) * fact(2 * j)
                    / (fact(m - j) * fact(j) * fact(j - 1) * fact(k - j) * fact(2 * j - k));
            }
            if (k + m) % 2 == 1 {
                -v
            } else {
                v
            }
        })
        .collect()
}

fn check_args(t: f64, order: usize) -> Result<()> {
    if !(t.is_finite() && t > 0.0) {
        return Err(Error::domain("laplace_invert", format!("t must be positive, got {t}")));
    }
    if !(8..=20).contains(&order) || !order.is_multiple_of(2) {
        return Err(Error::domain(
            "laplace_invert",
            format!("order must be even and in 8..=20, got {order}"),
        ));
    }
    Ok(())
}

/// Gaver-Stehfest inverse of a transform that may fail.
pub fn try_laplace_invert(f: impl Fn(f64) -> Result<f64>, t: f64, order: usize) -> Result<f64> {
    check_args(t, order)?;
    let a = LN_2 / t;
    let mut acc = 0.0;
    for (k, w) in stehfest_weights(order).iter().enumerate() {
        acc += w * f((k + 1) as f64 * a)?;
    }
    Ok(a * acc)
}

/// Gaver-Stehfest inverse `(ln2/t) sum_k V_k F(k ln2 / t)`.
///
/// In double precision the achievable accuracy is about 1e-6 relative at the
/// default order 14, and does not improve much at higher orders because the
/// weights grow like 10^(order/2).
pub fn laplace_invert(f: impl Fn(f64) -> f64, t: f64, order: usize) -> Result<f64> {
    try_laplace_invert(|s| Ok(f(s)), t, order)
}

/// As [`try_laplace_invert`], failing with `NumericalInstability` when the
/// results at `order` and `order - 2` differ by more than `tol`.
pub fn laplace_invert_checked(
    f: impl Fn(f64) -> Result<f64>,
    t: f64,
    order: usize,
    tol: f64,
) -> Result<f64> {
    let hi = try_laplace_invert(&f, t, order)?;
    let lo = try_laplace_invert(&f, t, order - 2)?;
    if (hi - lo).abs() > tol {
        return Err(Error::NumericalInstability {
            op: "laplace_invert",
            msg: format!("orders {order} and {} give {hi} and {lo} at t={t}", order - 2),
        });
    }
    Ok(hi)
}

/// Node `k` of `n` on the cotangent Talbot contour, scaled for `t = 1`:
/// returns `(s, ds/dtheta)`. Only the lower half (`k < n/2`) is needed for
/// real-valued inverses.
pub(crate) fn talbot_node(k: usize, n: usize) -> (Complex64, Complex64) {
    let nf = n as f64;
    let theta = -PI + (k as f64 + 0.5) * 2.0 * PI / nf;
    let c = 0.6407 * theta;
    let (sin_c, cos_c) = c.sin_cos();
    let cot = cos_c / sin_c;
    let s = nf * Complex64::new(0.5017 * theta * cot - 0.6122, 0.2645 * theta);
    let ds = nf * Complex64::new(0.5017 * cot - 0.5017 * 0.6407 * theta / (sin_c * sin_c), 0.2645);
    (s, ds)
}

/// Inverse Laplace transform at `t` by the trapezoid rule on the Talbot
/// contour with `n` nodes. `ln_f` is the logarithm of the transform, analytic
/// off the negative real axis, with conjugate symmetry.
pub(crate) fn talbot_invert(ln_f: impl Fn(Complex64) -> Complex64, t: f64, n: usize) -> f64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for k in 0..n / 2 {
        let (z, dz) = talbot_node(k, n);
        let s = z / t;
        acc += (z + ln_f(s)).exp() * dz;
    }
    2.0 * acc.im / (n as f64 * t)
}
