use statrs::function::beta::beta;

use super::GridFunction;
use crate::error::{Error, Result};

/// Local model `a * s^p` of a function near `s = 0`, fitted from the samples
/// at `h` and `2h`. Used when the value at 0 is infinite, or when it is 0
/// and the function grows like a power.
#[derive(Debug, Clone, Copy)]
struct PowerLaw {
    a: f64,
    p: f64,
}

fn endpoint_model(op: &'static str, v: &[f64], h: f64) -> Result<Option<PowerLaw>> {
    let singular = !v[0].is_finite();
    let vanishing = v.len() >= 3 && v[0] == 0.0 && v[1] != 0.0 && v[1] * v[2] > 0.0;
    if !(singular || vanishing) {
        return Ok(None);
    }
    if v.len() < 3 || !(v[1] * v[2] > 0.0) || !v[1].is_finite() || !v[2].is_finite() {
        return Err(Error::domain(op, "cannot fit the behaviour at t = 0 from the first samples"));
    }
    let p = (v[2] / v[1]).ln() / std::f64::consts::LN_2;
    if p <= -1.0 {
        return Err(Error::domain(op, format!("endpoint exponent {p} is not integrable")));
    }
    Ok(Some(PowerLaw { a: v[1] / h.powf(p), p }))
}

/// Riemann zeta for real `s < 1` by Borwein's alternating-series algorithm
/// (`zeta = eta / (1 - 2^(1-s))`), accurate to ~1e-16 for `s` in (-1, 1).
fn zeta(s: f64) -> f64 {
    const N: usize = 30;
    let mut d = [0.0f64; N + 1];
    let mut term = 1.0 / N as f64; // i = 0 term of the inner sum, times 1/n
    let mut acc = 0.0;
    for (i, slot) in d.iter_mut().enumerate() {
        if i > 0 {
            let i = i as f64;
            let n = N as f64;
            term *= (n + i - 1.0) * (n - i + 1.0) * 4.0 / ((2.0 * i - 1.0) * 2.0 * i);
        }
        acc += term;
        *slot = N as f64 * acc;
    }
    let mut eta = 0.0;
    for k in 0..N {
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        eta += sign * (d[k] - d[N]) / ((k + 1) as f64).powf(s);
    }
    eta /= -d[N];
    eta / (1.0 - 2.0f64.powf(1.0 - s))
}

/// Leading error coefficient of the trapezoid rule with an exact first
/// panel, applied to `s^p` (generalised Euler-Maclaurin expansion).
fn endpoint_error_coeff(p: f64) -> f64 {
    if p >= 1.0 {
        return 0.0;
    }
    zeta(-p) - 0.5 + 1.0 / (p + 1.0)
}

/// `int_0^h a s^p (y0 + (y1 - y0) s/h) ds`.
fn power_panel(m: PowerLaw, h: f64, y0: f64, y1: f64) -> f64 {
    let hp = h.powf(m.p + 1.0);
    m.a * (y0 * hp / (m.p + 1.0) + (y1 - y0) * hp / (m.p + 2.0))
}

/// Trapezoid approximation of `(f*g)(t_i) = int_0^{t_i} f(s) g(t_i - s) ds`
/// on the common grid. A power-law panel replaces the trapezoid next to an
/// endpoint where `f` or `g` is singular (or vanishes like a power).
pub fn convolve(f: &GridFunction, g: &GridFunction) -> Result<GridFunction> {
    f.same_grid(g)?;
    let h = f.grid().step();
    let (fv, gv) = (f.values(), g.values());
    let n = fv.len();
    let mut out = vec![0.0; n];
    if n < 2 {
        return GridFunction::new(*f.grid(), out);
    }
    let fm = endpoint_model("convolve", fv, h)?;
    let gm = endpoint_model("convolve", gv, h)?;
    for i in 1..n {
        let panel = |j: usize| 0.5 * h * (fv[j] * gv[i - j] + fv[j + 1] * gv[i - j - 1]);
        let mut acc = 0.0;
        for j in 1..i.saturating_sub(1) {
            acc += panel(j);
        }
        if i == 1 {
            acc += match (fm, gm) {
                (Some(a), Some(b)) => {
                    a.a * b.a * h.powf(a.p + b.p + 1.0) * beta(a.p + 1.0, b.p + 1.0)
                }
                (Some(a), None) => power_panel(a, h, gv[1], gv[0]),
                (None, Some(b)) => power_panel(b, h, fv[1], fv[0]),
                (None, None) => panel(0),
            };
        } else {
            acc += match fm {
                Some(a) => power_panel(a, h, gv[i], gv[i - 1]),
                None => panel(0),
            };
            acc += match gm {
                Some(b) => power_panel(b, h, fv[i], fv[i - 1]),
                None => panel(i - 1),
            };
            if let Some(a) = fm {
                acc -= a.a * endpoint_error_coeff(a.p) * h.powf(a.p + 1.0) * gv[i];
            }
            if let Some(b) = gm {
                acc -= b.a * endpoint_error_coeff(b.p) * h.powf(b.p + 1.0) * fv[i];
            }
        }
        out[i] = acc;
    }
    GridFunction::new(*f.grid(), out)
}

/// `k`-fold self-convolution `f^{*k}`, `k >= 1`.
pub fn convolve_power(f: &GridFunction, k: usize) -> Result<GridFunction> {
    if k == 0 {
        return Err(Error::domain("convolve", "convolution power must be at least 1"));
    }
    let mut acc = f.clone();
    for _ in 1..k {
        acc = convolve(&acc, f)?;
    }
    Ok(acc)
}

/// Running integral `int_0^{t_i} f`, trapezoid with a power-law first panel
/// when `f` is singular at 0.
pub fn cumulative_integral(f: &GridFunction) -> Result<GridFunction> {
    let h = f.grid().step();
    let v = f.values();
    let mut out = vec![0.0; v.len()];
    if v.len() < 2 {
        return GridFunction::new(*f.grid(), out);
    }
    let m = endpoint_model("integrate", v, h)?;
    out[1] = match m {
        Some(m) => m.a * h.powf(m.p + 1.0) / (m.p + 1.0),
        None => 0.5 * h * (v[0] + v[1]),
    };
    for i in 2..v.len() {
        out[i] = out[i - 1] + 0.5 * h * (v[i - 1] + v[i]);
    }
    if let Some(m) = m {
        let corr = m.a * endpoint_error_coeff(m.p) * h.powf(m.p + 1.0);
        for x in out.iter_mut().skip(2) {
            *x -= corr;
        }
    }
    GridFunction::new(*f.grid(), out)
}

/// `int_0^T f` over the whole grid.
pub fn integrate(f: &GridFunction) -> Result<f64> {
    Ok(*cumulative_integral(f)?.values().last().unwrap())
}
