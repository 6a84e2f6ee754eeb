use crate::error::{Error, Result};

pub const DEFAULT_DAMPING: f64 = 0.5;
const MAX_ITER: usize = 100_000;
const UPPER: f64 = 1.0 + 1e-9;

/// Damped iteration `y <- (1-d) y + d map(y)` until `|y - map(y)| <= tol`.
///
/// Iterates must stay in `[0, 1 + 1e-9]`; the roots solved for here are
/// probabilities.
pub fn fixed_point(map: impl Fn(f64) -> f64, init: f64, tol: f64, damping: f64) -> Result<f64> {
    if !(damping > 0.0 && damping <= 1.0) {
        return Err(Error::domain("fixed_point", format!("damping must lie in (0, 1], got {damping}")));
    }
    if !(tol > 0.0) {
        return Err(Error::domain("fixed_point", format!("tolerance must be positive, got {tol}")));
    }
    let mut y = init;
    for _ in 0..MAX_ITER {
        if !(0.0..=UPPER).contains(&y) {
            return Err(Error::Range { value: y, range: "[0, 1+1e-9]" });
        }
        let m = map(y);
        if !m.is_finite() {
            return Err(Error::NumericalInstability {
                op: "fixed_point",
                msg: format!("map({y}) = {m}"),
            });
        }
        if (y - m).abs() <= tol {
            return Ok(y);
        }
        y = (1.0 - damping) * y + damping * m;
    }
    Err(Error::NonConvergence { op: "fixed_point", iterations: MAX_ITER })
}

/// Sub-intervals of `[lo, hi]` (split into `n` pieces) on which
/// `y - map(y)` changes sign.
pub fn bracket_roots(map: impl Fn(f64) -> f64, lo: f64, hi: f64, n: usize) -> Vec<(f64, f64)> {
    let g = |y: f64| y - map(y);
    let n = n.max(1);
    let mut out = Vec::new();
    let mut a = lo;
    let mut ga = g(a);
    for i in 1..=n {
        let b = lo + (hi - lo) * i as f64 / n as f64;
        let gb = g(b);
        if ga == 0.0 || ga * gb < 0.0 {
            out.push((a, b));
        }
        a = b;
        ga = gb;
    }
    out
}
