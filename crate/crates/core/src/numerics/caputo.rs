use statrs::function::gamma::gamma;

use super::GridFunction;
use crate::error::{Error, Result};

/// Caputo derivative of order `alpha` by the L1 scheme:
/// `h^-alpha / Gamma(2 - alpha) * sum_j b_j (f_{n-j} - f_{n-j-1})` with
/// `b_j = (j+1)^(1-alpha) - j^(1-alpha)`.
///
/// For `alpha = 1` this returns the ordinary derivative by central
/// differences (one-sided at the ends). The value at `t = 0` is 0 for
/// `alpha < 1`.
pub fn caputo_l1(f: &GridFunction, alpha: f64) -> Result<GridFunction> {
    if !(alpha > 0.0 && alpha <= 1.0) {
        return Err(Error::domain("caputo_l1", format!("alpha must lie in (0, 1], got {alpha}")));
    }
    let grid = *f.grid();
    let v = f.values();
    let n = v.len();
    let h = grid.step();
    if n < 2 {
        return GridFunction::new(grid, vec![0.0; n]);
    }
    if alpha == 1.0 {
        let mut out = vec![0.0; n];
        out[0] = (v[1] - v[0]) / h;
        out[n - 1] = (v[n - 1] - v[n - 2]) / h;
        for i in 1..n - 1 {
            out[i] = (v[i + 1] - v[i - 1]) / (2.0 * h);
        }
        return GridFunction::new(grid, out);
    }

    let e = 1.0 - alpha;
    let b: Vec<f64> = (0..n).map(|j| ((j + 1) as f64).powf(e) - (j as f64).powf(e)).collect();
    let diffs: Vec<f64> = v.windows(2).map(|w| w[1] - w[0]).collect();
    let scale = h.powf(-alpha) / gamma(2.0 - alpha);
    let mut out = vec![0.0; n];
    for (i, slot) in out.iter_mut().enumerate().skip(1) {
        // diffs[i-1-j] = f_{i-j} - f_{i-j-1}
        let acc: f64 = b[..i].iter().zip(diffs[..i].iter().rev()).map(|(bj, d)| bj * d).sum();
        *slot = scale * acc;
    }
    GridFunction::new(grid, out)
}
