//! Quadrature rules used across the crate.

use crate::error::{Error, Result};

/// Default absolute and relative tolerance of [`adaptive_simpson`].
pub const DEFAULT_TOL: f64 = 1e-12;

const MAX_DEPTH: u32 = 48;

/// Nodes of the 2-point Gauss-Legendre rule on `[0, 1]`.
pub const GAUSS2_NODES: [f64; 2] = [0.211_324_865_405_187_1, 0.788_675_134_594_812_9];

/// Adaptive Simpson quadrature of `f` over `[a, b]`.
///
/// Accepts once the Richardson error estimate on every panel is below its
/// share of `max(abs_tol, rel_tol * |I|)`, where `|I|` is a coarse estimate
/// of the integral magnitude.
pub fn adaptive_simpson<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, abs_tol: f64, rel_tol: f64) -> Result<f64> {
    if a == b {
        return Ok(0.0);
    }
    // Coarse 8-panel composite rule sets the scale for the relative tolerance.
    let n = 8;
    let h = (b - a) / n as f64;
    let mut scale = 0.0;
    let mut fx = [0.0; 9];
    for (i, v) in fx.iter_mut().enumerate() {
        *v = f(a + h * i as f64);
    }
    for i in 0..n / 2 {
        scale += h / 3.0 * (fx[2 * i] + 4.0 * fx[2 * i + 1] + fx[2 * i + 2]);
    }
    let tol = abs_tol.max(rel_tol * scale.abs());

    let mut total = 0.0;
    let mut worst: f64 = 0.0;
    // Each of the four coarse panel pairs is refined independently.
    for i in 0..n / 2 {
        let lo = a + h * (2 * i) as f64;
        let hi = a + h * (2 * i + 2) as f64;
        let (fa, fm, fb) = (fx[2 * i], fx[2 * i + 1], fx[2 * i + 2]);
        let whole = (hi - lo) / 6.0 * (fa + 4.0 * fm + fb);
        let mut err = 0.0;
        total += simpson_rec(&f, lo, hi, fa, fm, fb, whole, tol / 4.0, MAX_DEPTH, &mut err);
        worst = worst.max(err);
    }
    if worst > 0.0 {
        return Err(Error::Numerical { what: "adaptive Simpson quadrature", achieved: worst });
    }
    Ok(total)
}

#[allow(clippy::too_many_arguments)]
fn simpson_rec<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
    unresolved: &mut f64,
) -> f64 {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    if delta.abs() <= 15.0 * tol || !delta.is_finite() {
        return left + right + delta / 15.0;
    }
    if depth == 0 {
        *unresolved = unresolved.max(delta.abs() / 15.0);
        return left + right + delta / 15.0;
    }
    simpson_rec(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1, unresolved)
        + simpson_rec(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1, unresolved)
}

/// Composite Simpson rule for samples `y` on a uniform grid of spacing `h`.
///
/// An odd number of intervals is closed with Simpson's 3/8 rule on the last
/// three intervals. Fewer than three samples fall back to the trapezoid rule.
pub fn composite_simpson(y: &[f64], h: f64) -> f64 {
    let m = y.len();
    match m {
        0 | 1 => 0.0,
        2 => 0.5 * h * (y[0] + y[1]),
        3 => h / 3.0 * (y[0] + 4.0 * y[1] + y[2]),
        _ => {
            let intervals = m - 1;
            let even_end = if intervals % 2 == 0 { intervals } else { intervals - 3 };
            let mut s = 0.0;
            let mut i = 0;
            while i < even_end {
                s += h / 3.0 * (y[i] + 4.0 * y[i + 1] + y[i + 2]);
                i += 2;
            }
            if intervals % 2 == 1 {
                let k = even_end;
                s += 3.0 * h / 8.0 * (y[k] + 3.0 * y[k + 1] + 3.0 * y[k + 2] + y[k + 3]);
            }
            s
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn simpson_integrates_cubic_exactly() {
        let v = adaptive_simpson(|x| x * x * x - 2.0 * x, 0.0, 2.0, 1e-14, 1e-14).unwrap();
        assert!((v - 0.0).abs() < 1e-13);
    }

    #[test]
    fn simpson_exp() {
        let v = adaptive_simpson(libm::exp, 0.0, 3.0, 1e-13, 1e-13).unwrap();
        assert!((v - (libm::exp(3.0) - 1.0)).abs() < 1e-10);
    }

    #[test]
    fn composite_rules_exact_for_cubics() {
        for m in 2..12usize {
            let h = 1.0 / (m - 1) as f64;
            let y: Vec<f64> = (0..m).map(|i| (i as f64 * h).powi(3)).collect();
            let tol = if m == 2 { 0.3 } else { 1e-14 };
            assert!((composite_simpson(&y, h) - 0.25).abs() < tol, "m = {m}");
        }
    }

    #[test]
    fn gauss2_exact_for_cubics() {
        let v: f64 = GAUSS2_NODES.iter().map(|t| 0.5 * t * t * t).sum();
        assert!((v - 0.25).abs() < 1e-15);
    }
}
