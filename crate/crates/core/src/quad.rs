//! Adaptive quadrature on finite and semi-infinite intervals.

/// Adaptive Simpson rule on `[a, b]` with Richardson correction.
///
/// `rel_tol` is relative to the magnitude of the running estimate; an
/// absolute floor of `rel_tol * 1e-300` keeps zero integrands from looping.
pub fn adaptive_simpson<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, rel_tol: f64) -> f64 {
    if a == b {
        return 0.0;
    }
    let fa = f(a);
    let fb = f(b);
    let m = 0.5 * (a + b);
    let fm = f(m);
    let whole = simpson(a, b, fa, fm, fb);
    // a coarse pass over 16 panels sets the absolute scale
    let mut scale = 0.0;
    let n = 16;
    for i in 0..n {
        let x0 = a + (b - a) * i as f64 / n as f64;
        let x1 = a + (b - a) * (i + 1) as f64 / n as f64;
        let xm = 0.5 * (x0 + x1);
        scale += simpson(x0, x1, f(x0), f(xm), f(x1)).abs();
    }
    let tol = (rel_tol * scale.max(whole.abs())).max(1e-300);
    recurse(f, a, b, fa, fm, fb, whole, tol, 50)
}

fn simpson(a: f64, b: f64, fa: f64, fm: f64, fb: f64) -> f64 {
    (b - a) / 6.0 * (fa + 4.0 * fm + fb)
}

#[allow(clippy::too_many_arguments)]
fn recurse<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> f64 {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    let left = simpson(a, m, fa, flm, fm);
    let right = simpson(m, b, fm, frm, fb);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= 15.0 * tol {
        return left + right + delta / 15.0;
    }
    recurse(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)
        + recurse(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)
}

/// Integral of a non-negative, eventually decaying `f` over `[a, inf)`.
///
/// Panels double in width; integration stops once the integrand at a panel
/// end falls below `1e-16` of the largest value seen and the panel
/// contribution is negligible. Returns `None` if no cut-off is found before
/// `t = 1e12`.
pub fn tail_integral<F: Fn(f64) -> f64>(f: &F, a: f64, rel_tol: f64) -> Option<f64> {
    let mut lo = a;
    let mut width = 1.0_f64.max(a.abs() * 0.1);
    let mut total = 0.0;
    let mut peak = f(a).abs();
    while lo < 1e12 {
        let hi = lo + width;
        let piece = adaptive_simpson(f, lo, hi, rel_tol);
        total += piece;
        let end = f(hi).abs();
        // interior peaks matter as well as endpoint values
        peak = peak.max(end).max(piece.abs() / width);
        if end <= 1e-16 * peak && piece.abs() <= rel_tol * total.abs().max(1e-300) {
            return Some(total);
        }
        lo = hi;
        width *= 2.0;
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_exact() {
        let v = adaptive_simpson(&|x: f64| x * x * x - 2.0 * x, 0.0, 2.0, 1e-12);
        assert!((v - 0.0).abs() < 1e-12);
        let v = adaptive_simpson(&|x: f64| x * x, 0.0, 3.0, 1e-12);
        assert!((v - 9.0).abs() < 1e-12);
    }

    #[test]
    fn exponential_tail() {
        let v = tail_integral(&|x: f64| (-x).exp(), 0.0, 1e-10).unwrap();
        assert!((v - 1.0).abs() < 1e-9);
        let v = tail_integral(&|x: f64| (-(x * x)).exp(), 1.0, 1e-10).unwrap();
        let exact = 0.5 * std::f64::consts::PI.sqrt() * 0.157_299_207_050_285_13;
        assert!((v - exact).abs() < 1e-10 * exact);
    }

    #[test]
    fn divergent_tail_reports_none() {
        assert!(tail_integral(&|x: f64| 1.0 / (1.0 + x), 0.0, 1e-8).is_none());
    }
}
