//! One-dimensional maximisation: a coarse grid to locate the best region,
//! then golden-section refinement inside the neighbouring grid cells.

const INV_PHI: f64 = 0.618_033_988_749_894_9;

/// Golden-section search for a maximum of `f` on `[a, b]`, stopping once the
/// bracket is narrower than `xtol`. Only interior points are evaluated.
///
/// Returns `(x_max, f_max)`.
pub fn golden_section_max(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64, xtol: f64) -> (f64, f64) {
    let mut x1 = b - INV_PHI * (b - a);
    let mut x2 = a + INV_PHI * (b - a);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    let mut iter = 0;
    while (b - a) > xtol && iter < 500 {
        if f1 >= f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - INV_PHI * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + INV_PHI * (b - a);
            f2 = f(x2);
        }
        iter += 1;
    }
    if f1 >= f2 {
        (x1, f1)
    } else {
        (x2, f2)
    }
}

/// Maximise `f` over the half-open range `(a, b]`: evaluate `n` equally
/// spaced points `a + (b - a) k / n`, `k = 1..=n`, then refine around the
/// best one with golden-section search. `f` is never evaluated at `a`.
///
/// The grid guards against plateaus and multiple local maxima, which
/// golden-section search alone would not.
pub fn grid_then_golden(f: impl Fn(f64) -> f64, a: f64, b: f64, n: usize, xtol: f64) -> (f64, f64) {
    assert!(n >= 2 && b > a, "grid_then_golden needs n >= 2 and a < b");
    let step = (b - a) / n as f64;
    let (best_k, best_f) =
        (1..=n)
            .map(|k| (k, f(a + step * k as f64)))
            .fold(
                (0, f64::NEG_INFINITY),
                |acc, (k, v)| if v > acc.1 { (k, v) } else { acc },
            );
    let lo = a + step * (best_k - 1) as f64;
    let hi = (a + step * (best_k + 1) as f64).min(b);
    let (x, fx) = golden_section_max(&f, lo, hi, xtol);
    if fx >= best_f {
        (x, fx)
    } else {
        (a + step * best_k as f64, best_f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn golden_finds_parabola_peak() {
        let (x, fx) = golden_section_max(|x| -(x - 1.3).powi(2) + 2.0, -5.0, 5.0, 1e-10);
        assert!((x - 1.3).abs() < 1e-7);
        assert!((fx - 2.0).abs() < 1e-15);
    }

    #[test]
    fn grid_escapes_local_maximum() {
        // Local bump near 0.5, global peak at 3.
        let f = |x: f64| (-(x - 0.5).powi(2) * 50.0).exp() * 0.5 + (-(x - 3.0).powi(2)).exp();
        let (x, fx) = grid_then_golden(f, 0.0, 5.0, 64, 1e-10);
        assert!((x - 3.0).abs() < 1e-6, "{x}");
        assert!(fx > 0.99);
    }

    #[test]
    fn peak_at_right_end() {
        let (x, _) = grid_then_golden(|x| x, 0.0, 2.0, 16, 1e-12);
        assert!((x - 2.0).abs() < 1e-9);
    }

    #[test]
    fn peak_at_open_left_end() {
        let (x, _) = grid_then_golden(|x| -x, 1.0, 2.0, 16, 1e-12);
        assert!(x > 1.0 && x - 1.0 < 1e-9);
    }
}
