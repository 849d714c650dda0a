use serde::Serialize;

use super::{flat_masses, split_outside, Diagnostics, Method, MethodResult};
use crate::dist::{
    std_normal_mass, std_normal_pdf, NormalLikelihood, Piece, PosteriorMixture, SpecialInterval,
    TruncatedNormal,
};
use crate::error::{check_open_probability, Error, Result};
use crate::optimize::grid_then_golden;

/// Number of grid points used to bracket the best shell half-width.
const SHELL_GRID: usize = 512;
/// The shell search covers half-widths up to this many standard errors
/// beyond the larger of `|estimate - theta0|` and `epsilon`.
const SHELL_REACH_SE: f64 = 10.0;

/// Flat improper prior: the posterior is `N(estimate, se^2)`.
pub fn flat_posterior(lik: &NormalLikelihood, interval: &SpecialInterval) -> MethodResult {
    let [below, inside, above] = flat_masses(lik, interval);
    let total = below + inside + above;
    let weights = [below / total, inside / total, above / total];
    let mixture = PosteriorMixture::from_likelihood(lik, interval, weights)
        .expect("flat posterior weights come from the pieces' own masses");
    MethodResult {
        method: Method::Flat,
        hyper: None,
        interval_prob: weights[1],
        prob_ge_lower: 1.0 - weights[0],
        mixture,
        diagnostics: Diagnostics::default(),
    }
}

fn check_prior_probability(alpha: f64) -> Result<()> {
    if (0.0..=1.0).contains(&alpha) {
        Ok(())
    } else {
        Err(Error::ProbabilityOutOfRange(alpha))
    }
}

/// Mean likelihood height over the interval (`h` uniform). For a point
/// interval this is the likelihood at `theta0`.
pub fn mean_likelihood_inside(lik: &NormalLikelihood, interval: &SpecialInterval) -> f64 {
    if interval.is_point() {
        lik.density(interval.theta0())
    } else {
        lik.mass(interval.lower(), interval.upper()) / (2.0 * interval.epsilon())
    }
}

/// Mean of the likelihood heights at the two ends of the interval.
pub fn mean_likelihood_limits(lik: &NormalLikelihood, interval: &SpecialInterval) -> f64 {
    0.5 * (lik.density(interval.lower()) + lik.density(interval.upper()))
}

/// Mean likelihood over the shell `[theta0 - c, theta0 - eps] U [theta0 + eps, theta0 + c]`,
/// i.e. the marginal likelihood when `g` is uniform on that shell.
pub fn shell_mean_likelihood(
    lik: &NormalLikelihood,
    interval: &SpecialInterval,
    c: f64,
) -> Result<f64> {
    let eps = interval.epsilon();
    if c.is_nan() || c <= eps {
        return Err(Error::InvalidParameter(format!(
            "shell half-width {c} must exceed epsilon {eps}"
        )));
    }
    Ok(shell_mean_unchecked(lik, interval, c))
}

fn shell_mean_unchecked(lik: &NormalLikelihood, interval: &SpecialInterval, c: f64) -> f64 {
    let t0 = interval.theta0();
    let eps = interval.epsilon();
    let mass = lik.mass(t0 - c, t0 - eps) + lik.mass(t0 + eps, t0 + c);
    mass / (2.0 * (c - eps))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ShellOptimum {
    /// Best shell half-width. Equals `epsilon` when the supremum is the
    /// zero-width limit (mass split between the two interval ends).
    pub c_star: f64,
    pub m_bar_star: f64,
}

/// Largest mean likelihood over uniform shells, which gives the smallest
/// posterior probability of the interval over symmetric non-increasing
/// priors outside it (every such prior is a mixture of these shells and
/// the marginal likelihood is linear in the mixture).
pub fn optimize_c(lik: &NormalLikelihood, interval: &SpecialInterval) -> ShellOptimum {
    let eps = interval.epsilon();
    let dist = (lik.estimate() - interval.theta0()).abs();
    let reach = dist.max(eps) + SHELL_REACH_SE * lik.se();
    let xtol = 1e-7 * lik.se();
    let (c, m) = grid_then_golden(
        |c| shell_mean_unchecked(lik, interval, c),
        eps,
        reach,
        SHELL_GRID,
        xtol,
    );

    let limit = mean_likelihood_limits(lik, interval);
    if limit > m {
        ShellOptimum {
            c_star: eps,
            m_bar_star: limit,
        }
    } else {
        ShellOptimum {
            c_star: c,
            m_bar_star: m,
        }
    }
}

/// Two-step method. Step one fixes the outside-conditional posterior from a
/// flat prior; step two takes the interval probability as the lower limit
/// over symmetric non-increasing priors, with `h` uniform on the interval.
pub fn two_step(
    lik: &NormalLikelihood,
    interval: &SpecialInterval,
    alpha: f64,
) -> Result<MethodResult> {
    check_open_probability(alpha)?;
    let m_h = mean_likelihood_inside(lik, interval);
    let opt = optimize_c(lik, interval);
    let p_lower = alpha * m_h / (alpha * m_h + (1.0 - alpha) * opt.m_bar_star);
    let mixture = split_outside(lik, interval, p_lower)?;
    Ok(MethodResult {
        method: Method::TwoStep,
        hyper: Some(alpha),
        interval_prob: p_lower,
        prob_ge_lower: 1.0 - mixture.weights()[0],
        mixture,
        diagnostics: Diagnostics {
            c_star: Some(opt.c_star),
            m_h: Some(m_h),
            m_bar_star: Some(opt.m_bar_star),
            ..Diagnostics::default()
        },
    })
}

/// `alpha * M_inside / M_limits`, the closed-form lower limit stated for a
/// unimodal likelihood peaking inside the interval.
///
/// This is not the same quantity as the shell construction's zero-width
/// limit (see [`shell_limit_lower_bound`]); the two agree only when
/// `M_inside == M_limits`. It can exceed one for `alpha` close to one.
/// [`two_step`] is the authoritative computation.
pub fn eq7_lower_bound(
    lik: &NormalLikelihood,
    interval: &SpecialInterval,
    alpha: f64,
) -> Result<f64> {
    check_prior_probability(alpha)?;
    if !interval.contains(lik.estimate()) {
        return Err(Error::Precondition(format!(
            "likelihood maximum {} lies outside [{}, {}]",
            lik.estimate(),
            interval.lower(),
            interval.upper()
        )));
    }
    Ok(alpha * mean_likelihood_inside(lik, interval) / mean_likelihood_limits(lik, interval))
}

/// `alpha M_inside / (alpha M_inside + (1 - alpha) M_limits)`: the posterior
/// interval probability when `g` is the zero-width shell at the interval ends.
pub fn shell_limit_lower_bound(
    lik: &NormalLikelihood,
    interval: &SpecialInterval,
    alpha: f64,
) -> Result<f64> {
    check_prior_probability(alpha)?;
    let inside = alpha * mean_likelihood_inside(lik, interval);
    Ok(inside / (inside + (1.0 - alpha) * mean_likelihood_limits(lik, interval)))
}

/// Marginal likelihood outside the interval when `g = N(theta0, g_sd^2)`
/// restricted to the complement and renormalised, plus the posterior
/// `N(mean, sd)` that the product `likelihood * g` is proportional to.
fn normal_g_outside(
    lik: &NormalLikelihood,
    interval: &SpecialInterval,
    g_sd: f64,
) -> (f64, f64, f64) {
    let t0 = interval.theta0();
    let (v_lik, v_g) = (lik.se().powi(2), g_sd * g_sd);
    let marginal_sd = (v_lik + v_g).sqrt();
    let marginal = std_normal_pdf((lik.estimate() - t0) / marginal_sd) / marginal_sd;
    let post_mean = (lik.estimate() * v_g + t0 * v_lik) / (v_lik + v_g);
    let post_sd = lik.se() * g_sd / marginal_sd;

    let z = |x: f64, m: f64, s: f64| (x - m) / s;
    let post_inside = std_normal_mass(
        z(interval.lower(), post_mean, post_sd),
        z(interval.upper(), post_mean, post_sd),
    );
    let prior_inside = std_normal_mass(-interval.epsilon() / g_sd, interval.epsilon() / g_sd);
    let outside = marginal * (1.0 - post_inside) / (1.0 - prior_inside);
    (outside, post_mean, post_sd)
}

/// Posterior probability of the interval under a single fully specified
/// prior: `alpha` on the interval (uniform inside, or a point mass when
/// `epsilon == 0`) and `1 - alpha` on `N(theta0, g_sd^2)` restricted to the
/// complement. Tends to one as `g_sd` grows, whatever the data.
pub fn standard_bayes_normal_g(
    lik: &NormalLikelihood,
    interval: &SpecialInterval,
    alpha: f64,
    g_sd: f64,
) -> Result<f64> {
    check_prior_probability(alpha)?;
    if !(g_sd > 0.0 && g_sd.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "g_sd must be positive, got {g_sd}"
        )));
    }
    if alpha == 0.0 || alpha == 1.0 {
        return Ok(alpha);
    }
    let inside = alpha * mean_likelihood_inside(lik, interval);
    let (outside, _, _) = normal_g_outside(lik, interval, g_sd);
    Ok(inside / (inside + (1.0 - alpha) * outside))
}

/// Full post-data mixture for [`standard_bayes_normal_g`]. The outside pieces
/// are the normal `likelihood * g` posterior cut at the interval.
pub fn standard_bayes_normal_g_result(
    lik: &NormalLikelihood,
    interval: &SpecialInterval,
    alpha: f64,
    g_sd: f64,
) -> Result<MethodResult> {
    check_open_probability(alpha)?;
    let p = standard_bayes_normal_g(lik, interval, alpha, g_sd)?;
    let (_, m, s) = normal_g_outside(lik, interval, g_sd);
    let below_mass = std_normal_mass(f64::NEG_INFINITY, (interval.lower() - m) / s);
    let above_mass = std_normal_mass((interval.upper() - m) / s, f64::INFINITY);
    let w_below = (1.0 - p) * below_mass / (below_mass + above_mass);
    let weights = [w_below, p, (1.0 - p - w_below).max(0.0)];

    let below = TruncatedNormal::new(m, s, f64::NEG_INFINITY, interval.lower())
        .ok()
        .map(Piece::Truncated);
    let above = TruncatedNormal::new(m, s, interval.upper(), f64::INFINITY)
        .ok()
        .map(Piece::Truncated);
    let inside = PosteriorMixture::from_likelihood(lik, interval, [0.0, 1.0, 0.0])?
        .inside()
        .copied();
    let mixture = PosteriorMixture::new([below, inside, above], weights)?;
    Ok(MethodResult {
        method: Method::StandardNormalG,
        hyper: Some(alpha),
        interval_prob: p,
        prob_ge_lower: 1.0 - weights[0],
        mixture,
        diagnostics: Diagnostics {
            g_sd: Some(g_sd),
            m_h: Some(mean_likelihood_inside(lik, interval)),
            ..Diagnostics::default()
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::effects::{likelihood, TwoByTwoTable};

    fn i01() -> SpecialInterval {
        SpecialInterval::new(0.0, 0.1).unwrap()
    }

    fn table(n_t: u64, e_t: u64, n_c: u64, e_c: u64) -> NormalLikelihood {
        likelihood(&TwoByTwoTable::new(n_t, e_t, n_c, e_c).unwrap()).unwrap()
    }

    fn t1() -> NormalLikelihood {
        table(74, 10, 74, 25)
    }

    fn t3() -> NormalLikelihood {
        table(111, 23, 107, 31)
    }

    /// Dense grid over the same range, no refinement.
    fn brute_force_best_shell(lik: &NormalLikelihood, i: &SpecialInterval) -> (f64, f64) {
        let reach = (lik.estimate() - i.theta0()).abs().max(i.epsilon()) + 10.0 * lik.se();
        let n = 200_000;
        (1..=n)
            .map(|k| i.epsilon() + (reach - i.epsilon()) * k as f64 / n as f64)
            .map(|c| (c, shell_mean_likelihood(lik, i, c).unwrap()))
            .fold(
                (0.0, f64::NEG_INFINITY),
                |a, b| if b.1 > a.1 { b } else { a },
            )
    }

    #[test]
    fn flat_rows() {
        let r = flat_posterior(&t1(), &i01());
        assert!((r.interval_prob - 0.004).abs() < 1e-3);
        assert!((r.prob_ge_lower - 0.005).abs() < 1e-3);
        let r = flat_posterior(&t3(), &i01());
        assert!((r.interval_prob - 0.095).abs() < 2e-3);
        assert!((r.prob_ge_lower - 0.138).abs() < 2e-3);
    }

    #[test]
    fn flat_point_interval_has_no_mass() {
        let lik = NormalLikelihood::new(0.0, 1.0).unwrap();
        let r = flat_posterior(&lik, &SpecialInterval::new(0.0, 0.0).unwrap());
        assert_eq!(r.interval_prob, 0.0);
    }

    #[test]
    fn inside_mean_likelihood() {
        let lik = t1();
        let closed = (crate::dist::std_normal_cdf((0.1 - lik.estimate()) / lik.se())
            - crate::dist::std_normal_cdf((-0.1 - lik.estimate()) / lik.se()))
            / 0.2;
        assert!((mean_likelihood_inside(&lik, &i01()) - closed).abs() < 1e-15);
        assert!((closed - 0.01906).abs() < 1e-4);

        let centred = NormalLikelihood::new(0.0, 0.7).unwrap();
        let point = SpecialInterval::new(0.0, 0.0).unwrap();
        let peak = 1.0 / (0.7 * (2.0 * std::f64::consts::PI).sqrt());
        assert!((mean_likelihood_inside(&centred, &point) - peak).abs() < 1e-15);

        let a = NormalLikelihood::new(0.3, 0.5).unwrap();
        let b = NormalLikelihood::new(-0.3, 0.5).unwrap();
        assert!(
            (mean_likelihood_inside(&a, &i01()) - mean_likelihood_inside(&b, &i01())).abs() < 1e-15
        );
    }

    #[test]
    fn shell_means() {
        let lik = t1();
        let m = shell_mean_likelihood(&lik, &i01(), 1.62).unwrap();
        assert!((m - 0.2783).abs() < 5e-4, "{m}");
        let near = shell_mean_likelihood(&lik, &i01(), 0.1 + 1e-6).unwrap();
        assert!((near - mean_likelihood_limits(&lik, &i01())).abs() < 1e-6);
        assert!(shell_mean_likelihood(&lik, &i01(), 1e6).unwrap() < 1e-6);
        assert!(shell_mean_likelihood(&lik, &i01(), 0.1).is_err());
    }

    #[test]
    fn optimizer_matches_dense_grid() {
        for lik in [t1(), t3(), table(74, 5, 74, 14)] {
            let opt = optimize_c(&lik, &i01());
            let (c, m) = brute_force_best_shell(&lik, &i01());
            assert!((opt.c_star - c).abs() < 1e-4, "{} vs {c}", opt.c_star);
            assert!(opt.m_bar_star >= m - 1e-12);
            assert!((opt.m_bar_star - m).abs() < 1e-9);
        }
        let opt = optimize_c(&t1(), &i01());
        assert!((opt.c_star - 1.62).abs() < 5e-3);
        assert!((opt.m_bar_star - 0.2783).abs() < 5e-4);
        assert!((optimize_c(&t3(), &i01()).m_bar_star - 0.5930).abs() < 1e-4);
    }

    #[test]
    fn optimizer_c_is_precise() {
        let lik = t1();
        let opt = optimize_c(&lik, &i01());
        let h = 1e-5;
        let f = |c| shell_mean_likelihood(&lik, &i01(), c).unwrap();
        // Stationary point: the derivative changes sign across c*.
        assert!(f(opt.c_star - h) <= opt.m_bar_star && f(opt.c_star + h) <= opt.m_bar_star);
    }

    #[test]
    fn centred_likelihood_puts_optimum_at_the_limit() {
        let lik = NormalLikelihood::new(0.0, 0.5).unwrap();
        let opt = optimize_c(&lik, &i01());
        assert_eq!(opt.c_star, 0.1);
        assert_eq!(opt.m_bar_star, mean_likelihood_limits(&lik, &i01()));
        let r = two_step(&lik, &i01(), 0.5).unwrap();
        let lim = shell_limit_lower_bound(&lik, &i01(), 0.5).unwrap();
        assert!((r.interval_prob - lim).abs() < 1e-15);
    }

    #[test]
    fn two_step_table1() {
        let lik = t1();
        let r = two_step(&lik, &i01(), 0.5).unwrap();
        assert!((r.interval_prob - 0.064).abs() < 2e-3);
        assert!((r.prob_ge_lower - 0.065).abs() < 2e-3);
        let (lo, hi) = r.central_interval(0.95).unwrap();
        assert!((lo.exp() - 0.136).abs() < 5e-3 && (hi.exp() - 0.992).abs() < 5e-3);
        assert!((r.mixture.cdf(0.992_f64.ln()) - 0.975).abs() < 2e-3);

        let r = two_step(&lik, &i01(), 0.8).unwrap();
        assert!((r.interval_prob - 0.214).abs() < 2e-3);
        assert!((r.prob_ge_lower - 0.215).abs() < 2e-3);
        let (lo, hi) = r.central_interval(0.95).unwrap();
        assert!((lo.exp() - 0.141).abs() < 5e-3 && (hi.exp() - 1.060).abs() < 5e-3);
    }

    #[test]
    fn two_step_table3() {
        let r = two_step(&t3(), &i01(), 0.5).unwrap();
        assert!((r.interval_prob - 0.446).abs() < 2e-3);
        let (lo, hi) = r.central_interval(0.95).unwrap();
        assert!((lo.exp() - 0.369).abs() < 5e-3 && (hi.exp() - 1.112).abs() < 5e-3);
        // Mixture-consistent value; the published table prints 0.488, which
        // is the interval probability plus the flat-posterior upper tail.
        assert!((r.prob_ge_lower - 0.4716).abs() < 1e-3);
        let published = r.interval_prob + flat_masses(&t3(), &i01())[2];
        assert!((published - 0.488).abs() < 1e-3);
    }

    #[test]
    fn two_step_rejects_bad_alpha() {
        assert!(two_step(&t1(), &i01(), 0.0).is_err());
        assert!(two_step(&t1(), &i01(), 1.0).is_err());
    }

    #[test]
    fn two_step_increasing_in_alpha() {
        let mut prev = 0.0;
        for k in 1..=9 {
            let p = two_step(&t3(), &i01(), k as f64 / 10.0)
                .unwrap()
                .interval_prob;
            assert!(p > prev);
            prev = p;
        }
    }

    #[test]
    fn eq7_flat_limit() {
        let lik = NormalLikelihood::new(0.0, 1.0).unwrap();
        let tiny = SpecialInterval::new(0.0, 1e-6).unwrap();
        assert!((eq7_lower_bound(&lik, &tiny, 0.5).unwrap() - 0.5).abs() < 1e-9);
    }

    #[test]
    fn eq7_closed_form() {
        // theta_hat = theta0, se = 1, eps = 0.1:
        // M_inside = (Phi(0.1) - Phi(-0.1)) / 0.2, M_limits = phi(0.1).
        let lik = NormalLikelihood::new(0.0, 1.0).unwrap();
        let inside = 0.079_655_674_554_057_97 / 0.2;
        let limits = 0.396_952_547_477_011_8;
        let v = eq7_lower_bound(&lik, &i01(), 0.5).unwrap();
        assert!((v - 0.5 * inside / limits).abs() < 1e-12);
        assert!((v - 0.501_670_004_767).abs() < 1e-9);
        assert!(v > 0.5);
        let lim = shell_limit_lower_bound(&lik, &i01(), 0.5).unwrap();
        assert!((lim - 0.500_833_610_251).abs() < 1e-9);
        assert!(lim < v);
    }

    #[test]
    fn eq7_requires_peak_inside() {
        assert!(matches!(
            eq7_lower_bound(&t1(), &i01(), 0.5),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn normal_g_limits_and_growth() {
        let lik = t1();
        assert_eq!(
            standard_bayes_normal_g(&lik, &i01(), 0.0, 1.0).unwrap(),
            0.0
        );
        assert_eq!(
            standard_bayes_normal_g(&lik, &i01(), 1.0, 1.0).unwrap(),
            1.0
        );
        let mut prev = 0.0;
        let mut sd = 1.0;
        for _ in 0..24 {
            let p = standard_bayes_normal_g(&lik, &i01(), 0.5, sd).unwrap();
            assert!(p > prev, "sd {sd}: {p} <= {prev}");
            prev = p;
            sd *= 2.0;
        }
        assert!(prev > 0.99);
    }

    #[test]
    fn normal_g_mixture_is_consistent() {
        let r = standard_bayes_normal_g_result(&t3(), &i01(), 0.5, 2.0).unwrap();
        let w = r.mixture.weights();
        assert!((w.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        assert!((w[1] - r.interval_prob).abs() < 1e-15);
        let m = r.mixture.cdf(0.1) - r.mixture.cdf(-0.1);
        assert!((m - r.interval_prob).abs() < 1e-12);
    }
}
