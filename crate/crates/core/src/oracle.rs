//! Slow, independent reference computations used by the test suites.
//!
//! Nothing here shares a code path with [`crate::inference`] or
//! [`crate::meta`] beyond the likelihood density itself: integrals are taken
//! by adaptive Simpson quadrature rather than through normal cdfs, the
//! shell search is an exhaustive grid, and the random-effects pooling uses
//! the expanded-sum form of the heterogeneity statistic.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::dist::{NormalLikelihood, SpecialInterval};
use crate::error::{Error, Result};

const MAX_DEPTH: u32 = 60;

/// Half-width, in standard errors, of the window the likelihood is
/// integrated over. The density is below 1e-300 outside it.
const LIKELIHOOD_WINDOW_SE: f64 = 40.0;

/// Adaptive Simpson quadrature of `f` over `[a, b]` with absolute tolerance `tol`.
pub fn adaptive_simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> Result<f64> {
    if a == b {
        return Ok(0.0);
    }
    let (fa, fb) = (f(a), f(b));
    let m = 0.5 * (a + b);
    let fm = f(m);
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    simpson_step(f, a, b, fa, fm, fb, whole, tol, MAX_DEPTH)
}

#[allow(clippy::too_many_arguments)]
fn simpson_step(
    f: &dyn Fn(f64) -> f64,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> Result<f64> {
    let m = 0.5 * (a + b);
    let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
    let (flm, frm) = (f(lm), f(rm));
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    if delta.abs() <= 15.0 * tol {
        return Ok(left + right + delta / 15.0);
    }
    if depth == 0 {
        return Err(Error::NoConvergence { a, b });
    }
    Ok(
        simpson_step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)?
            + simpson_step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)?,
    )
}

/// Integrate a piecewise-smooth `f` over `[a, b]`, splitting at every
/// breakpoint inside it. Each segment sees one-sided values of `f` at its
/// ends, so jumps at the breakpoints do not stall the refinement.
pub fn integrate_piecewise(
    f: &dyn Fn(f64) -> f64,
    a: f64,
    b: f64,
    breaks: &[f64],
    tol: f64,
) -> Result<f64> {
    let mut pts: Vec<f64> = std::iter::once(a)
        .chain(breaks.iter().copied().filter(|x| *x > a && *x < b))
        .chain(std::iter::once(b))
        .collect();
    pts.sort_by(f64::total_cmp);
    pts.dedup();
    let tol = tol / (pts.len() - 1) as f64;
    pts.windows(2)
        .map(|w| {
            let (lo, hi) = (w[0].next_up(), w[1].next_down());
            let g = |x: f64| f(x.clamp(lo, hi));
            adaptive_simpson(&g, w[0], w[1], tol)
        })
        .sum()
}

/// A prior given by a density (possibly defective) plus point masses.
pub struct QuadraturePrior<'a> {
    pub density: Box<dyn Fn(f64) -> f64 + 'a>,
    /// `(location, probability)` pairs.
    pub atoms: Vec<(f64, f64)>,
    /// Points where the density is discontinuous.
    pub breakpoints: Vec<f64>,
}

impl<'a> QuadraturePrior<'a> {
    /// Improper flat prior.
    pub fn flat() -> Self {
        Self {
            density: Box::new(|_| 1.0),
            atoms: vec![],
            breakpoints: vec![],
        }
    }

    pub fn point_mass(at: f64) -> Self {
        Self {
            density: Box::new(|_| 0.0),
            atoms: vec![(at, 1.0)],
            breakpoints: vec![],
        }
    }

    /// `alpha` spread uniformly on the interval (or a point mass at `theta0`
    /// when the interval is a point) and `1 - alpha` on `N(theta0, g_sd^2)`
    /// restricted to the complement. The restriction is renormalised by
    /// quadrature of the normal density.
    pub fn interval_plus_normal(interval: SpecialInterval, alpha: f64, g_sd: f64) -> Result<Self> {
        let t0 = interval.theta0();
        let g = move |t: f64| {
            let z = (t - t0) / g_sd;
            (-0.5 * z * z).exp() / (g_sd * (2.0 * std::f64::consts::PI).sqrt())
        };
        let inside_g = if interval.is_point() {
            0.0
        } else {
            adaptive_simpson(&g, interval.lower(), interval.upper(), 1e-15)?
        };
        let outside_norm = 1.0 - inside_g;
        let density = move |t: f64| {
            if interval.is_point() {
                (1.0 - alpha) * g(t)
            } else if interval.contains(t) {
                alpha / (2.0 * interval.epsilon())
            } else {
                (1.0 - alpha) * g(t) / outside_norm
            }
        };
        let atoms = if interval.is_point() {
            vec![(t0, alpha)]
        } else {
            vec![]
        };
        Ok(Self {
            density: Box::new(density),
            atoms,
            breakpoints: vec![interval.lower(), interval.upper()],
        })
    }
}

/// Integral of `likelihood * prior` over `[a, b]`, atoms included.
pub fn quadrature_mass(
    lik: &NormalLikelihood,
    prior: &QuadraturePrior,
    a: f64,
    b: f64,
) -> Result<f64> {
    let f = |t: f64| lik.density(t) * (prior.density)(t);
    let window = (
        lik.estimate() - LIKELIHOOD_WINDOW_SE * lik.se(),
        lik.estimate() + LIKELIHOOD_WINDOW_SE * lik.se(),
    );
    let (lo, hi) = (a.max(window.0), b.min(window.1));
    let continuous = if lo < hi {
        integrate_piecewise(&f, lo, hi, &prior.breakpoints, 1e-13)?
    } else {
        0.0
    };
    let atoms: f64 = prior
        .atoms
        .iter()
        .filter(|(x, _)| *x >= a && *x <= b)
        .map(|(x, m)| m * lik.density(*x))
        .sum();
    Ok(continuous + atoms)
}

/// Posterior probability of the interval by direct numerical integration of
/// likelihood times prior.
pub fn quadrature_posterior(
    lik: &NormalLikelihood,
    prior: &QuadraturePrior,
    interval: &SpecialInterval,
) -> Result<f64> {
    let total = quadrature_mass(lik, prior, f64::NEG_INFINITY, f64::INFINITY)?;
    let inside = quadrature_mass(lik, prior, interval.lower(), interval.upper())?;
    Ok(inside / total)
}

/// A finite mixture of symmetric uniform shells
/// `U([theta0 - c, theta0 - eps] U [theta0 + eps, theta0 + c])`.
#[derive(Debug, Clone, PartialEq)]
pub struct UniformShellGrid {
    pub c_values: Vec<f64>,
    pub mixture_weights: Vec<f64>,
}

impl UniformShellGrid {
    pub fn new(c_values: Vec<f64>, mixture_weights: Vec<f64>) -> Result<Self> {
        if c_values.len() != mixture_weights.len() || c_values.is_empty() {
            return Err(Error::InvalidParameter(
                "shell grid needs one weight per half-width".into(),
            ));
        }
        if mixture_weights.iter().any(|w| w.is_nan() || *w < 0.0) {
            return Err(Error::InvalidParameter(
                "shell weights must be non-negative".into(),
            ));
        }
        if (mixture_weights.iter().sum::<f64>() - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidParameter(
                "shell weights must sum to one".into(),
            ));
        }
        Ok(Self {
            c_values,
            mixture_weights,
        })
    }

    /// Marginal likelihood of the data under this mixture, given the
    /// per-shell marginals.
    pub fn marginal(&self, shell_means: &[f64]) -> f64 {
        self.mixture_weights
            .iter()
            .zip(shell_means)
            .map(|(w, m)| w * m)
            .sum()
    }
}

/// Mean likelihood over the shell of half-width `c`, by quadrature.
pub fn shell_mean_quadrature(
    lik: &NormalLikelihood,
    interval: &SpecialInterval,
    c: f64,
) -> Result<f64> {
    let t0 = interval.theta0();
    let eps = interval.epsilon();
    let f = |t: f64| lik.density(t);
    let mass = adaptive_simpson(&f, t0 - c, t0 - eps, 1e-14)?
        + adaptive_simpson(&f, t0 + eps, t0 + c, 1e-14)?;
    Ok(mass / (2.0 * (c - eps)))
}

/// Mean likelihood over the interval by quadrature (the likelihood at
/// `theta0` for a point interval).
pub fn inside_mean_quadrature(lik: &NormalLikelihood, interval: &SpecialInterval) -> Result<f64> {
    if interval.is_point() {
        return Ok(lik.density(interval.theta0()));
    }
    let f = |t: f64| lik.density(t);
    Ok(
        adaptive_simpson(&f, interval.lower(), interval.upper(), 1e-14)?
            / (2.0 * interval.epsilon()),
    )
}

/// Half-widths `eps + (reach - eps) k / resolution`, `k = 1..=resolution`,
/// with `reach = eps + |estimate - theta0| + 12 se`.
pub fn shell_half_widths(
    lik: &NormalLikelihood,
    interval: &SpecialInterval,
    resolution: usize,
) -> Vec<f64> {
    let eps = interval.epsilon();
    let reach = eps + (lik.estimate() - interval.theta0()).abs() + 12.0 * lik.se();
    (1..=resolution)
        .map(|k| eps + (reach - eps) * k as f64 / resolution as f64)
        .collect()
}

/// Dirichlet(1, ..., 1) draws over `n` shells.
pub fn random_shell_weights(n: usize, count: usize, seed: u64) -> Vec<Vec<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let e: Vec<f64> = (0..n).map(|_| -(1.0 - rng.random::<f64>()).ln()).collect();
            let s: f64 = e.iter().sum();
            e.into_iter().map(|x| x / s).collect()
        })
        .collect()
}

/// Smallest posterior probability of the interval found by scanning single
/// shells on a grid of `resolution` half-widths and `random_mixtures`
/// random mixtures of them. Since the marginal likelihood is linear in the
/// mixture weights, single shells (the vertices) should always win.
pub fn gnis_bruteforce_lower(
    lik: &NormalLikelihood,
    interval: &SpecialInterval,
    alpha: f64,
    resolution: usize,
    random_mixtures: usize,
    seed: u64,
) -> Result<f64> {
    if resolution < 64 {
        return Err(Error::InvalidParameter(format!(
            "grid resolution {resolution} is below 64"
        )));
    }
    if !(0.0..=1.0).contains(&alpha) {
        return Err(Error::ProbabilityOutOfRange(alpha));
    }
    if alpha == 0.0 {
        return Ok(0.0);
    }
    let cs = shell_half_widths(lik, interval, resolution);
    let means = cs
        .iter()
        .map(|c| shell_mean_quadrature(lik, interval, *c))
        .collect::<Result<Vec<_>>>()?;
    let inside = alpha * inside_mean_quadrature(lik, interval)?;
    let posterior = |m: f64| inside / (inside + (1.0 - alpha) * m);

    let vertex_min = means
        .iter()
        .map(|m| posterior(*m))
        .fold(f64::INFINITY, f64::min);
    let mixture_min = random_shell_weights(cs.len(), random_mixtures, seed)
        .into_iter()
        .map(|w| {
            posterior(
                UniformShellGrid::new(cs.clone(), w)
                    .expect("dirichlet weights")
                    .marginal(&means),
            )
        })
        .fold(f64::INFINITY, f64::min);
    Ok(vertex_min.min(mixture_min))
}

/// Output of [`dersimonian_laird_oracle`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DlOracle {
    pub pooled: f64,
    pub pooled_se: f64,
    pub tau2: f64,
    pub q_stat: f64,
}

/// Step-by-step DerSimonian-Laird from `(estimate, se)` pairs, written
/// independently of [`crate::meta::dersimonian_laird`].
pub fn dersimonian_laird_oracle(studies: &[(f64, f64)]) -> Result<DlOracle> {
    if studies.is_empty() {
        return Err(Error::Empty("no studies".into()));
    }
    let k = studies.len() as f64;
    let mut s_w = 0.0;
    let mut s_w2 = 0.0;
    let mut s_wy = 0.0;
    let mut s_wy2 = 0.0;
    for &(y, se) in studies {
        let w = 1.0 / (se * se);
        s_w += w;
        s_w2 += w * w;
        s_wy += w * y;
        s_wy2 += w * y * y;
    }
    let q_stat = (s_wy2 - s_wy * s_wy / s_w).max(0.0);
    let c = s_w - s_w2 / s_w;
    let tau2 = if studies.len() > 1 && c > 0.0 {
        ((q_stat - (k - 1.0)) / c).max(0.0)
    } else {
        0.0
    };

    let mut s_ws = 0.0;
    let mut s_wsy = 0.0;
    for &(y, se) in studies {
        let ws = 1.0 / (se * se + tau2);
        s_ws += ws;
        s_wsy += ws * y;
    }
    Ok(DlOracle {
        pooled: s_wsy / s_ws,
        pooled_se: (1.0 / s_ws).sqrt(),
        tau2,
        q_stat,
    })
}
