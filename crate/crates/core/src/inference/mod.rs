//! Post-data distributions for a parameter with a special interval.
//!
//! Every method here returns a [`MethodResult`] whose mixture has the same
//! three pieces: the flat-prior posterior `N(estimate, se^2)` cut below,
//! inside and above the interval. Methods differ only in the weights they
//! put on those pieces:
//!
//! * [`flat_posterior`]: the weights induced by the flat posterior itself.
//! * [`two_step`]: the inside weight is the smallest posterior probability of
//!   the interval over all symmetric non-increasing priors outside it, for a
//!   given prior probability `alpha`.
//! * [`p_hybrid`]: the analyst assigns `gamma` to the one-sided event the
//!   one-sided P value tests.
//! * [`q_hybrid`]: the analyst assigns `beta` directly to the interval, after
//!   weighing the Q value.
//!
//! Outside the interval the mass is always split in the proportions of the
//! flat posterior restricted to the complement.

mod bayes;
mod hybrid;

pub use bayes::{
    eq7_lower_bound, flat_posterior, mean_likelihood_inside, mean_likelihood_limits, optimize_c,
    shell_limit_lower_bound, shell_mean_likelihood, standard_bayes_normal_g,
    standard_bayes_normal_g_result, two_step, ShellOptimum,
};
pub use hybrid::{
    gamma_floor, one_sided_p, p_hybrid, prior_carryover, q_hybrid, q_value, OneSidedP, Side,
};

use serde::Serialize;

use crate::dist::{NormalLikelihood, PosteriorMixture, SpecialInterval};
use crate::error::Result;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    Flat,
    StandardNormalG,
    TwoStep,
    PHybrid,
    QHybrid,
}

impl Method {
    pub fn name(&self) -> &'static str {
        match self {
            Method::Flat => "flat",
            Method::StandardNormalG => "standard-normal-g",
            Method::TwoStep => "two-step",
            Method::PHybrid => "p-hybrid",
            Method::QHybrid => "q-hybrid",
        }
    }
}

/// Intermediate quantities, filled in where the method defines them.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct Diagnostics {
    /// One-sided P value (p-hybrid) or Q value at `theta0 + epsilon` (q-hybrid).
    pub significance: Option<f64>,
    pub side: Option<Side>,
    /// Ratio of above-interval to below-interval mass of the outside posterior
    /// (mirrored for the upper side).
    pub lambda: Option<f64>,
    pub gamma_floor: Option<f64>,
    pub c_star: Option<f64>,
    /// Mean likelihood height over the interval.
    pub m_h: Option<f64>,
    /// Largest mean likelihood over a symmetric uniform shell.
    pub m_bar_star: Option<f64>,
    pub g_sd: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MethodResult {
    pub method: Method,
    /// The prior or analyst-assigned probability the method was run with.
    pub hyper: Option<f64>,
    /// Post-data probability that the parameter lies in the interval.
    pub interval_prob: f64,
    /// Post-data probability that the parameter is at least `theta0 - epsilon`.
    pub prob_ge_lower: f64,
    pub mixture: PosteriorMixture,
    pub diagnostics: Diagnostics,
}

impl MethodResult {
    /// Equal-tailed post-data interval on the parameter scale.
    pub fn central_interval(&self, level: f64) -> Result<(f64, f64)> {
        self.mixture.central_interval(level)
    }
}

/// Flat-posterior masses below, inside and above the interval.
pub(crate) fn flat_masses(lik: &NormalLikelihood, interval: &SpecialInterval) -> [f64; 3] {
    let below = lik.mass(f64::NEG_INFINITY, interval.lower());
    let inside = lik.mass(interval.lower(), interval.upper());
    let above = lik.mass(interval.upper(), f64::INFINITY);
    [below, inside, above]
}

/// Mixture with `inside_weight` on the interval and the rest split like the
/// flat posterior restricted to the complement.
pub(crate) fn split_outside(
    lik: &NormalLikelihood,
    interval: &SpecialInterval,
    inside_weight: f64,
) -> Result<PosteriorMixture> {
    let [below, _, above] = flat_masses(lik, interval);
    let outside = below + above;
    let rest = 1.0 - inside_weight;
    let w_below = rest * below / outside;
    let w_above = rest - w_below;
    PosteriorMixture::from_likelihood(lik, interval, [w_below, inside_weight, w_above.max(0.0)])
}
