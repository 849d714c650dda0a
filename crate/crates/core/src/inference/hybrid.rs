use serde::Serialize;

use super::{flat_masses, split_outside, Diagnostics, Method, MethodResult};
use crate::dist::{
    std_normal_cdf, std_normal_sf, NormalLikelihood, PosteriorMixture, SpecialInterval,
};
use crate::error::{Error, Result};

/// Which one-sided test the estimate calls for.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    /// `H0: theta >= theta0 - eps` against `H1: theta < theta0 - eps`.
    Lower,
    /// `H0: theta <= theta0 + eps` against `H1: theta > theta0 + eps`.
    Upper,
    /// The estimate sits between the two crossing points; neither test applies.
    None,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OneSidedP {
    /// `None` exactly when `side == Side::None`.
    pub p: Option<f64>,
    pub side: Side,
}

/// One-sided P value and the side it refers to.
///
/// With `F(x | theta)` the sampling cdf of the estimator: when
/// `F(estimate | theta0 - eps) <= 0.5` the P value is that cdf; otherwise
/// when `F(estimate | theta0 + eps) >= 0.5` it is `1 - F(estimate | theta0 + eps)`.
pub fn one_sided_p(lik: &NormalLikelihood, interval: &SpecialInterval) -> OneSidedP {
    let z_lower = (lik.estimate() - interval.lower()) / lik.se();
    if std_normal_cdf(z_lower) <= 0.5 {
        return OneSidedP {
            p: Some(std_normal_cdf(z_lower)),
            side: Side::Lower,
        };
    }
    let z_upper = (lik.estimate() - interval.upper()) / lik.se();
    if std_normal_cdf(z_upper) >= 0.5 {
        return OneSidedP {
            p: Some(std_normal_sf(z_upper)),
            side: Side::Upper,
        };
    }
    OneSidedP {
        p: None,
        side: Side::None,
    }
}

/// Far-side over near-side mass of the outside-conditional flat posterior.
fn lambda(lik: &NormalLikelihood, interval: &SpecialInterval, side: Side) -> Result<f64> {
    let [below, _, above] = flat_masses(lik, interval);
    match side {
        Side::Lower => Ok(above / below),
        Side::Upper => Ok(below / above),
        Side::None => Err(Error::NoOneSidedTest),
    }
}

/// Smallest assignable probability `lambda / (1 + lambda)` for the one-sided
/// null event; below it the interval probability would be negative.
pub fn gamma_floor(lik: &NormalLikelihood, interval: &SpecialInterval) -> Result<f64> {
    let side = one_sided_p(lik, interval).side;
    let l = lambda(lik, interval, side)?;
    Ok(l / (1.0 + l))
}

/// Hybrid method on a one-sided P value. `gamma` is the post-data probability
/// the analyst assigns to the null event of the applicable one-sided test
/// (`theta >= theta0 - eps` on the lower side, `theta <= theta0 + eps` on the
/// upper side). The interval receives `gamma - lambda (1 - gamma)`.
pub fn p_hybrid(
    lik: &NormalLikelihood,
    interval: &SpecialInterval,
    gamma: f64,
) -> Result<MethodResult> {
    if !(0.0..=1.0).contains(&gamma) {
        return Err(Error::ProbabilityOutOfRange(gamma));
    }
    let test = one_sided_p(lik, interval);
    let l = lambda(lik, interval, test.side)?;
    let floor = l / (1.0 + l);
    if gamma < floor {
        return Err(Error::BelowFloor { gamma, floor });
    }
    let far = l * (1.0 - gamma);
    let inside = (gamma - far).max(0.0);
    let weights = match test.side {
        Side::Lower => [1.0 - gamma, inside, far],
        _ => [far, inside, 1.0 - gamma],
    };
    let mixture = PosteriorMixture::from_likelihood(lik, interval, weights)?;
    Ok(MethodResult {
        method: Method::PHybrid,
        hyper: Some(gamma),
        interval_prob: inside,
        prob_ge_lower: 1.0 - weights[0],
        mixture,
        diagnostics: Diagnostics {
            significance: test.p,
            side: Some(test.side),
            lambda: Some(l),
            gamma_floor: Some(floor),
            ..Diagnostics::default()
        },
    })
}

/// Fallback when neither one-sided test applies: the interval keeps its prior
/// probability and the remainder is split like the outside posterior.
pub fn prior_carryover(
    lik: &NormalLikelihood,
    interval: &SpecialInterval,
    prior: f64,
) -> Result<MethodResult> {
    if !(0.0..=1.0).contains(&prior) {
        return Err(Error::ProbabilityOutOfRange(prior));
    }
    let mixture = split_outside(lik, interval, prior)?;
    Ok(MethodResult {
        method: Method::PHybrid,
        hyper: Some(prior),
        interval_prob: prior,
        prob_ge_lower: 1.0 - mixture.weights()[0],
        mixture,
        diagnostics: Diagnostics {
            side: Some(one_sided_p(lik, interval).side),
            ..Diagnostics::default()
        },
    })
}

/// Q value for the null `theta = mu_star`: the probability, under
/// `N(mu_star, se^2)`, of an estimate at least as far from `theta0` as the
/// observed one. At `mu_star = theta0` this is the two-sided P value.
pub fn q_value(lik: &NormalLikelihood, interval: &SpecialInterval, mu_star: f64) -> f64 {
    let d = (lik.estimate() - interval.theta0()).abs();
    let se = lik.se();
    let t0 = interval.theta0();
    std_normal_cdf((t0 - d - mu_star) / se) + std_normal_sf((t0 + d - mu_star) / se)
}

/// Hybrid method on the Q value: the analyst assigns `beta` to the interval.
pub fn q_hybrid(
    lik: &NormalLikelihood,
    interval: &SpecialInterval,
    beta: f64,
) -> Result<MethodResult> {
    if !(0.0..=1.0).contains(&beta) {
        return Err(Error::ProbabilityOutOfRange(beta));
    }
    let mixture = split_outside(lik, interval, beta)?;
    Ok(MethodResult {
        method: Method::QHybrid,
        hyper: Some(beta),
        interval_prob: beta,
        prob_ge_lower: 1.0 - mixture.weights()[0],
        mixture,
        diagnostics: Diagnostics {
            significance: Some(q_value(lik, interval, interval.upper())),
            ..Diagnostics::default()
        },
    })
}
