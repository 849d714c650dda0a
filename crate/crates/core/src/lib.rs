//! Inference about a scalar parameter when a narrow interval around a special
//! value carries substantial prior belief.
//!
//! The crate works with a normal approximation to the likelihood (an estimate
//! and its standard error) and a [`SpecialInterval`] `[theta0 - eps, theta0 + eps]`.
//! It provides:
//!
//! * the flat-prior posterior and the ordinary Bayesian posterior with a normal
//!   prior outside the interval ([`inference::flat_posterior`],
//!   [`inference::standard_bayes_normal_g`]);
//! * the two-step method, whose interval probability is the lower limit over
//!   all symmetric non-increasing priors outside the interval
//!   ([`inference::two_step`]);
//! * hybrid methods driven by a one-sided P value or a Q value
//!   ([`inference::p_hybrid`], [`inference::q_hybrid`]);
//! * log odds ratios from 2x2 tables ([`effects`]) and DerSimonian-Laird
//!   pooling ([`meta`]);
//! * brute-force checkers for the above ([`oracle`]);
//! * the command-line front end used by the `specialval` binary ([`cli`]).
//!
//! ```
//! use specialval::effects::{likelihood, TwoByTwoTable};
//! use specialval::inference::two_step;
//! use specialval::SpecialInterval;
//!
//! let table = TwoByTwoTable::new(74, 10, 74, 25).unwrap();
//! let lik = likelihood(&table).unwrap();
//! let interval = SpecialInterval::new(0.0, 0.1).unwrap();
//! let r = two_step(&lik, &interval, 0.5).unwrap();
//! assert!((r.interval_prob - 0.064).abs() < 1e-3);
//! ```

pub mod cli;
pub mod dist;
pub mod effects;
pub mod error;
pub mod inference;
pub mod meta;
pub mod optimize;
pub mod oracle;

pub use dist::{NormalLikelihood, PosteriorMixture, SpecialInterval, TruncatedNormal};
pub use error::{Error, Result};
pub use inference::{Method, MethodResult};
