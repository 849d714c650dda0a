//! Log odds ratios from two-arm trial counts, with the Woolf variance.

use serde::{Deserialize, Serialize};

use crate::dist::{std_normal_quantile, NormalLikelihood};
use crate::error::{check_open_probability, Error, Result};

/// Patients and events in the treatment and control arms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TwoByTwoTable {
    pub n_t: u64,
    pub e_t: u64,
    pub n_c: u64,
    pub e_c: u64,
}

impl TwoByTwoTable {
    /// All four cells (events and non-events in each arm) must be positive.
    /// No continuity correction is applied.
    pub fn new(n_t: u64, e_t: u64, n_c: u64, e_c: u64) -> Result<Self> {
        let t = Self { n_t, e_t, n_c, e_c };
        t.validate()?;
        Ok(t)
    }

    pub fn validate(&self) -> Result<()> {
        let arm = |name: &str, n: u64, e: u64| {
            if e == 0 || e >= n {
                Err(Error::DegenerateTable(format!(
                    "{name} arm has {e} events out of {n}; every cell must be positive"
                )))
            } else {
                Ok(())
            }
        };
        arm("treatment", self.n_t, self.e_t)?;
        arm("control", self.n_c, self.e_c)
    }

    /// `[e_t, n_t - e_t, e_c, n_c - e_c]` as floats.
    fn cells(&self) -> Result<[f64; 4]> {
        self.validate()?;
        Ok([
            self.e_t as f64,
            (self.n_t - self.e_t) as f64,
            self.e_c as f64,
            (self.n_c - self.e_c) as f64,
        ])
    }

    /// Treatment and control arms exchanged.
    pub fn swapped(&self) -> Self {
        Self {
            n_t: self.n_c,
            e_t: self.e_c,
            n_c: self.n_t,
            e_c: self.e_t,
        }
    }
}

pub fn log_odds_ratio(t: &TwoByTwoTable) -> Result<f64> {
    let [a, b, c, d] = t.cells()?;
    Ok((a / b).ln() - (c / d).ln())
}

pub fn woolf_se(t: &TwoByTwoTable) -> Result<f64> {
    let cells = t.cells()?;
    Ok(cells.iter().map(|x| x.recip()).sum::<f64>().sqrt())
}

/// Normal approximation to the log-odds-ratio likelihood.
pub fn likelihood(t: &TwoByTwoTable) -> Result<NormalLikelihood> {
    NormalLikelihood::new(log_odds_ratio(t)?, woolf_se(t)?)
}

/// Two-sided Wald interval built on the log scale and returned on the odds
/// ratio scale.
pub fn wald_ci(lik: &NormalLikelihood, level: f64) -> Result<(f64, f64)> {
    check_open_probability(level)?;
    let z = std_normal_quantile(1.0 - 0.5 * (1.0 - level))?;
    Ok((
        (lik.estimate() - z * lik.se()).exp(),
        (lik.estimate() + z * lik.se()).exp(),
    ))
}
