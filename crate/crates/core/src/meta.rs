//! DerSimonian-Laird random-effects pooling of study log odds ratios.

use serde::Serialize;

use crate::dist::NormalLikelihood;
use crate::effects::wald_ci;
use crate::error::{check_open_probability, Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StudyEffect {
    pub label: String,
    /// Log odds ratio.
    pub estimate: f64,
    pub se: f64,
}

impl StudyEffect {
    pub fn new(label: impl Into<String>, estimate: f64, se: f64) -> Result<Self> {
        if !(se > 0.0 && se.is_finite()) || !estimate.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "study needs a finite estimate and positive se (got {estimate}, {se})"
            )));
        }
        Ok(Self {
            label: label.into(),
            estimate,
            se,
        })
    }

    pub fn from_likelihood(label: impl Into<String>, lik: &NormalLikelihood) -> Self {
        Self {
            label: label.into(),
            estimate: lik.estimate(),
            se: lik.se(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RandomEffectsResult {
    /// Pooled log odds ratio.
    pub pooled: f64,
    pub pooled_se: f64,
    pub tau2: f64,
    pub q_stat: f64,
    /// Wald interval on the odds ratio scale.
    pub ci: (f64, f64),
}

pub fn dersimonian_laird(studies: &[StudyEffect], level: f64) -> Result<RandomEffectsResult> {
    if studies.is_empty() {
        return Err(Error::Empty(
            "random-effects pooling needs at least one study".into(),
        ));
    }
    check_open_probability(level)?;

    let w: Vec<f64> = studies.iter().map(|s| s.se.powi(-2)).collect();
    let sum_w: f64 = w.iter().sum();
    let fixed = studies
        .iter()
        .zip(&w)
        .map(|(s, w)| w * s.estimate)
        .sum::<f64>()
        / sum_w;
    let q_stat: f64 = studies
        .iter()
        .zip(&w)
        .map(|(s, w)| w * (s.estimate - fixed).powi(2))
        .sum();

    let df = (studies.len() - 1) as f64;
    let tau2 = if studies.len() == 1 || q_stat <= df {
        0.0
    } else {
        let scale = sum_w - w.iter().map(|w| w * w).sum::<f64>() / sum_w;
        ((q_stat - df) / scale).max(0.0)
    };

    let w_star: Vec<f64> = studies.iter().map(|s| 1.0 / (s.se * s.se + tau2)).collect();
    let sum_w_star: f64 = w_star.iter().sum();
    let pooled = studies
        .iter()
        .zip(&w_star)
        .map(|(s, w)| w * s.estimate)
        .sum::<f64>()
        / sum_w_star;
    let pooled_se = sum_w_star.sqrt().recip();

    let ci = wald_ci(&NormalLikelihood::new(pooled, pooled_se)?, level)?;
    Ok(RandomEffectsResult {
        pooled,
        pooled_se,
        tau2,
        q_stat,
        ci,
    })
}

/// One line of a forest plot, on the odds ratio scale.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ForestRow {
    pub label: String,
    pub or: f64,
    pub lo: f64,
    pub hi: f64,
    pub combined: bool,
}

/// Study rows in input order followed by a row labelled `Combined`.
pub fn forest_rows(
    studies: &[StudyEffect],
    combined: &RandomEffectsResult,
    level: f64,
) -> Result<Vec<ForestRow>> {
    let mut rows = Vec::with_capacity(studies.len() + 1);
    for s in studies {
        let (lo, hi) = wald_ci(&NormalLikelihood::new(s.estimate, s.se)?, level)?;
        rows.push(ForestRow {
            label: s.label.clone(),
            or: s.estimate.exp(),
            lo,
            hi,
            combined: false,
        });
    }
    rows.push(ForestRow {
        label: "Combined".into(),
        or: combined.pooled.exp(),
        lo: combined.ci.0,
        hi: combined.ci.1,
        combined: true,
    });
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn study(e: f64, se: f64) -> StudyEffect {
        StudyEffect::new("s", e, se).unwrap()
    }

    #[test]
    fn single_study_passes_through() {
        let s = study(-0.4, 0.3);
        let r = dersimonian_laird(std::slice::from_ref(&s), 0.95).unwrap();
        assert_eq!(r.tau2, 0.0);
        assert!((r.pooled + 0.4).abs() < 1e-15);
        assert!((r.pooled_se - 0.3).abs() < 1e-15);
        let ci = wald_ci(&NormalLikelihood::new(-0.4, 0.3).unwrap(), 0.95).unwrap();
        assert!((r.ci.0 - ci.0).abs() < 1e-14 && (r.ci.1 - ci.1).abs() < 1e-14);
    }

    #[test]
    fn identical_studies() {
        let studies = vec![study(0.25, 0.2); 4];
        let r = dersimonian_laird(&studies, 0.95).unwrap();
        assert_eq!(r.tau2, 0.0);
        assert!((r.pooled - 0.25).abs() < 1e-14);
        assert!((r.pooled_se - 0.1).abs() < 1e-14);
    }

    #[test]
    fn homogeneous_studies_give_fixed_effect_mean() {
        let studies = [study(0.1, 0.3), study(0.12, 0.2), study(0.09, 0.25)];
        let r = dersimonian_laird(&studies, 0.95).unwrap();
        assert_eq!(r.tau2, 0.0);
        let w: Vec<f64> = studies.iter().map(|s| 1.0 / (s.se * s.se)).collect();
        let mean = studies
            .iter()
            .zip(&w)
            .map(|(s, w)| s.estimate * w)
            .sum::<f64>()
            / w.iter().sum::<f64>();
        assert!((r.pooled - mean).abs() < 1e-15);
    }

    #[test]
    fn empty_input_rejected() {
        assert!(matches!(dersimonian_laird(&[], 0.95), Err(Error::Empty(_))));
    }

    #[test]
    fn forest_row_order() {
        let studies = [study(0.0, 0.1), study(0.5, 0.2)];
        let r = dersimonian_laird(&studies, 0.95).unwrap();
        let rows = forest_rows(&studies, &r, 0.95).unwrap();
        assert_eq!(rows.len(), 3);
        assert_eq!(rows[2].label, "Combined");
        assert!(rows[2].combined && !rows[0].combined);
        assert!((rows[1].or - 0.5_f64.exp()).abs() < 1e-15);
    }
}
