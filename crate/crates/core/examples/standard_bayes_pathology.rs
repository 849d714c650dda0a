//! A fixed prior with a normal density outside the interval: as the normal
//! spreads out, the posterior probability of the interval climbs towards
//! one whatever the data. The quadrature oracle confirms the closed form.
//!
//! cargo run --example standard_bayes_pathology

use specialval::inference::standard_bayes_normal_g;
use specialval::oracle::{quadrature_posterior, QuadraturePrior};
use specialval::{NormalLikelihood, SpecialInterval};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let lik = NormalLikelihood::new(-1.18335, 0.419563)?;
    let interval = SpecialInterval::new(0.0, 0.1)?;
    for g_sd in [0.5, 1.0, 10.0, 100.0, 1e4, 1e6] {
        let p = standard_bayes_normal_g(&lik, &interval, 0.5, g_sd)?;
        let check = if g_sd <= 100.0 {
            let prior = QuadraturePrior::interval_plus_normal(interval, 0.5, g_sd)?;
            format!(
                "  quadrature {:.6}",
                quadrature_posterior(&lik, &prior, &interval)?
            )
        } else {
            String::new()
        };
        println!("g_sd {g_sd:>9}  P(in I) {p:.6}{check}");
    }
    Ok(())
}
