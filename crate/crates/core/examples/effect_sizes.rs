//! Odds ratios and Wald intervals for the bundled studies.
//!
//! cargo run --example effect_sizes

use specialval::cli::data::load_records;
use specialval::effects::{likelihood, wald_ci};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for rec in load_records(None)? {
        let lik = likelihood(&rec.table()?)?;
        let (lo, hi) = wald_ci(&lik, 0.95)?;
        println!(
            "{:<12} log OR {:+.4} (se {:.4})  OR {:.3}  95% CI ({:.3}, {:.3})",
            rec.label(),
            lik.estimate(),
            lik.se(),
            lik.estimate().exp(),
            lo,
            hi
        );
    }
    Ok(())
}
