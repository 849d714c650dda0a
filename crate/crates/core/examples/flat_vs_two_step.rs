//! Flat-prior posterior against the two-step lower bound on one study.
//!
//! cargo run --example flat_vs_two_step

use specialval::effects::{likelihood, TwoByTwoTable};
use specialval::inference::{flat_posterior, two_step};
use specialval::SpecialInterval;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let lik = likelihood(&TwoByTwoTable::new(74, 10, 74, 25)?)?;
    let interval = SpecialInterval::new(0.0, 0.1)?;

    let flat = flat_posterior(&lik, &interval);
    let (lo, hi) = flat.central_interval(0.95)?;
    println!(
        "flat       P(in I) {:.4}  P(>= -0.1) {:.4}  OR ({:.3}, {:.3})",
        flat.interval_prob,
        flat.prob_ge_lower,
        lo.exp(),
        hi.exp()
    );

    for alpha in [0.2, 0.5, 0.8, 0.95] {
        let r = two_step(&lik, &interval, alpha)?;
        let (lo, hi) = r.central_interval(0.95)?;
        println!(
            "alpha {alpha:.2} P(in I) {:.4}  P(>= -0.1) {:.4}  OR ({:.3}, {:.3})  c* {:.3}",
            r.interval_prob,
            r.prob_ge_lower,
            lo.exp(),
            hi.exp(),
            r.diagnostics.c_star.unwrap_or(f64::NAN)
        );
    }
    Ok(())
}
