//! Compare the two-step bound with an exhaustive search over shell priors.
//!
//! cargo run --release --example brute_force_oracle

use specialval::inference::two_step;
use specialval::oracle::gnis_bruteforce_lower;
use specialval::{NormalLikelihood, SpecialInterval};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let interval = SpecialInterval::new(0.0, 0.1)?;
    for (est, se) in [
        (-1.18335, 0.419563),
        (-1.16761, 0.550083),
        (-0.44510, 0.31664),
        (0.05, 0.2),
    ] {
        let lik = NormalLikelihood::new(est, se)?;
        let fast = two_step(&lik, &interval, 0.5)?.interval_prob;
        let slow = gnis_bruteforce_lower(&lik, &interval, 0.5, 400, 50, 7)?;
        println!(
            "estimate {est:+.3} se {se:.3}: two-step {fast:.6}  brute force {slow:.6}  gap {:+.2e}",
            slow - fast
        );
    }
    Ok(())
}
