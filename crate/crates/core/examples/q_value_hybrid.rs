//! Q values and the Q value hybrid.
//!
//! cargo run --example q_value_hybrid

use specialval::cli::data::load_records;
use specialval::effects::likelihood;
use specialval::inference::{q_hybrid, q_value};
use specialval::SpecialInterval;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let interval = SpecialInterval::new(0.0, 0.1)?;
    let point = SpecialInterval::new(0.0, 0.0)?;
    for rec in load_records(None)? {
        let lik = likelihood(&rec.table()?)?;
        let q = q_value(&lik, &interval, interval.upper());
        let two_sided_p = q_value(&lik, &point, 0.0);
        println!(
            "{:<12} Q = {q:.4}  two-sided P = {two_sided_p:.4}",
            rec.label()
        );
        for beta in [0.05, 0.2, 0.5] {
            let r = q_hybrid(&lik, &interval, beta)?;
            let (lo, hi) = r.central_interval(0.95)?;
            println!(
                "    beta {beta:.2}  P(>= -0.1) {:.4}  OR ({:.3}, {:.3})",
                r.prob_ge_lower,
                lo.exp(),
                hi.exp()
            );
        }
    }
    Ok(())
}
