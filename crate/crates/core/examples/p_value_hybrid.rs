//! One-sided P value hybrid: the analyst assigns a probability to the
//! one-sided null event and the interval probability follows.
//!
//! cargo run --example p_value_hybrid

use specialval::inference::{gamma_floor, one_sided_p, p_hybrid, prior_carryover};
use specialval::{Error, NormalLikelihood, SpecialInterval};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let interval = SpecialInterval::new(0.0, 0.1)?;
    let lik = NormalLikelihood::new(-1.18335, 0.419563)?;

    let p = one_sided_p(&lik, &interval);
    let floor = gamma_floor(&lik, &interval)?;
    println!(
        "one-sided P = {:.4} ({:?} side), floor = {floor:.5}",
        p.p.unwrap_or(f64::NAN),
        p.side
    );

    for gamma in [0.05, 0.02, 0.01, 0.0005] {
        match p_hybrid(&lik, &interval, gamma) {
            Ok(r) => {
                let (lo, hi) = r.central_interval(0.95)?;
                println!(
                    "gamma {gamma:<6} P(in I) {:.4}  OR ({:.3}, {:.3})",
                    r.interval_prob,
                    lo.exp(),
                    hi.exp()
                );
            }
            Err(Error::BelowFloor { floor, .. }) => {
                println!("gamma {gamma:<6} rejected: below floor {floor:.5}")
            }
            Err(e) => return Err(e.into()),
        }
    }

    // An estimate inside the interval gives no one-sided test.
    let centred = NormalLikelihood::new(0.02, 0.3)?;
    assert!(matches!(
        p_hybrid(&centred, &interval, 0.5),
        Err(Error::NoOneSidedTest)
    ));
    let r = prior_carryover(&centred, &interval, 0.5)?;
    println!(
        "no one-sided test; prior 0.5 carried over, P(>= -0.1) {:.4}",
        r.prob_ge_lower
    );
    Ok(())
}
