//! The shell search behind the two-step lower bound.
//!
//! Prints the mean likelihood over symmetric uniform shells as the
//! half-width grows, the optimum found by `optimize_c`, and checks that the
//! optimal shell stays within one standard error beyond the estimate when
//! the estimate is less than 2.47 standard errors from the null (point
//! interval).
//!
//! cargo run --example sensitivity_bound

use specialval::inference::{optimize_c, shell_mean_likelihood};
use specialval::{NormalLikelihood, SpecialInterval};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let lik = NormalLikelihood::new(-1.18335, 0.419563)?;
    let interval = SpecialInterval::new(0.0, 0.1)?;
    for c in [0.2, 0.5, 1.0, 1.5, 2.0, 3.0, 5.0] {
        println!(
            "c = {c:.1}  mean likelihood {:.5}",
            shell_mean_likelihood(&lik, &interval, c)?
        );
    }
    let opt = optimize_c(&lik, &interval);
    println!(
        "optimum c* = {:.4}, mean likelihood {:.5}",
        opt.c_star, opt.m_bar_star
    );

    let point = SpecialInterval::new(0.0, 0.0)?;
    for z in [0.5, 1.0, 1.5, 2.0, 2.4, 2.6, 3.0] {
        let lik = NormalLikelihood::new(z, 1.0)?;
        let c = optimize_c(&lik, &point).c_star;
        println!("z = {z:.1}  c* = {c:.4}  within |z| + 1: {}", c <= z + 1.0);
    }
    Ok(())
}
