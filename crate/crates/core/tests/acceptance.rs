//! Exit criteria. Each test prints one PASS/FAIL line per check and fails if
//! any check fails. Run with `cargo test --test acceptance -- --nocapture`
//! to see the lines.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use specialval::cli::data::{find, load_records};
use specialval::dist::{PosteriorMixture, SpecialInterval};
use specialval::effects::{likelihood, wald_ci};
use specialval::inference::{
    flat_posterior, gamma_floor, one_sided_p, optimize_c, p_hybrid, q_hybrid, q_value,
    standard_bayes_normal_g, two_step, MethodResult,
};
use specialval::meta::{dersimonian_laird, StudyEffect};
use specialval::oracle::{dersimonian_laird_oracle, gnis_bruteforce_lower};
use specialval::NormalLikelihood;

struct Report {
    criterion: u8,
    failures: Vec<String>,
}

impl Report {
    fn new(criterion: u8) -> Self {
        Self {
            criterion,
            failures: vec![],
        }
    }

    fn check(&mut self, what: &str, got: f64, want: f64, tol: f64) {
        let ok = (got - want).abs() <= tol;
        let line = format!("{what}: got {got:.6}, want {want} +/- {tol}");
        self.record(ok, line);
    }

    fn holds(&mut self, what: &str, ok: bool) {
        self.record(ok, what.to_string());
    }

    fn record(&mut self, ok: bool, line: String) {
        println!(
            "{} criterion {}: {line}",
            if ok { "PASS" } else { "FAIL" },
            self.criterion
        );
        if !ok {
            self.failures.push(line);
        }
    }

    fn finish(self) {
        assert!(
            self.failures.is_empty(),
            "criterion {} failed:\n{}",
            self.criterion,
            self.failures.join("\n")
        );
    }
}

fn dataset(study: &str, outcome: &str) -> NormalLikelihood {
    let records = load_records(None).unwrap();
    likelihood(&find(&records, study, outcome).unwrap().table().unwrap()).unwrap()
}

fn acs() -> NormalLikelihood {
    dataset("CLARIFY", "ACS")
}
fn mi() -> NormalLikelihood {
    dataset("CLARIFY", "MI")
}
fn stamina() -> NormalLikelihood {
    dataset("STAMINA", "ACS")
}

fn interval() -> SpecialInterval {
    SpecialInterval::new(0.0, 0.1).unwrap()
}

fn or_interval(r: &MethodResult) -> (f64, f64) {
    let (lo, hi) = r.central_interval(0.95).unwrap();
    (lo.exp(), hi.exp())
}

fn check_or_interval(rep: &mut Report, what: &str, got: (f64, f64), want: (f64, f64), tol: f64) {
    rep.check(&format!("{what} lower"), got.0, want.0, tol);
    rep.check(&format!("{what} upper"), got.1, want.1, tol);
}

#[test]
fn criterion_1_effect_pipeline() {
    let mut rep = Report::new(1);
    for (name, lik, or, ci) in [
        ("CLARIFY ACS", acs(), 0.306, (0.135, 0.697)),
        ("CLARIFY MI", mi(), 0.311, (0.106, 0.913)),
        ("STAMINA ACS", stamina(), 0.640, (0.344, 1.192)),
    ] {
        rep.check(
            &format!("{name} odds ratio"),
            lik.estimate().exp(),
            or,
            0.002,
        );
        check_or_interval(
            &mut rep,
            &format!("{name} 95% CI"),
            wald_ci(&lik, 0.95).unwrap(),
            ci,
            0.002,
        );
    }
    rep.finish();
}

#[test]
fn criterion_2_significance_measures() {
    let mut rep = Report::new(2);
    let i = interval();
    for (name, lik, p, q) in [
        ("CLARIFY ACS", acs(), 0.0049, 0.0060),
        ("CLARIFY MI", mi(), 0.0259, 0.0365),
        ("STAMINA ACS", stamina(), 0.1379, 0.1805),
    ] {
        rep.check(
            &format!("{name} one-sided P"),
            one_sided_p(&lik, &i).p.unwrap_or(f64::NAN),
            p,
            0.0002,
        );
        rep.check(
            &format!("{name} Q value"),
            q_value(&lik, &i, i.upper()),
            q,
            0.0002,
        );
    }
    rep.finish();
}

#[test]
fn criterion_3_two_step() {
    let mut rep = Report::new(3);
    let i = interval();
    for (name, lik, rows) in [
        (
            "CLARIFY ACS",
            acs(),
            [(0.5, 0.064, (0.136, 0.992)), (0.8, 0.214, (0.141, 1.060))],
        ),
        (
            "CLARIFY MI",
            mi(),
            [(0.5, 0.232, (0.112, 1.082)), (0.8, 0.547, (0.128, 1.093))],
        ),
        (
            "STAMINA ACS",
            stamina(),
            [(0.5, 0.446, (0.369, 1.112)), (0.8, 0.763, (0.423, 1.099))],
        ),
    ] {
        for (alpha, prob, ci) in rows {
            let r = two_step(&lik, &i, alpha).unwrap();
            rep.check(
                &format!("{name} alpha={alpha} interval prob"),
                r.interval_prob,
                prob,
                0.002,
            );
            check_or_interval(
                &mut rep,
                &format!("{name} alpha={alpha} OR interval"),
                or_interval(&r),
                ci,
                0.006,
            );
        }
    }
    rep.finish();
}

#[test]
fn criterion_4_p_hybrid() {
    let mut rep = Report::new(4);
    let (lik, i) = (acs(), interval());
    for (gamma, prob, ci) in [
        (0.05, 0.049, (0.136, 0.971)),
        (0.02, 0.019, (0.135, 0.813)),
        (0.01, 0.009, (0.135, 0.725)),
    ] {
        let r = p_hybrid(&lik, &i, gamma).unwrap();
        rep.check(
            &format!("gamma={gamma} interval prob"),
            r.interval_prob,
            prob,
            0.001,
        );
        check_or_interval(
            &mut rep,
            &format!("gamma={gamma} OR interval"),
            or_interval(&r),
            ci,
            0.006,
        );
    }
    // The published cell for gamma = 0.01 reads 0.099; the computed value
    // is 0.009 and 0.099 would exceed gamma itself.
    let r = p_hybrid(&lik, &i, 0.01).unwrap();
    rep.holds(
        &format!(
            "gamma=0.01 cell is 0.009 not the printed 0.099 (computed {:.4})",
            r.interval_prob
        ),
        (r.interval_prob - 0.009).abs() <= 0.001 && (r.interval_prob - 0.099).abs() > 0.05,
    );
    rep.check("gamma floor", gamma_floor(&lik, &i).unwrap(), 0.001, 0.0005);
    rep.finish();
}

#[test]
fn criterion_5_q_hybrid_table_1() {
    let mut rep = Report::new(5);
    let (lik, i) = (acs(), interval());
    for (beta, ge, ci) in [(0.05, 0.051, (0.136, 0.973)), (0.01, 0.011, (0.135, 0.732))] {
        let r = q_hybrid(&lik, &i, beta).unwrap();
        rep.check(
            &format!("ACS beta={beta} prob >= lower"),
            r.prob_ge_lower,
            ge,
            0.001,
        );
        check_or_interval(
            &mut rep,
            &format!("ACS beta={beta} OR interval"),
            or_interval(&r),
            ci,
            0.006,
        );
    }
    rep.finish();
}

#[test]
fn criterion_5_q_hybrid_table_3_intervals() {
    let mut rep = Report::new(5);
    let (lik, i) = (stamina(), interval());
    for (beta, ci) in [(0.5, (0.375, 1.104)), (0.8, (0.437, 1.098))] {
        let r = q_hybrid(&lik, &i, beta).unwrap();
        check_or_interval(
            &mut rep,
            &format!("STAMINA beta={beta} OR interval"),
            or_interval(&r),
            ci,
            0.006,
        );
    }
    rep.finish();
}

/// Expected to fail: the target values exceed what the mixture that yields
/// the matching intervals assigns to `theta >= -0.1` (see README).
#[test]
fn criterion_5_q_hybrid_table_3_prob_ge_lower() {
    let mut rep = Report::new(5);
    let (lik, i) = (stamina(), interval());
    for (beta, ge) in [(0.5, 0.543), (0.8, 0.843)] {
        let r = q_hybrid(&lik, &i, beta).unwrap();
        rep.check(
            &format!("STAMINA beta={beta} prob >= lower"),
            r.prob_ge_lower,
            ge,
            0.002,
        );
    }
    rep.finish();
}

#[test]
fn criterion_6_flat_rows() {
    let mut rep = Report::new(6);
    let i = interval();
    for (name, lik, inside, ge) in [
        ("CLARIFY ACS", acs(), 0.004, 0.005),
        ("CLARIFY MI", mi(), 0.0154, 0.026),
        ("STAMINA ACS", stamina(), 0.095, 0.138),
    ] {
        let r = flat_posterior(&lik, &i);
        rep.check(
            &format!("{name} flat interval prob"),
            r.interval_prob,
            inside,
            0.002,
        );
        rep.check(
            &format!("{name} flat prob >= lower"),
            r.prob_ge_lower,
            ge,
            0.002,
        );
    }
    rep.finish();
}

fn random_likelihood(rng: &mut ChaCha8Rng) -> NormalLikelihood {
    NormalLikelihood::new(rng.random_range(-3.0..3.0), rng.random_range(0.05..1.5)).unwrap()
}

#[test]
fn criterion_7_property_suites() {
    let mut rep = Report::new(7);
    let mut rng = ChaCha8Rng::seed_from_u64(20_240_607);

    // Q value symmetry and ordering.
    let (mut sym_ok, mut order_ok) = (true, true);
    for _ in 0..100 {
        let se = rng.random_range(0.05..1.5);
        let eps = rng.random_range(0.0..2.0) * se;
        let theta0 = rng.random_range(-1.0..1.0);
        let d = rng.random_range(0.05..8.0) * se * if rng.random::<bool>() { 1.0 } else { -1.0 };
        let lik = NormalLikelihood::new(theta0 + d, se).unwrap();
        let i = SpecialInterval::new(theta0, eps).unwrap();
        let at_edge = q_value(&lik, &i, i.upper());
        sym_ok &= (at_edge - q_value(&lik, &i, i.lower())).abs() <= 1e-12;
        let inside = theta0 + rng.random_range(-1.0..=1.0) * eps;
        order_ok &= q_value(&lik, &i, inside) <= at_edge;
        let side = if rng.random::<bool>() { 1.0 } else { -1.0 };
        let outside = theta0 + side * (eps + rng.random_range(0.01..3.0) * se);
        order_ok &= q_value(&lik, &i, outside) > at_edge;
    }
    rep.holds(
        "Q value symmetric at both interval ends (1e-12, 100 likelihoods)",
        sym_ok,
    );
    rep.holds(
        "Q value ordering inside / strictly outside (100 likelihoods)",
        order_ok,
    );

    // Brute-force shell search never undercuts the two-step bound.
    let mut worst = f64::INFINITY;
    for k in 0..20 {
        let lik = random_likelihood(&mut rng);
        let i = SpecialInterval::new(0.0, rng.random_range(0.01..0.3)).unwrap();
        let alpha = rng.random_range(0.05..0.95);
        let fast = two_step(&lik, &i, alpha).unwrap().interval_prob;
        let slow = gnis_bruteforce_lower(&lik, &i, alpha, 128, 20, k).unwrap();
        worst = worst.min(slow - fast);
    }
    rep.holds(
        &format!("brute-force minus two-step >= -1e-4 over 20 instances (worst {worst:+.2e})"),
        worst >= -1e-4,
    );

    // Diffuse normal prior outside the interval drives the interval probability to one.
    let (lik, i) = (acs(), interval());
    let seq: Vec<f64> = (0..=20)
        .map(|k| standard_bayes_normal_g(&lik, &i, 0.5, 2f64.powi(k)).unwrap())
        .collect();
    rep.holds(
        &format!("normal-prior interval prob strictly increasing for g_sd = 1, 2, ..., 2^20 (last {:.6})", seq[20]),
        seq.windows(2).all(|w| w[1] > w[0]) && seq[20] > 0.99,
    );

    // Support containment at a point interval.
    let point = SpecialInterval::new(0.0, 0.0).unwrap();
    let mut contained = true;
    for _ in 0..50 {
        let se = rng.random_range(0.1..2.0);
        let z = rng.random_range(-2.47..2.47);
        let lik = NormalLikelihood::new(z * se, se).unwrap();
        contained &= optimize_c(&lik, &point).c_star <= (z * se).abs() + se;
    }
    rep.holds(
        "c* <= |estimate| + se when |estimate| < 2.47 se (50 draws)",
        contained,
    );

    // Mixture cdf/quantile roundtrip.
    let mut worst_roundtrip: f64 = 0.0;
    for _ in 0..200 {
        let lik =
            NormalLikelihood::new(rng.random_range(-3.0..3.0), rng.random_range(0.1..1.5)).unwrap();
        let i = SpecialInterval::new(0.0, rng.random_range(0.01..0.5)).unwrap();
        let raw: [f64; 3] = [rng.random(), rng.random(), rng.random()];
        let s: f64 = raw.iter().sum();
        let w = [raw[0] / s, raw[1] / s, 1.0 - raw[0] / s - raw[1] / s];
        let m = PosteriorMixture::from_likelihood(&lik, &i, w).unwrap();
        let p = rng.random_range(0.001..0.999);
        worst_roundtrip = worst_roundtrip.max((m.cdf(m.quantile(p).unwrap()) - p).abs());
    }
    rep.holds(
        &format!("cdf(quantile(p)) = p within 1e-8 (worst {worst_roundtrip:.1e})"),
        worst_roundtrip <= 1e-8,
    );

    // Random-effects pooling against the oracle, and under permutation.
    let mut dl_worst: f64 = 0.0;
    let mut perm_worst: f64 = 0.0;
    for _ in 0..50 {
        let k = rng.random_range(1..8);
        let pairs: Vec<(f64, f64)> = (0..k)
            .map(|_| (rng.random_range(-2.0..2.0), rng.random_range(0.1..1.0)))
            .collect();
        let studies: Vec<StudyEffect> = pairs
            .iter()
            .map(|(y, s)| StudyEffect::new("s", *y, *s).unwrap())
            .collect();
        let a = dersimonian_laird(&studies, 0.95).unwrap();
        let o = dersimonian_laird_oracle(&pairs).unwrap();
        dl_worst = dl_worst
            .max((a.pooled - o.pooled).abs())
            .max((a.pooled_se - o.pooled_se).abs())
            .max((a.tau2 - o.tau2).abs())
            .max((a.q_stat - o.q_stat).abs());
        let mut rev = studies.clone();
        rev.reverse();
        let b = dersimonian_laird(&rev, 0.95).unwrap();
        perm_worst = perm_worst
            .max((a.pooled - b.pooled).abs())
            .max((a.tau2 - b.tau2).abs());
    }
    rep.holds(
        &format!("pooling matches the step-by-step oracle within 1e-10 (worst {dl_worst:.1e})"),
        dl_worst <= 1e-10,
    );
    rep.holds(
        &format!("pooling invariant to study order (worst {perm_worst:.1e})"),
        perm_worst <= 1e-10,
    );
    rep.finish();
}

#[test]
fn criterion_8_forest_combined_row_not_reproducible() {
    let mut rep = Report::new(8);
    println!(
        "NOTE criterion 8: the published combined row (0.890, 1.100) pools studies whose counts are not \
         available, so it is not recomputed; pooling is verified against the oracle instead."
    );
    let studies: Vec<StudyEffect> = load_records(None)
        .unwrap()
        .iter()
        .map(|r| StudyEffect::from_likelihood(r.label(), &likelihood(&r.table().unwrap()).unwrap()))
        .collect();
    let pairs: Vec<(f64, f64)> = studies.iter().map(|s| (s.estimate, s.se)).collect();
    let a = dersimonian_laird(&studies, 0.95).unwrap();
    let o = dersimonian_laird_oracle(&pairs).unwrap();
    rep.check(
        "bundled three-study pooled log OR against oracle",
        a.pooled,
        o.pooled,
        1e-10,
    );
    rep.check(
        "bundled three-study tau2 against oracle",
        a.tau2,
        o.tau2,
        1e-10,
    );
    rep.finish();
}
