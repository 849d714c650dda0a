//! Command-line front end.
//!
//! [`run`] parses arguments, executes one verb and returns the text to print
//! together with the process exit code, so the binary stays a thin shim and
//! the behaviour is testable in-process.
//!
//! Exit codes: 0 success, 2 usage or malformed input, 3 degenerate 2x2
//! table, 4 assigned probability below the p-hybrid floor.

pub mod data;
pub mod render;
pub mod svg;

use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};

use crate::dist::{NormalLikelihood, SpecialInterval};
use crate::effects::likelihood;
use crate::error::Error;
use crate::inference::{
    flat_posterior, gamma_floor, one_sided_p, p_hybrid, prior_carryover, q_hybrid, q_value,
    standard_bayes_normal_g_result, two_step, Side,
};
use crate::meta::{dersimonian_laird, forest_rows, StudyEffect};
use data::{find, load_records};
use render::{Assigned, Format, Row};

#[derive(Debug, Clone, PartialEq)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    pub fn usage(message: impl Into<String>) -> Self {
        Self {
            code: 2,
            message: message.into(),
        }
    }

    fn context(mut self, what: &str) -> Self {
        self.message = format!("{what}: {}", self.message);
        self
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{} (exit {})", self.message, self.code)
    }
}

impl std::error::Error for CliError {}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::DegenerateTable(_) => 3,
            Error::BelowFloor { .. } => 4,
            _ => 2,
        };
        let message = match e {
            Error::BelowFloor { gamma, floor } => format!(
                "gamma {gamma} is below the p-hybrid floor {floor:.3} (exact {floor:.6}); \
                 choose gamma >= {floor:.6}"
            ),
            other => other.to_string(),
        };
        Self { code, message }
    }
}

/// What a CLI invocation produced.
#[derive(Debug, Clone, PartialEq)]
pub struct Output {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

#[derive(Debug, Parser)]
#[command(
    name = "specialval",
    version,
    about = "Post-data inference with a special interval around a null value"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Flat,
    StandardNormalG,
    TwoStep,
    PHybrid,
    QHybrid,
}

#[derive(Debug, clap::Args)]
pub struct IntervalArgs {
    /// Centre of the special interval on the log odds ratio scale.
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub theta0: f64,
    /// Half-width of the special interval.
    #[arg(long, default_value_t = 0.1)]
    pub epsilon: f64,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run one method on one study, one row per sweep value.
    Analyze {
        #[arg(long)]
        study: String,
        #[arg(long)]
        outcome: String,
        /// Study CSV (`study,outcome,n_t,e_t,n_c,e_c`); defaults to the bundled data.
        #[arg(long)]
        input: Option<PathBuf>,
        #[command(flatten)]
        interval: IntervalArgs,
        #[arg(long, value_enum)]
        method: MethodArg,
        /// Prior probabilities of the interval (two-step, standard-normal-g,
        /// and the p-hybrid fallback when no one-sided test applies).
        #[arg(long, value_delimiter = ',')]
        alpha: Vec<f64>,
        /// Assigned probabilities of the one-sided null event (p-hybrid).
        #[arg(long, value_delimiter = ',')]
        gamma: Vec<f64>,
        /// Assigned probabilities of the interval (q-hybrid).
        #[arg(long, value_delimiter = ',')]
        beta: Vec<f64>,
        /// Standard deviation of the normal prior outside the interval (standard-normal-g).
        #[arg(long, default_value_t = 1.0)]
        g_sd: f64,
        #[arg(long, default_value_t = 0.95)]
        level: f64,
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
    },
    /// Recompute one of the three case-study tables from the bundled counts.
    Reproduce {
        #[arg(value_parser = clap::value_parser!(u8).range(1..=3))]
        table: u8,
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
    },
    /// DerSimonian-Laird pooling of every row in the input, with an optional forest plot.
    Meta {
        #[arg(long)]
        input: Option<PathBuf>,
        #[arg(long, default_value_t = 0.95)]
        level: f64,
        #[arg(long)]
        svg: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
    },
    /// Plot the Q value as a function of the null mean.
    Qcurve {
        #[arg(long)]
        study: String,
        #[arg(long)]
        outcome: String,
        #[arg(long)]
        input: Option<PathBuf>,
        #[command(flatten)]
        interval: IntervalArgs,
        #[arg(long)]
        svg: PathBuf,
        /// Number of curve samples.
        #[arg(long, default_value_t = 201)]
        points: usize,
    },
}

/// Parse `args` (including the program name) and execute.
pub fn run<I, T>(args: I) -> Output
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            return if code == 0 {
                Output {
                    code,
                    stdout: text,
                    stderr: String::new(),
                }
            } else {
                Output {
                    code,
                    stdout: String::new(),
                    stderr: text,
                }
            };
        }
    };
    match execute(cli.command) {
        Ok(stdout) => Output {
            code: 0,
            stdout,
            stderr: String::new(),
        },
        Err(e) => Output {
            code: e.code,
            stdout: String::new(),
            stderr: format!("error: {}\n", e.message),
        },
    }
}

fn check_level(level: f64) -> Result<(), CliError> {
    if level > 0.0 && level < 1.0 {
        Ok(())
    } else {
        Err(CliError::usage(format!(
            "--level must be in (0, 1), got {level}"
        )))
    }
}

fn check_sweep(name: &str, values: &[f64]) -> Result<(), CliError> {
    if values.is_empty() {
        return Err(CliError::usage(format!(
            "--{name} is required for this method"
        )));
    }
    match values.iter().find(|v| !(**v > 0.0 && **v < 1.0)) {
        Some(v) => Err(CliError::usage(format!(
            "--{name} values must be in (0, 1), got {v}"
        ))),
        None => Ok(()),
    }
}

fn interval_from(args: &IntervalArgs) -> Result<SpecialInterval, CliError> {
    SpecialInterval::new(args.theta0, args.epsilon).map_err(CliError::from)
}

fn study_likelihood(
    input: Option<&std::path::Path>,
    study: &str,
    outcome: &str,
) -> Result<NormalLikelihood, CliError> {
    let records = load_records(input)?;
    let table = find(&records, study, outcome)?.table()?;
    Ok(likelihood(&table)?)
}

fn execute(cmd: Command) -> Result<String, CliError> {
    match cmd {
        Command::Analyze {
            study,
            outcome,
            input,
            interval,
            method,
            alpha,
            gamma,
            beta,
            g_sd,
            level,
            format,
        } => {
            check_level(level)?;
            let interval = interval_from(&interval)?;
            let lik = study_likelihood(input.as_deref(), &study, &outcome)?;
            let rows = analyze_rows(&lik, &interval, method, &alpha, &gamma, &beta, g_sd, level)?;
            Ok(render::rows(&rows, format))
        }
        Command::Reproduce { table, format } => reproduce(table, format),
        Command::Meta {
            input,
            level,
            svg,
            format,
        } => {
            check_level(level)?;
            let records = load_records(input.as_deref())?;
            if records.is_empty() {
                return Err(CliError::usage("input has no study rows"));
            }
            let studies = records
                .iter()
                .map(|r| {
                    Ok(StudyEffect::from_likelihood(
                        r.label(),
                        &likelihood(&r.table()?)?,
                    ))
                })
                .collect::<Result<Vec<_>, CliError>>()?;
            let re = dersimonian_laird(&studies, level)?;
            let rows = forest_rows(&studies, &re, level)?;
            if let Some(path) = svg {
                write_file(&path, &svg::forest(&rows))?;
            }
            Ok(render::meta(&rows, &re, format))
        }
        Command::Qcurve {
            study,
            outcome,
            input,
            interval,
            svg,
            points,
        } => {
            if points < 2 {
                return Err(CliError::usage("--points must be at least 2"));
            }
            let interval = interval_from(&interval)?;
            let lik = study_likelihood(input.as_deref(), &study, &outcome)?;
            let (e, se) = (lik.estimate(), lik.se());
            let samples: Vec<(f64, f64)> = (0..points)
                .map(|k| {
                    let m = e - 4.0 * se + 8.0 * se * k as f64 / (points - 1) as f64;
                    (m, q_value(&lik, &interval, m))
                })
                .collect();
            let mark = interval.upper();
            let q = q_value(&lik, &interval, mark);
            let curve = svg::QCurve {
                samples: &samples,
                marked: (mark, q),
                theta0: interval.theta0(),
                distance: (e - interval.theta0()).abs(),
                se,
            };
            write_file(&svg, &svg::qcurve(&curve))?;
            Ok(format!("q({mark}) = {q:.4}\n"))
        }
    }
}

fn write_file(path: &std::path::Path, contents: &str) -> Result<(), CliError> {
    std::fs::write(path, contents)
        .map_err(|e| CliError::usage(format!("cannot write {}: {e}", path.display())))
}

#[allow(clippy::too_many_arguments)]
fn analyze_rows(
    lik: &NormalLikelihood,
    interval: &SpecialInterval,
    method: MethodArg,
    alpha: &[f64],
    gamma: &[f64],
    beta: &[f64],
    g_sd: f64,
    level: f64,
) -> Result<Vec<Row>, CliError> {
    let row = |r: crate::Result<crate::MethodResult>, a: Assigned| -> Result<Row, CliError> {
        Ok(Row::from_result(&r?, level)?.assigned(a))
    };
    match method {
        MethodArg::Flat => Ok(vec![row(
            Ok(flat_posterior(lik, interval)),
            Assigned::None,
        )?]),
        MethodArg::TwoStep => {
            check_sweep("alpha", alpha)?;
            alpha
                .iter()
                .map(|a| row(two_step(lik, interval, *a), Assigned::Prior))
                .collect()
        }
        MethodArg::StandardNormalG => {
            check_sweep("alpha", alpha)?;
            alpha
                .iter()
                .map(|a| {
                    row(
                        standard_bayes_normal_g_result(lik, interval, *a, g_sd),
                        Assigned::Prior,
                    )
                })
                .collect()
        }
        MethodArg::PHybrid => {
            if one_sided_p(lik, interval).side == Side::None {
                if alpha.is_empty() {
                    return Err(CliError::usage(
                        "no one-sided P value applies to this estimate; pass --alpha to carry a prior probability over",
                    ));
                }
                check_sweep("alpha", alpha)?;
                return alpha
                    .iter()
                    .map(|a| row(prior_carryover(lik, interval, *a), Assigned::IntervalProb))
                    .collect();
            }
            check_sweep("gamma", gamma)?;
            // Fail on the first value below the floor before printing anything.
            let floor = gamma_floor(lik, interval)?;
            if let Some(g) = gamma.iter().find(|g| **g < floor) {
                return Err(Error::BelowFloor { gamma: *g, floor }.into());
            }
            gamma
                .iter()
                .map(|g| row(p_hybrid(lik, interval, *g), Assigned::ProbGeLower))
                .collect()
        }
        MethodArg::QHybrid => {
            check_sweep("beta", beta)?;
            beta.iter()
                .map(|b| row(q_hybrid(lik, interval, *b), Assigned::IntervalProb))
                .collect()
        }
    }
}

/// Case-study datasets and hyper-probabilities, by table number.
struct Design {
    study: &'static str,
    outcome: &'static str,
    alphas: &'static [f64],
    gammas: &'static [f64],
    betas: &'static [f64],
    merged_hybrids: bool,
}

const DESIGNS: [Design; 3] = [
    Design {
        study: "CLARIFY",
        outcome: "ACS",
        alphas: &[0.5, 0.8],
        gammas: &[0.05, 0.02, 0.01],
        betas: &[0.05, 0.01],
        merged_hybrids: false,
    },
    Design {
        study: "CLARIFY",
        outcome: "MI",
        alphas: &[0.5, 0.8],
        gammas: &[0.2, 0.1, 0.05],
        betas: &[0.2, 0.05],
        merged_hybrids: false,
    },
    Design {
        study: "STAMINA",
        outcome: "ACS",
        alphas: &[0.5, 0.8],
        gammas: &[],
        betas: &[0.5, 0.8],
        merged_hybrids: true,
    },
];

/// Rows of case-study table `id` (1, 2 or 3) and any footnotes.
pub fn reproduce_rows(id: u8) -> Result<(Vec<Row>, Vec<String>), CliError> {
    let d = DESIGNS
        .get(usize::from(id).wrapping_sub(1))
        .ok_or_else(|| CliError::usage(format!("no table {id}; choose 1, 2 or 3")))?;
    let interval = SpecialInterval::new(0.0, 0.1)?;
    let lik = study_likelihood(None, d.study, d.outcome)?;
    let mut rows = analyze_rows(&lik, &interval, MethodArg::Flat, &[], &[], &[], 1.0, 0.95)?;
    rows.extend(analyze_rows(
        &lik,
        &interval,
        MethodArg::TwoStep,
        d.alphas,
        &[],
        &[],
        1.0,
        0.95,
    )?);
    let mut notes = vec![];
    if d.merged_hybrids {
        let p = one_sided_p(&lik, &interval).p.unwrap_or(f64::NAN);
        for mut r in analyze_rows(
            &lik,
            &interval,
            MethodArg::QHybrid,
            &[],
            &[],
            d.betas,
            1.0,
            0.95,
        )? {
            r.method = "p/q-hybrid".into();
            r.significance_text = Some(format!(
                "P={p:.4} / Q={:.4}",
                r.significance.unwrap_or(f64::NAN)
            ));
            rows.push(r);
        }
        notes.push(
            "p/q-hybrid: the analyst's probability is assigned to the interval; \
             one row serves both hybrids."
                .to_string(),
        );
    } else {
        rows.extend(analyze_rows(
            &lik,
            &interval,
            MethodArg::PHybrid,
            &[],
            d.gammas,
            &[],
            1.0,
            0.95,
        )?);
        rows.extend(analyze_rows(
            &lik,
            &interval,
            MethodArg::QHybrid,
            &[],
            &[],
            d.betas,
            1.0,
            0.95,
        )?);
    }
    if id == 1 {
        if let Some(r) = rows
            .iter_mut()
            .find(|r| r.method == "p-hybrid" && r.hyper == Some(0.01))
        {
            r.mark = Some(" [a]");
            notes.push(format!(
                "[a] the published table prints 0.099 here; the computed value is {:.3}, \
                 so the published cell is a transcription error.",
                r.interval_prob
            ));
        }
    }
    notes.push("* probability fixed by the analyst.".to_string());
    Ok((rows, notes))
}

fn reproduce(id: u8, format: Format) -> Result<String, CliError> {
    let (rows, notes) = reproduce_rows(id)?;
    let mut out = render::rows(&rows, format);
    if format == Format::Table {
        out.push('\n');
        for n in notes {
            out.push_str(&n);
            out.push('\n');
        }
    }
    Ok(out)
}
