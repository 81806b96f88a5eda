use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use semsum::harness::demo::WEATHER_FIXTURE;
use semsum::harness::verify::DEFAULT_SEED;
use semsum::harness::{
    convergence_experiment, mc_uniform_avg_loss, run_demo, verify_all_seeded, write_csv,
    write_json, Scenario, VerifyLevel,
};
use semsum::summarizers::{
    known_p_scores, known_p_summarize, min_semantic_loss, min_uniform_avg_loss, universal_scores,
    universal_summarize,
};
use semsum::{report_loss, Error, Result, Scalar};

#[derive(Debug, Parser)]
#[command(name = "semsum", version, about = "Semantic-loss summarization experiments")]
struct Cli {
    /// Scenario file (JSON).
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Seed for every stochastic step; overrides the scenario seed.
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    #[arg(long, global = true, value_enum)]
    format: Option<Format>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Level {
    Quick,
    Full,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Optimal known-distribution summary and loss for every report.
    Loss,
    /// Score every candidate summary of the scenario report.
    Summarize,
    /// Universal summary of the scenario report given its history.
    Universal,
    /// Exact uniform-average loss of the universal summarizer and its bracket.
    AvgLoss {
        #[arg(long)]
        n: Option<usize>,
    },
    /// Monte Carlo estimate of the uniform-average loss.
    Mc {
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        samples: Option<u64>,
    },
    /// Universal loss against the known-distribution minimum as n grows.
    Converge {
        #[arg(long)]
        trials: Option<u64>,
        #[arg(long, value_delimiter = ',')]
        n_grid: Option<Vec<usize>>,
    },
    /// Run the verification suite.
    Verify {
        #[arg(long, value_enum)]
        level: Option<Level>,
    },
    /// Summarize the weather report (or the scenario given with --config).
    Demo,
}

#[derive(Serialize)]
struct LossRow {
    report: String,
    probability: f64,
    summary: String,
    loss: f64,
}

#[derive(Serialize)]
struct CandidateRow {
    summary: String,
    score: f64,
    exact: Option<String>,
    chosen: bool,
}

#[derive(Serialize)]
struct AvgLossRow {
    n: usize,
    j: usize,
    exact_value: String,
    exact_value_f64: f64,
    mu_sum: String,
    mu_sum_f64: f64,
    implied_lambda: f64,
    lambda_bound: f64,
    u_star: f64,
}

#[derive(Serialize)]
struct McRow {
    n: usize,
    j: usize,
    estimate: f64,
    std_error: f64,
    samples: u64,
    seed: u64,
}

#[derive(Serialize)]
struct DemoRow {
    method: String,
    j: usize,
    events: String,
    score: f64,
}

struct Output {
    target: Box<dyn Write>,
    format: Format,
}

impl Output {
    fn table<S: Serialize>(&mut self, rows: &[S]) -> Result<()> {
        match self.format {
            Format::Csv => write_csv(rows, &mut self.target),
            Format::Json => write_json(rows, &mut self.target),
        }
    }
}

fn load(cli: &Cli, fallback: impl FnOnce() -> Result<Scenario>) -> Result<Scenario> {
    match &cli.config {
        Some(path) => Scenario::load(path),
        None => fallback(),
    }
}

fn run(cli: &Cli) -> Result<bool> {
    let target: Box<dyn Write> = match &cli.out {
        Some(path) => Box::new(BufWriter::new(File::create(path)?)),
        None => Box::new(io::stdout().lock()),
    };
    let mut out = Output {
        target,
        format: cli.format.unwrap_or(Format::Csv),
    };
    let default_scenario = || Ok(Scenario::new(2));
    let mut passed = true;

    match &cli.command {
        Command::Loss => {
            let s = load(cli, default_scenario)?;
            let p = s.distribution()?;
            let u = s.weights()?;
            let mut rows = Vec::new();
            for x in p.support() {
                let y = known_p_summarize(&p, x, s.j, &u)?;
                rows.push(LossRow {
                    report: x.to_string(),
                    probability: *p.prob(x),
                    summary: y.to_string(),
                    loss: report_loss(&p, x, &y, &u)?,
                });
            }
            rows.push(LossRow {
                report: "all".into(),
                probability: 1.0,
                summary: String::new(),
                loss: min_semantic_loss(&p, s.j, &u)?,
            });
            out.table(&rows)?;
        }
        Command::Summarize => {
            let s = load(cli, default_scenario)?;
            let p = s.distribution()?;
            let u = s.weights()?;
            let x = s
                .report()?
                .ok_or_else(|| Error::Config("summarize needs a report in the scenario".into()))?;
            let chosen = known_p_summarize(&p, x, s.j, &u)?;
            let rows: Vec<CandidateRow> = known_p_scores(&p, x, s.j, &u)?
                .into_iter()
                .map(|(y, score)| CandidateRow {
                    summary: y.to_string(),
                    score,
                    exact: None,
                    chosen: y == chosen,
                })
                .collect();
            out.table(&rows)?;
        }
        Command::Universal => {
            let s = load(cli, default_scenario)?;
            let u = s.weights()?;
            let seq = s
                .sequence()?
                .ok_or_else(|| Error::Config("universal needs a report in the scenario".into()))?;
            let chosen = universal_summarize(&seq, s.j, &u)?;
            let rows: Vec<CandidateRow> = universal_scores(&seq, s.j, &u)?
                .into_iter()
                .map(|(y, score)| CandidateRow {
                    summary: y.to_string(),
                    score: score.as_f64(),
                    exact: Some(score.to_string()),
                    chosen: y == chosen,
                })
                .collect();
            out.table(&rows)?;
        }
        Command::AvgLoss { n } => {
            let s = load(cli, default_scenario)?;
            let n = n.or(s.n).unwrap_or(1);
            let report = min_uniform_avg_loss(n, s.alphabet()?, s.j, &s.weights()?)?;
            out.table(&[AvgLossRow {
                n,
                j: s.j,
                exact_value: report.exact_value.to_string(),
                exact_value_f64: report.exact_value.as_f64(),
                mu_sum: report.mu_sum.to_string(),
                mu_sum_f64: report.mu_sum.as_f64(),
                implied_lambda: report.implied_lambda().as_f64(),
                lambda_bound: report.lambda_bound,
                u_star: report.u_star,
            }])?;
        }
        Command::Mc { n, samples } => {
            let s = load(cli, default_scenario)?;
            let n = n.or(s.n).unwrap_or(1);
            let samples = samples.or(s.samples).unwrap_or(100_000);
            let seed = cli.seed.or(s.seed).unwrap_or(DEFAULT_SEED);
            let est = mc_uniform_avg_loss(s.alphabet()?, s.j, n, &s.weights()?, samples, seed)?;
            out.table(&[McRow {
                n,
                j: s.j,
                estimate: est.estimate,
                std_error: est.std_error,
                samples: est.samples,
                seed: est.seed,
            }])?;
        }
        Command::Converge { trials, n_grid } => {
            let s = load(cli, default_scenario)?;
            let grid = n_grid
                .clone()
                .or_else(|| s.n_grid.clone())
                .unwrap_or_else(|| vec![1, 10, 100, 1000]);
            let trials = trials.or(s.trials).unwrap_or(200);
            let seed = cli.seed.or(s.seed).unwrap_or(DEFAULT_SEED);
            let rows = convergence_experiment(&s.distribution()?, s.j, &s.weights()?, &grid, trials, seed)?;
            out.table(&rows)?;
        }
        Command::Verify { level } => {
            let scenario_level = match &cli.config {
                Some(path) => Scenario::load(path)?.level,
                None => None,
            };
            let level = match level {
                Some(Level::Quick) => VerifyLevel::Quick,
                Some(Level::Full) => VerifyLevel::Full,
                None => scenario_level.unwrap_or_default(),
            };
            let report = verify_all_seeded(level, cli.seed.unwrap_or(DEFAULT_SEED))?;
            match out.format {
                Format::Csv => write_csv(&report.rows, &mut out.target)?,
                Format::Json => write_json(&report, &mut out.target)?,
            }
            for r in report.failures() {
                eprintln!("FAILED {}: value {} bound {} ({})", r.name, r.value, r.bound, r.note);
            }
            eprintln!(
                "{} of {} checks passed in {:.1} s",
                report.rows.iter().filter(|r| r.pass).count(),
                report.rows.len(),
                report.wall_time_secs
            );
            passed = report.passed();
        }
        Command::Demo => {
            let s = load(cli, || Scenario::from_json(WEATHER_FIXTURE))?;
            let demo = run_demo(&s, cli.seed.or(s.seed).unwrap_or(DEFAULT_SEED))?;
            match cli.format {
                None => write!(out.target, "{demo}")?,
                Some(Format::Json) => write_json(&demo, &mut out.target)?,
                Some(Format::Csv) => {
                    let rows: Vec<DemoRow> = demo
                        .summaries
                        .iter()
                        .map(|d| DemoRow {
                            method: d.method.clone(),
                            j: d.j,
                            events: d
                                .events
                                .iter()
                                .map(|m| format!("{}={}", m.event, if m.occurred { "yes" } else { "no" }))
                                .collect::<Vec<_>>()
                                .join("; "),
                            score: d.score,
                        })
                        .collect();
                    write_csv(&rows, &mut out.target)?;
                }
            }
        }
    }
    out.target.flush()?;
    Ok(passed)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Error::BrokenPipe) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("semsum: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
