//! `qcat` subcommands.
//!
//! Exit codes: 0 when every assertion holds, 1 on a verification failure,
//! 2 on invalid configuration.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use qcat_core::channel::{ErrorPlacement, ScenarioSpace};
use qcat_core::concat::{
    run_worked_example, standard_probes, ConcatCode, ExampleTrace, VerificationReport, Verifier,
};
use qcat_core::graph_code::{
    build_encoder, build_syndrome_decoder, five_qubit_decoder_phase, generate_syndrome_table,
    QuadraticPhase, SyndromeTable,
};
use qcat_core::qlcc::QlccParams;
use qcat_core::selfcheck::{self, CheckLine};
use qcat_core::statevec::StateVector;
use qcat_core::DEFAULT_TOLERANCE;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::{formats, sweep, Error};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_INVALID: i32 = 2;

/// Environment variable for the default tolerance; `--tolerance` wins.
pub const TOLERANCE_ENV: &str = "QCAT_TOLERANCE";

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Constraint {
    #[value(name = "error-in-undamaged-block", alias = "undamaged")]
    UndamagedBlock,
    Unconstrained,
}

impl From<Constraint> for ErrorPlacement {
    fn from(c: Constraint) -> Self {
        match c {
            Constraint::UndamagedBlock => ErrorPlacement::UndamagedBlock,
            Constraint::Unconstrained => ErrorPlacement::Unconstrained,
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "qcat",
    version,
    about = "Concatenated graph code / erasure code simulator"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,

    /// Fidelity tolerance, in (0, 1e-3).
    #[arg(long, global = true, env = TOLERANCE_ENV)]
    pub tolerance: Option<f64>,

    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,

    /// Write the artifact here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Regenerate the syndrome table and compare it with the bundled copy.
    SyndromeTable {
        /// Adjacency file; defaults to the bundled five-qubit graph.
        #[arg(long)]
        graph: Option<PathBuf>,
        #[arg(long, hide = true)]
        corrupt_theta: bool,
    },
    /// Run the reference scenario on random input qubits.
    Example {
        #[arg(long, default_value_t = 1)]
        inputs: usize,
    },
    /// Exhaustive sweep over erasure/error scenarios.
    Sweep {
        #[arg(long, default_value_t = 2)]
        t: usize,
        #[arg(long, default_value_t = 1)]
        s: usize,
        #[arg(long, value_enum, default_value_t = Constraint::UndamagedBlock)]
        constraint: Constraint,
        /// Defaults to the number of logical cores.
        #[arg(long)]
        workers: Option<usize>,
        /// Put both erasures in one block (reported, not asserted).
        #[arg(long)]
        same_block: bool,
        /// Random probe inputs added to the three fixed ones.
        #[arg(long, default_value_t = 0)]
        probes: usize,
    },
    /// Isometry, unitarity, round-trip and GHZ-form checks.
    Selfcheck,
}

/// Settings shared by all subcommands after validation.
#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub format: Format,
    pub tolerance: f64,
    pub seed: u64,
    pub out: Option<PathBuf>,
}

impl RunConfig {
    pub fn from_cli(cli: &Cli) -> Result<Self, Error> {
        let tolerance = cli.tolerance.unwrap_or(DEFAULT_TOLERANCE);
        if !(tolerance > 0.0 && tolerance < 1e-3) {
            return Err(Error::Config(format!(
                "tolerance {tolerance:e} outside (0, 1e-3)"
            )));
        }
        Ok(Self {
            format: cli.format,
            tolerance,
            seed: cli.seed,
            out: cli.out.clone(),
        })
    }
}

/// What a subcommand produced.
struct Outcome {
    artifact: String,
    /// Diagnostics for stderr.
    notes: String,
    code: i32,
}

/// Parses `args` and runs the subcommand; returns the exit code.
pub fn run_with<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() {
                EXIT_INVALID
            } else {
                EXIT_OK
            };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                stderr.write_all(text.as_bytes())
            } else {
                stdout.write_all(text.as_bytes())
            };
            return code;
        }
    };
    match execute(&cli) {
        Ok((config, outcome)) => {
            let _ = stderr.write_all(outcome.notes.as_bytes());
            let written = match &config.out {
                Some(path) => std::fs::write(path, &outcome.artifact),
                None => stdout.write_all(outcome.artifact.as_bytes()),
            };
            if let Err(e) = written {
                let _ = writeln!(stderr, "error: {e}");
                return EXIT_FAILURE;
            }
            outcome.code
        }
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            e.exit_code()
        }
    }
}

fn execute(cli: &Cli) -> Result<(RunConfig, Outcome), Error> {
    let config = RunConfig::from_cli(cli)?;
    let outcome = match &cli.command {
        Command::SyndromeTable {
            graph,
            corrupt_theta,
        } => cmd_syndrome_table(&config, graph.as_ref(), *corrupt_theta)?,
        Command::Example { inputs } => cmd_example(&config, *inputs)?,
        Command::Sweep {
            t,
            s,
            constraint,
            workers,
            same_block,
            probes,
        } => {
            let space = ScenarioSpace::new(*t, *s, (*constraint).into(), *same_block)?;
            let workers = workers.unwrap_or_else(sweep::default_workers);
            if workers == 0 {
                return Err(Error::Config("--workers must be at least 1".into()));
            }
            cmd_sweep(&config, &space, workers, *probes)?
        }
        Command::Selfcheck => cmd_selfcheck(&config)?,
    };
    Ok((config, outcome))
}

fn regenerate_table(graph: Option<&PathBuf>, corrupt_theta: bool) -> Result<SyndromeTable, Error> {
    let text = match graph {
        Some(path) => std::fs::read_to_string(path)?,
        None => formats::REFERENCE_GRAPH.to_string(),
    };
    let encoder = build_encoder(&formats::parse_graph(&text)?)?;
    let mut theta = five_qubit_decoder_phase();
    if corrupt_theta {
        let mut monomials = theta.monomials().to_vec();
        monomials.pop();
        theta = QuadraticPhase::new(monomials);
    }
    let decoder = build_syndrome_decoder(&theta)?;
    Ok(generate_syndrome_table(&encoder, &decoder)?)
}

fn cmd_syndrome_table(
    config: &RunConfig,
    graph: Option<&PathBuf>,
    corrupt_theta: bool,
) -> Result<Outcome, Error> {
    let table = match regenerate_table(graph, corrupt_theta) {
        Ok(t) => t,
        Err(e) => {
            return Ok(Outcome {
                artifact: String::new(),
                notes: format!("table generation failed: {e}\n"),
                code: EXIT_FAILURE,
            })
        }
    };
    let artifact = match config.format {
        Format::Csv => formats::table_to_csv(table.rows())?,
        Format::Json => formats::table_to_json(table.rows())? + "\n",
        Format::Text => formats::table_to_text(table.rows()),
    };
    let diffs = formats::diff_tables(&table, &formats::reference_table()?);
    let (notes, code) = if diffs.is_empty() {
        (String::new(), EXIT_OK)
    } else {
        (
            format!("table differs from reference:\n{}\n", diffs.join("\n")),
            EXIT_FAILURE,
        )
    };
    Ok(Outcome {
        artifact,
        notes,
        code,
    })
}

#[derive(Serialize)]
struct ExampleRecord {
    /// `[[re, im], [re, im]]` of `c(0)`, `c(1)`.
    input: [[f64; 2]; 2],
    #[serde(flatten)]
    trace: ExampleTrace,
}

fn cmd_example(config: &RunConfig, inputs: usize) -> Result<Outcome, Error> {
    if inputs == 0 {
        return Err(Error::Config("--inputs must be at least 1".into()));
    }
    let code = ConcatCode::standard()?;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut records = Vec::with_capacity(inputs);
    for _ in 0..inputs {
        let input = StateVector::random(1, &mut rng)?;
        let trace = match run_worked_example(&code, &input, config.tolerance) {
            Ok(t) => t,
            Err(e @ qcat_core::Error::Milestone { .. }) => {
                return Ok(Outcome {
                    artifact: String::new(),
                    notes: format!("example failed: {e}\n"),
                    code: EXIT_FAILURE,
                })
            }
            Err(e) => return Err(e.into()),
        };
        let [a, b] = [input.amplitude(0), input.amplitude(1)];
        records.push(ExampleRecord {
            input: [[a.re, a.im], [b.re, b.im]],
            trace,
        });
    }
    let artifact = match config.format {
        Format::Json => serde_json::to_string_pretty(&records)? + "\n",
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record([
                "input",
                "encoded_checksum",
                "noisy_checksum",
                "recovery_purity",
                "syndrome",
                "correction",
                "fidelity",
            ])?;
            for r in &records {
                w.write_record([
                    format_input(&r.input),
                    r.trace.encoded_checksum.clone(),
                    r.trace.noisy_checksum.clone(),
                    format!("{:.12}", r.trace.recovery_purity),
                    r.trace.syndrome.to_string(),
                    r.trace.correction.to_string(),
                    format!("{:.12}", r.trace.fidelity),
                ])?;
            }
            String::from_utf8(w.into_inner().map_err(|e| Error::Io(e.into_error()))?)
                .expect("utf-8")
        }
        Format::Text => {
            let mut out = String::new();
            for (i, r) in records.iter().enumerate() {
                if i > 0 {
                    out.push('\n');
                }
                let t = &r.trace;
                let _ = writeln!(out, "scenario: {}", t.scenario);
                let _ = writeln!(out, "input: {}", format_input(&r.input));
                let _ = writeln!(out, "encoded checksum: {}", t.encoded_checksum);
                let _ = writeln!(out, "noisy checksum: {}", t.noisy_checksum);
                let _ = writeln!(out, "recovery purity: {:.9}", t.recovery_purity);
                let _ = writeln!(out, "syndrome: {}", t.syndrome);
                let _ = writeln!(out, "correction: {}", t.correction);
                let _ = writeln!(out, "fidelity: {:.9}", t.fidelity);
            }
            out
        }
    };
    Ok(Outcome {
        artifact,
        notes: String::new(),
        code: EXIT_OK,
    })
}

fn format_input(input: &[[f64; 2]; 2]) -> String {
    format!(
        "({:+.6}{:+.6}i)|0> + ({:+.6}{:+.6}i)|1>",
        input[0][0], input[0][1], input[1][0], input[1][1]
    )
}

fn cmd_sweep(
    config: &RunConfig,
    space: &ScenarioSpace,
    workers: usize,
    extra_probes: usize,
) -> Result<Outcome, Error> {
    let mut probes = standard_probes();
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    for _ in 0..extra_probes {
        probes.push(StateVector::random(1, &mut rng)?);
    }
    let verifier = Verifier::new(ConcatCode::standard()?, probes)?;
    let report = sweep::run_sweep(&verifier, space, config.tolerance, workers)?;
    let artifact = render_report(&report, space, config.format)?;
    let mut notes = String::new();
    if config.format == Format::Csv {
        notes.push_str(&report_summary(&report, space));
    }
    if let Some(t) = report.wall_time {
        let _ = writeln!(notes, "wall time: {t:.2} s ({workers} workers)");
    }
    let code = if report.all_asserted_pass() {
        EXIT_OK
    } else {
        EXIT_FAILURE
    };
    Ok(Outcome {
        artifact,
        notes,
        code,
    })
}

fn report_summary(report: &VerificationReport, space: &ScenarioSpace) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "sweep: {space}");
    let _ = writeln!(out, "total: {}", report.total);
    let _ = writeln!(out, "passed: {}", report.passed);
    let _ = writeln!(
        out,
        "asserted: {}/{}",
        report.asserted_passed, report.asserted_total
    );
    let _ = writeln!(out, "min fidelity: {:.9}", report.min_fidelity);
    let _ = writeln!(out, "failures: {}", report.failures.len());
    out
}

pub fn render_report(
    report: &VerificationReport,
    space: &ScenarioSpace,
    format: Format,
) -> Result<String, Error> {
    Ok(match format {
        Format::Json => serde_json::to_string_pretty(report)? + "\n",
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record([
                "index",
                "asserted",
                "erasures",
                "comp_errors",
                "syndrome",
                "fidelity",
                "error",
            ])?;
            for f in &report.failures {
                let list = |v: &[qcat_core::channel::LocatedPauli]| {
                    v.iter()
                        .map(|e| e.to_string())
                        .collect::<Vec<_>>()
                        .join(" ")
                };
                w.write_record([
                    f.index.to_string(),
                    f.asserted.to_string(),
                    list(&f.scenario.erasures),
                    list(&f.scenario.comp_errors),
                    f.syndrome.map(|s| s.to_string()).unwrap_or_default(),
                    format!("{:.12}", f.fidelity),
                    f.error.clone().unwrap_or_default(),
                ])?;
            }
            String::from_utf8(w.into_inner().map_err(|e| Error::Io(e.into_error()))?)
                .expect("utf-8")
        }
        Format::Text => {
            let mut out = report_summary(report, space);
            for f in &report.failures {
                let kind = if f.asserted { "asserted" } else { "reported" };
                let syndrome = f
                    .syndrome
                    .map(|s| s.to_string())
                    .unwrap_or_else(|| "-".into());
                let _ = write!(
                    out,
                    "  #{} [{kind}] {} syndrome={syndrome} fidelity={:.9}",
                    f.index, f.scenario, f.fidelity
                );
                if let Some(e) = &f.error {
                    let _ = write!(out, " ({e})");
                }
                out.push('\n');
            }
            out
        }
    })
}

fn cmd_selfcheck(config: &RunConfig) -> Result<Outcome, Error> {
    let code = ConcatCode::new(
        build_encoder(&formats::parse_graph(formats::REFERENCE_GRAPH)?)?,
        build_syndrome_decoder(&five_qubit_decoder_phase())?,
        formats::reference_table()?,
        QlccParams::default(),
    )?;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut lines = selfcheck::run(&code, &mut rng)?;
    let regenerated = generate_syndrome_table(code.encoder(), code.decoder())?;
    let differing = formats::diff_tables(&regenerated, code.table()).len();
    lines.push(CheckLine {
        name: "syndrome table matches reference".into(),
        max_deviation: differing as f64,
        tolerance: 0.0,
    });

    let artifact = match config.format {
        Format::Json => serde_json::to_string_pretty(&lines)? + "\n",
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(["check", "ok", "max_deviation", "tolerance"])?;
            for l in &lines {
                w.write_record([
                    l.name.clone(),
                    l.ok().to_string(),
                    format!("{:e}", l.max_deviation),
                    format!("{:e}", l.tolerance),
                ])?;
            }
            String::from_utf8(w.into_inner().map_err(|e| Error::Io(e.into_error()))?)
                .expect("utf-8")
        }
        Format::Text => lines.iter().map(|l| format!("{l}\n")).collect(),
    };
    let failed: Vec<&CheckLine> = lines.iter().filter(|l| !l.ok()).collect();
    let notes: String = failed
        .iter()
        .map(|l| format!("violated: {}\n", l.name))
        .collect();
    let code = if failed.is_empty() {
        EXIT_OK
    } else {
        EXIT_FAILURE
    };
    Ok(Outcome {
        artifact,
        notes,
        code,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run(args: &[&str]) -> (i32, String, String) {
        let (mut out, mut err) = (Vec::new(), Vec::new());
        let code = run_with(
            std::iter::once("qcat").chain(args.iter().copied()),
            &mut out,
            &mut err,
        );
        (
            code,
            String::from_utf8(out).unwrap(),
            String::from_utf8(err).unwrap(),
        )
    }

    #[test]
    fn tolerance_range_is_enforced() {
        for bad in ["0", "1e-3", "-1e-9", "0.5"] {
            let (code, _, err) = run(&["example", "--tolerance", bad]);
            assert_eq!(code, EXIT_INVALID, "{bad}: {err}");
        }
    }

    #[test]
    fn bad_arguments_exit_2() {
        assert_eq!(run(&["sweep", "--t", "3", "--s", "0"]).0, EXIT_INVALID);
        assert_eq!(run(&["sweep", "--s", "2"]).0, EXIT_INVALID);
        assert_eq!(run(&["sweep", "--constraint", "nowhere"]).0, EXIT_INVALID);
        assert_eq!(run(&["frobnicate"]).0, EXIT_INVALID);
        assert_eq!(
            run(&["sweep", "--t", "0", "--s", "0", "--workers", "0"]).0,
            EXIT_INVALID
        );
    }

    #[test]
    fn help_exits_0() {
        let (code, out, _) = run(&["--help"]);
        assert_eq!(code, EXIT_OK);
        assert!(out.contains("syndrome-table"));
        assert!(!out.contains("corrupt"));
    }

    #[test]
    fn trivial_sweep() {
        let (code, out, _) = run(&["sweep", "--t", "0", "--s", "0", "--workers", "1"]);
        assert_eq!(code, EXIT_OK);
        assert!(out.contains("total: 1\npassed: 1\n"), "{out}");
    }
}
