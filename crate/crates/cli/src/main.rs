use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};

use zitterlab::checkerboard::{
    corner_kernel_field, kernel_bruteforce_field, kernel_dp_field, parse_angle, KernelReport, Source, StepMatrices,
    ZitterEvolution, BRUTE_FORCE_CAP,
};
use zitterlab::numfmt::fmt17;
use zitterlab::poset::{element_table, interval_table, write_element_csv, write_interval_csv, EventId, PosetFixture};
use zitterlab::seqlang::{parse, AmplitudeEnv};
use zitterlab::sequences::{corner_histogram, Move, SequenceIter, DEFAULT_CAP};
use zitterlab::suite::{run_suite, Suite, SuiteConfig};

/// Environment variable overriding the brute-force step cap.
const MAX_STEPS_VAR: &str = "ZITTERLAB_MAX_STEPS";

/// Longest evolution the propagating commands will allocate for.
const MAX_EVOLUTION_STEPS: usize = 1_000_000;

#[derive(Parser, Debug)]
#[command(name = "zitterlab", version, about = "Causal sets, pair-valued amplitudes and the Feynman checkerboard")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// List every move sequence with the given numbers of P and Q moves
    Enumerate {
        #[arg(long = "np")]
        n_p: usize,
        #[arg(long = "nq")]
        n_q: usize,
        /// Refuse sequences longer than this
        #[arg(long, default_value_t = DEFAULT_CAP)]
        cap: usize,
        /// Print the histogram of corner counts instead of the sequences
        #[arg(long)]
        corners: bool,
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Quantify a poset fixture against a pair of chains
    Poset {
        #[arg(long)]
        fixture: PathBuf,
        #[arg(long, default_value = "P")]
        p: String,
        #[arg(long, default_value = "Q")]
        q: String,
        /// Only consecutive pairs along this chain
        #[arg(long)]
        along: Option<String>,
        /// Per-element projections onto every chain instead of intervals
        #[arg(long)]
        elements: bool,
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Evaluate a measurement-sequence expression
    SeqEval {
        /// JSON file of link amplitudes
        #[arg(long)]
        env: PathBuf,
        expr: String,
    },
    /// Propagator from a point source
    Kernel {
        #[arg(long)]
        steps: usize,
        #[arg(long, default_value_t = std::f64::consts::FRAC_1_SQRT_2)]
        b: f64,
        #[arg(long, default_value = "pi/2")]
        theta: String,
        #[arg(long, default_value = "P")]
        initial: Move,
        #[arg(long, value_enum, default_value_t = Method::Dp)]
        method: Method,
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Position distribution of a source at rest, slice by slice
    Zitter {
        #[arg(long)]
        steps: usize,
        #[arg(long, default_value = "symmetric")]
        initial: String,
        #[arg(long, default_value_t = std::f64::consts::FRAC_1_SQRT_2)]
        b: f64,
        #[arg(long, default_value = "pi/2")]
        theta: String,
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Run an invariant suite
    Check {
        #[arg(long, value_parser = parse_suite)]
        suite: Suite,
        /// Length of the long evolution runs
        #[arg(long)]
        steps: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
        /// Tolerance for algebraic identities
        #[arg(long)]
        algebraic_tol: Option<f64>,
        /// Tolerance for probability drift over long evolutions
        #[arg(long)]
        evolution_tol: Option<f64>,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Method {
    Dp,
    Brute,
    Corners,
}

fn parse_suite(s: &str) -> Result<Suite, String> {
    s.parse()
}

enum Outcome {
    Done,
    SuiteFailed,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli.command) {
        Ok(Outcome::Done) => ExitCode::SUCCESS,
        Ok(Outcome::SuiteFailed) => ExitCode::from(2),
        Err(e) if is_broken_pipe(&e) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

fn is_broken_pipe(e: &anyhow::Error) -> bool {
    e.chain().any(|c| c.downcast_ref::<io::Error>().is_some_and(|io| io.kind() == io::ErrorKind::BrokenPipe))
}

fn output(path: Option<&PathBuf>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p).with_context(|| format!("creating {}", p.display()))?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn brute_force_cap() -> Result<usize> {
    match std::env::var(MAX_STEPS_VAR) {
        Ok(v) => v.trim().parse().with_context(|| format!("{MAX_STEPS_VAR} must be a nonnegative integer, got `{v}`")),
        Err(std::env::VarError::NotPresent) => Ok(BRUTE_FORCE_CAP),
        Err(e) => bail!("{MAX_STEPS_VAR}: {e}"),
    }
}

fn matrices(b: f64, theta: &str) -> Result<StepMatrices> {
    Ok(StepMatrices::new(b, parse_angle(theta)?)?)
}

fn check_evolution_steps(steps: usize) -> Result<()> {
    if steps > MAX_EVOLUTION_STEPS {
        bail!("{steps} steps requested but at most {MAX_EVOLUTION_STEPS} are supported");
    }
    Ok(())
}

fn run(command: Command) -> Result<Outcome> {
    match command {
        Command::Enumerate { n_p, n_q, cap, corners, csv } => {
            let mut out = output(csv.as_ref())?;
            if corners {
                writeln!(out, "corners,count")?;
                for (r, count) in corner_histogram(n_p, n_q, cap)? {
                    writeln!(out, "{r},{count}")?;
                }
            } else {
                writeln!(out, "sequence,corners")?;
                for seq in SequenceIter::new(n_p, n_q, cap)? {
                    writeln!(out, "{seq},{}", seq.corners())?;
                }
            }
            out.flush()?;
        }
        Command::Poset { fixture, p, q, along, elements, csv } => {
            let text = std::fs::read_to_string(&fixture).with_context(|| format!("reading {}", fixture.display()))?;
            let fx = PosetFixture::from_json(&text)?;
            let out = output(csv.as_ref())?;
            if elements {
                write_element_csv(&element_table(&fx), out)?;
            } else {
                let frame = fx.frame(&p, &q)?;
                let pairs: Vec<(EventId, EventId)> = match &along {
                    Some(name) => {
                        let chain = fx.chain(name).with_context(|| format!("no chain named `{name}`"))?;
                        chain.elements().windows(2).map(|w| (w[0], w[1])).collect()
                    }
                    None => {
                        let ids: Vec<EventId> = fx.poset.ids().collect();
                        ids.iter()
                            .flat_map(|&x| ids.iter().map(move |&y| (x, y)))
                            .filter(|&(x, y)| fx.poset.lt(x, y))
                            .collect()
                    }
                };
                write_interval_csv(&interval_table(&fx, &frame, pairs), out)?;
            }
        }
        Command::SeqEval { env, expr } => {
            let text = std::fs::read_to_string(&env).with_context(|| format!("reading {}", env.display()))?;
            let env = AmplitudeEnv::from_json(&text)?;
            let amp = parse(&expr)?.evaluate(&env)?;
            let mut out = output(None)?;
            writeln!(out, "{{\"a1\":{},\"a2\":{},\"prob\":{}}}", fmt17(amp.a1), fmt17(amp.a2), fmt17(amp.born()))?;
            out.flush()?;
        }
        Command::Kernel { steps, b, theta, initial, method, json } => {
            let m = matrices(b, &theta)?;
            let field = match method {
                Method::Dp => {
                    check_evolution_steps(steps)?;
                    kernel_dp_field(steps, initial, &m)
                }
                Method::Brute => kernel_bruteforce_field(steps, initial, &m, brute_force_cap()?)?,
                Method::Corners => corner_kernel_field(steps, initial, &m, brute_force_cap()?)?,
            };
            let report = KernelReport::from_field(steps, initial, &m, &field);
            let mut out = output(json.as_ref())?;
            writeln!(out, "{}", report.to_json())?;
            out.flush()?;
        }
        Command::Zitter { steps, initial, b, theta, csv } => {
            check_evolution_steps(steps)?;
            let source: Source = initial.parse()?;
            let m = matrices(b, &theta)?;
            let mut out = output(csv.as_ref())?;
            writeln!(out, "t,x,prob")?;
            for d in ZitterEvolution::new(source, &m).take(steps + 1) {
                for (x, p) in d.iter() {
                    writeln!(out, "{},{x},{}", d.t, fmt17(p))?;
                }
            }
            out.flush()?;
        }
        Command::Check { suite, steps, seed, algebraic_tol, evolution_tol } => {
            let mut cfg = SuiteConfig::default();
            if let Some(s) = steps {
                check_evolution_steps(s)?;
                cfg.evolution_steps = s;
            }
            if let Some(s) = seed {
                cfg.seed = s;
            }
            for (slot, value, flag) in [
                (&mut cfg.algebraic_tol, algebraic_tol, "--algebraic-tol"),
                (&mut cfg.evolution_tol, evolution_tol, "--evolution-tol"),
            ] {
                if let Some(v) = value {
                    if !(v > 0.0 && v.is_finite()) {
                        bail!("{flag} must be a positive number, got {v}");
                    }
                    *slot = v;
                }
            }
            let report = run_suite(suite, &cfg)?;
            let mut out = output(None)?;
            for c in &report.checks {
                writeln!(out, "{c}")?;
            }
            if let Some(first) = report.first_failure() {
                out.flush()?;
                eprintln!("suite {suite} failed: {first}");
                return Ok(Outcome::SuiteFailed);
            }
            writeln!(out, "suite {suite}: all {} checks passed", report.checks.len())?;
            out.flush()?;
        }
    }
    Ok(Outcome::Done)
}
