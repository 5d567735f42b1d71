//! `sqrtlab`: batch front end for the modular square-root laboratory.
//!
//! Exit codes: 0 ok, 1 hard-assert (certificate) violation, 2 config
//! error, 3 cap exceeded.

use clap::{Args, Parser, Subcommand, ValueEnum};
use sqrtlab_cli::config::{parse_config, AmplitudeChoice, CoeffChoice, EngineChoice, SweepConfig};
use sqrtlab_cli::error::CliError;
use sqrtlab_cli::rows::{render, Format, Row, Schema, Value};
use sqrtlab_cli::runner::{self, cell_rng};
use sqrtlab_cli::verify::{run_all, Level};
use sqrtlab_core::arith;
use sqrtlab_core::sieve::SieveCaps;
use std::io::Write;
use std::path::PathBuf;

#[derive(Parser)]
#[command(name = "sqrtlab", version, about = "Modular square-root laboratory")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args, Clone)]
struct OutputArgs {
    /// Output file (stdout when omitted).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = FormatArg::Csv)]
    format: FormatArg,
    /// Worker threads for sweeps.
    #[arg(long, global = true, default_value_t = 1)]
    threads: usize,
    /// Seed for randomized coefficients and suites.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Csv,
    Jsonl,
}

impl From<FormatArg> for Format {
    fn from(f: FormatArg) -> Format {
        match f {
            FormatArg::Csv => Format::Csv,
            FormatArg::Jsonl => Format::Jsonl,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum EngineArg {
    Convolution,
    Pairing,
    Spectral,
}

impl From<EngineArg> for EngineChoice {
    fn from(e: EngineArg) -> EngineChoice {
        match e {
            EngineArg::Convolution => EngineChoice::Convolution,
            EngineArg::Pairing => EngineChoice::Pairing,
            EngineArg::Spectral => EngineChoice::Spectral,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Modular square roots of a value, one row per root.
    Sqrt {
        #[arg(long)]
        modulus: u64,
        #[arg(long)]
        value: u64,
    },
    /// Energies, bounds, and ratios for one instance.
    Energy {
        #[arg(long)]
        r: u64,
        #[arg(long, default_value_t = 1)]
        j: u64,
        #[arg(long)]
        m: u64,
        #[arg(long)]
        h: u64,
        #[arg(long, value_enum, default_value_t = EngineArg::Convolution)]
        engine: EngineArg,
        #[arg(long)]
        nu: Option<f64>,
        #[arg(long, default_value_t = 0.01)]
        eps: f64,
        /// Also compute the unrestricted energies.
        #[arg(long, default_value_t = false)]
        unrestricted: bool,
        /// Event-mass cap for the pairing engine.
        #[arg(long, default_value_t = 200)]
        brute_mass: u128,
    },
    /// Reduction, minima, certificates, and counts for one class.
    Lattice {
        #[arg(long)]
        r: u64,
        #[arg(long)]
        d: u64,
        #[arg(long, default_value_t = 1)]
        k: u64,
        #[arg(long)]
        h: u64,
        #[arg(long)]
        m: u64,
    },
    /// Bilinear sum with bound formulas for one instance.
    Bilinear {
        #[arg(long)]
        r: u64,
        #[arg(long, default_value_t = 1)]
        j: u64,
        #[arg(long)]
        l: u64,
        #[arg(long)]
        m: u64,
        #[arg(long)]
        h: u64,
        /// "zero" or "critical:<Q>".
        #[arg(long, default_value = "zero")]
        amplitude: String,
        /// "ones" or "random" (seeded).
        #[arg(long, default_value = "ones")]
        coeffs: String,
        #[arg(long)]
        nu: Option<f64>,
        #[arg(long, default_value_t = 0.01)]
        eps: f64,
    },
    /// Approximation-count experiment rows for a modulus bound Q.
    Sieve {
        #[arg(long)]
        q: u64,
        /// Window length; defaults to Q³.
        #[arg(long)]
        n: Option<u64>,
        #[arg(long, default_value_t = 1)]
        r_min: u64,
        #[arg(long)]
        r_max: Option<u64>,
        #[arg(long, default_value_t = 8)]
        z_points: u32,
        #[arg(long, default_value_t = 0.1)]
        eta: f64,
    },
    /// Config-driven grid sweep.
    Sweep {
        #[arg(long)]
        config: PathBuf,
    },
    /// Run the verification suite.
    Verify {
        #[arg(long, value_enum, default_value_t = LevelArg::Quick)]
        level: LevelArg,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum LevelArg {
    Quick,
    Full,
}

fn main() {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => {}
        Err(e) => {
            eprintln!("error: {e}");
            std::process::exit(e.exit_code());
        }
    }
}

fn emit(schema: &Schema, rows: &[Row], out: &OutputArgs) -> Result<(), CliError> {
    let text = render(schema, rows, out.format.into());
    match &out.out {
        Some(path) => std::fs::write(path, text)?,
        None => std::io::stdout().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Sqrt { modulus, value } => {
            if modulus == 0 {
                return Err(CliError::Config("modulus must be positive".into()));
            }
            let f = arith::Factorization::of(modulus).map_err(|e| CliError::Config(e.to_string()))?;
            let roots = arith::sqrt_mod(value, &f);
            let rows: Vec<Row> = roots
                .iter()
                .map(|&x| {
                    Row::new(vec![
                        Value::U(modulus as u128),
                        Value::U((value % modulus) as u128),
                        Value::U(x as u128),
                    ])
                })
                .collect();
            emit(&runner::SQRT_SCHEMA, &rows, &cli.output)
        }
        Command::Energy { r, j, m, h, engine, nu, eps, unrestricted, brute_mass } => {
            let row =
                runner::energy_row(r, j, m, h, engine.into(), nu, eps, unrestricted, brute_mass)?;
            emit(&runner::ENERGY_SCHEMA, &[row], &cli.output)
        }
        Command::Lattice { r, d, k, h, m } => {
            if r == 0 || d == 0 || d > r {
                return Err(CliError::Config(format!("need 1 <= d <= r, got d={d}, r={r}")));
            }
            if arith::gcd(r, k) != 1 {
                return Err(CliError::Config(format!("gcd(r, k) != 1 at r={r}, k={k}")));
            }
            let row = runner::lattice_row(r, d, k, h, m)?;
            emit(&runner::LATTICE_SCHEMA, &[row], &cli.output)
        }
        Command::Bilinear { r, j, l, m, h, amplitude, coeffs, nu, eps } => {
            let amplitude = parse_amplitude(&amplitude)?;
            let coeffs = match coeffs.as_str() {
                "ones" => CoeffChoice::Ones,
                "random" => CoeffChoice::Random,
                other => {
                    return Err(CliError::Config(format!(
                        "coeffs must be 'ones' or 'random', got '{other}'"
                    )))
                }
            };
            let mut rng = cell_rng(cli.output.seed, 0);
            let row = runner::bilinear_row(r, j, l, m, h, amplitude, coeffs, nu, eps, &mut rng)?;
            emit(&runner::BILINEAR_SCHEMA, &[row], &cli.output)
        }
        Command::Sieve { q, n, r_min, r_max, z_points, eta } => {
            let caps = SieveCaps::default();
            let rows = runner::sieve_rows(q, n, r_min, r_max, z_points, eta, &caps)?;
            emit(&runner::SIEVE_SCHEMA, &rows, &cli.output)
        }
        Command::Sweep { config } => {
            let text = std::fs::read_to_string(&config)
                .map_err(|e| CliError::Config(format!("{}: {e}", config.display())))?;
            let mut cfg: SweepConfig = parse_config(&text).map_err(CliError::Config)?;
            // Command-line overrides.
            if cli.output.out.is_some() {
                cfg.out = cli.output.out.clone();
            }
            if cli.output.threads > 1 {
                cfg.threads = cli.output.threads;
            }
            if cli.output.seed != 0 {
                cfg.seed = cli.output.seed;
            }
            let outcome = runner::run_sweep(&cfg)?;
            let rendered = render(outcome.schema, &outcome.rows, cfg.format);
            match &cfg.out {
                Some(path) => {
                    if let Some(dir) = path.parent() {
                        if !dir.as_os_str().is_empty() {
                            std::fs::create_dir_all(dir)?;
                        }
                    }
                    std::fs::write(path, &rendered)?;
                    if cfg.mirror_jsonl {
                        let mirror = path.with_extension("jsonl");
                        std::fs::write(
                            mirror,
                            render(outcome.schema, &outcome.rows, Format::Jsonl),
                        )?;
                    }
                    println!(
                        "wrote {} rows ({}) to {}",
                        outcome.rows.len(),
                        outcome.schema.name,
                        path.display()
                    );
                }
                None => std::io::stdout().write_all(rendered.as_bytes())?,
            }
            // Summary goes to stdout when rows went to a file, stderr
            // otherwise, so piped CSV stays clean.
            let mut sink: Box<dyn Write> = if cfg.out.is_some() {
                Box::new(std::io::stdout())
            } else {
                Box::new(std::io::stderr())
            };
            for (name, min, max) in &outcome.summary {
                writeln!(sink, "summary {name}: min={min:.6e} max={max:.6e}")?;
            }
            Ok(())
        }
        Command::Verify { level } => {
            let level = match level {
                LevelArg::Quick => Level::Quick,
                LevelArg::Full => Level::Full,
            };
            let outcomes = run_all(level);
            let mut failed = 0;
            for o in &outcomes {
                println!("{}", o.line());
                if !o.passed {
                    failed += 1;
                }
            }
            let total: f64 = outcomes.iter().map(|o| o.seconds).sum();
            println!("--- timing ---");
            for o in &outcomes {
                println!("{:<28} {:>8.2}s", o.name, o.seconds);
            }
            println!("{:<28} {:>8.2}s", "total", total);
            if failed > 0 {
                return Err(CliError::Certificate(format!("{failed} criteria failed")));
            }
            println!("all {} criteria passed", outcomes.len());
            Ok(())
        }
    }
}

fn parse_amplitude(s: &str) -> Result<AmplitudeChoice, CliError> {
    match s {
        "zero" => Ok(AmplitudeChoice::Zero),
        other => {
            let q = other.strip_prefix("critical:").ok_or_else(|| {
                CliError::Config(format!(
                    "amplitude must be 'zero' or 'critical:<Q>', got '{other}'"
                ))
            })?;
            let q = q.parse().map_err(|e| CliError::Config(format!("amplitude Q: {e}")))?;
            Ok(AmplitudeChoice::Critical { q })
        }
    }
}
