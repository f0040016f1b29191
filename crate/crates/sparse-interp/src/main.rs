//! Thin command-line wrapper around the library: instance generation,
//! interpolation, verification, and benchmark sweeps.
//!
//! Exit codes: 0 success, 1 runtime error (I/O, parse, unsupported
//! configuration, algorithm failure), 2 usage error, 3 verified mismatch.

use std::fs;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;

use sparse_interp::bench::{self, Algorithm, BenchConfig};
use sparse_interp::interp::{
    dense_interpolate, garg_schost, interpolate, zero_test, InterpConfig,
};
use sparse_interp::ledger::ProbeLedger;
use sparse_interp::ring::RingSpec;
use sparse_interp::slp::Slp;
use sparse_interp::sparse::SparsePoly;

const EXIT_MISMATCH: u8 = 3;

#[derive(Parser)]
#[command(name = "sparse-interp", version, about = "Sparse interpolation of straight-line programs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a random sparse polynomial and a program computing it.
    Gen(GenArgs),
    /// Interpolate the polynomial computed by a program.
    Interpolate(InterpolateArgs),
    /// Deterministically check a candidate polynomial against a program.
    Verify(VerifyArgs),
    /// Sweep a (T, D) grid and tabulate probe costs per algorithm.
    Bench(BenchArgs),
}

#[derive(Args)]
struct GenArgs {
    /// Number of terms.
    #[arg(long)]
    terms: u64,
    /// Largest allowed exponent.
    #[arg(long)]
    degree: u64,
    /// Base ring: `zmod:<q>` for a prime field or `int`.
    #[arg(long, default_value = "int")]
    ring: String,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Where to write the program.
    #[arg(long)]
    out_slp: String,
    /// Where to write the polynomial.
    #[arg(long)]
    out_sparse: String,
}

#[derive(Args)]
struct InterpolateArgs {
    /// Program file (`.slp`).
    #[arg(long)]
    slp: String,
    /// Sparsity bound T.
    #[arg(long)]
    sparsity: u64,
    /// Degree bound D.
    #[arg(long)]
    degree_bound: u64,
    /// Failure tolerance of the Monte Carlo algorithms.
    #[arg(long, default_value_t = 0.05)]
    mu: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// recursive | gargschost | dense
    #[arg(long, default_value = "recursive")]
    algo: Algorithm,
    /// Certify the output with the deterministic zero test.
    #[arg(long)]
    verify: bool,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long)]
    slp: String,
    /// Candidate polynomial (`.sparse`).
    #[arg(long)]
    candidate: String,
    #[arg(long)]
    sparsity: u64,
    #[arg(long)]
    degree_bound: u64,
}

#[derive(Args)]
struct BenchArgs {
    /// Comma-separated sparsity bounds, e.g. `4,16,64`.
    #[arg(long = "T", value_delimiter = ',', required = true)]
    sparsity_bounds: Vec<u64>,
    /// Comma-separated degree bounds.
    #[arg(long = "D", value_delimiter = ',', required = true)]
    degree_bounds: Vec<u64>,
    #[arg(long)]
    trials: u64,
    #[arg(long, default_value_t = 0.05)]
    mu: f64,
    /// Mandatory: sweeps must be reproducible.
    #[arg(long)]
    seed: u64,
    /// Output CSV path.
    #[arg(long)]
    out: String,
    /// Base ring for the generated instances.
    #[arg(long, default_value = "zmod:2305843009213693951")]
    ring: String,
    /// Execute the dense baseline only up to this degree bound; larger
    /// cells get a definition-derived row flagged `executed=0`.
    #[arg(long, default_value_t = 1 << 12)]
    dense_cap: u64,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::from(1)
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode, String> {
    match cli.command {
        Command::Gen(args) => gen(args),
        Command::Interpolate(args) => run_interpolate(args),
        Command::Verify(args) => run_verify(args),
        Command::Bench(args) => run_bench(args),
    }
}

fn parse_ring(text: &str) -> Result<RingSpec, String> {
    if text == "int" {
        return Ok(RingSpec::integers());
    }
    if let Some(q) = text.strip_prefix("zmod:") {
        let q: u64 = q
            .parse()
            .map_err(|_| format!("`{q}` is not a modulus"))?;
        return RingSpec::prime_field(q).map_err(|e| e.to_string());
    }
    Err(format!("ring `{text}` is neither `int` nor `zmod:<q>`"))
}

fn gen(args: GenArgs) -> Result<ExitCode, String> {
    let ring = parse_ring(&args.ring)?;
    let mut rng = ChaCha12Rng::seed_from_u64(args.seed);
    let poly = SparsePoly::random(ring, args.terms, args.degree, &mut rng)?;
    let program = Slp::from_sparse(&poly);
    fs::write(&args.out_sparse, poly.to_sparse_text())
        .map_err(|e| format!("writing {}: {e}", args.out_sparse))?;
    fs::write(&args.out_slp, program.to_text())
        .map_err(|e| format!("writing {}: {e}", args.out_slp))?;
    eprintln!(
        "wrote {} ({} terms) and {} ({} instructions)",
        args.out_sparse,
        poly.sparsity(),
        args.out_slp,
        program.len()
    );
    Ok(ExitCode::SUCCESS)
}

fn load_slp(path: &str) -> Result<Slp, String> {
    let text = fs::read_to_string(path).map_err(|e| format!("reading {path}: {e}"))?;
    Slp::parse(&text).map_err(|e| format!("{path}: {e}"))
}

fn run_interpolate(args: InterpolateArgs) -> Result<ExitCode, String> {
    let program = load_slp(&args.slp)?;
    let (result, ledger) = match args.algo {
        Algorithm::Recursive => {
            let cfg = InterpConfig::new(
                args.sparsity,
                args.degree_bound,
                args.mu,
                program.ring(),
                args.seed,
            )?;
            interpolate(&program, &cfg)
        }
        Algorithm::GargSchost => {
            if args.sparsity < 1 {
                return Err("gargschost needs a sparsity bound of at least 1".into());
            }
            if !(args.mu > 0.0 && args.mu < 1.0) {
                return Err(format!("failure tolerance {} must lie in (0, 1)", args.mu));
            }
            let ledger = ProbeLedger::new();
            let mut rng = ChaCha12Rng::seed_from_u64(args.seed);
            let result = garg_schost(
                &program,
                args.sparsity,
                args.degree_bound,
                args.mu,
                &mut rng,
                &ledger,
            )
            .map_err(|e| e.to_string())?;
            (result, ledger)
        }
        Algorithm::Dense => {
            let ledger = ProbeLedger::new();
            let result =
                dense_interpolate(&program, args.degree_bound, &ledger).map_err(|e| e.to_string())?;
            (result, ledger)
        }
    };

    // The polynomial goes to stdout in `.sparse` form; diagnostics go to
    // stderr so the output stays machine-readable.
    print!("{}", result.to_sparse_text());
    eprintln!(
        "probes: {}  max degree: {}  total degree: {}",
        ledger.count(),
        ledger.max_degree(),
        ledger.total_cost()
    );

    if args.verify {
        let verify_ledger = ProbeLedger::new();
        let ok = zero_test(
            &program,
            &result,
            args.sparsity.max(1),
            args.degree_bound,
            &verify_ledger,
        );
        if ok {
            eprintln!(
                "verify: ok ({} verification probes)",
                verify_ledger.count()
            );
        } else {
            eprintln!("verify: MISMATCH, the output is not the program's polynomial");
            return Ok(ExitCode::from(EXIT_MISMATCH));
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn run_verify(args: VerifyArgs) -> Result<ExitCode, String> {
    let program = load_slp(&args.slp)?;
    let text = fs::read_to_string(&args.candidate)
        .map_err(|e| format!("reading {}: {e}", args.candidate))?;
    let candidate = SparsePoly::parse(&text, program.ring())
        .map_err(|e| format!("{}: {e}", args.candidate))?;
    if args.sparsity < 1 || args.degree_bound < 2 {
        return Err("verification needs sparsity >= 1 and degree bound >= 2".into());
    }
    let ledger = ProbeLedger::new();
    let equal = zero_test(&program, &candidate, args.sparsity, args.degree_bound, &ledger);
    if equal {
        println!("equal ({} probes)", ledger.count());
        Ok(ExitCode::SUCCESS)
    } else {
        println!("not equal ({} probes)", ledger.count());
        Ok(ExitCode::from(EXIT_MISMATCH))
    }
}

fn run_bench(args: BenchArgs) -> Result<ExitCode, String> {
    if args.sparsity_bounds.is_empty() || args.degree_bounds.is_empty() {
        return Err("bench needs nonempty --T and --D grids".into());
    }
    if !(args.mu > 0.0 && args.mu < 1.0) {
        return Err(format!("failure tolerance {} must lie in (0, 1)", args.mu));
    }
    let ring = parse_ring(&args.ring)?;
    let mut cfg = BenchConfig::new(
        args.sparsity_bounds,
        args.degree_bounds,
        args.trials,
        args.mu,
        args.seed,
        ring,
    );
    cfg.dense_execution_cap = args.dense_cap;
    let records = bench::run_sweep(&cfg);
    fs::write(&args.out, bench::to_csv(&records))
        .map_err(|e| format!("writing {}: {e}", args.out))?;
    print!("{}", bench::summarize(&records));
    eprintln!("wrote {} rows to {}", records.len(), args.out);
    Ok(ExitCode::SUCCESS)
}
