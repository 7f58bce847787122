//! Command line front end: class polynomials, class group listings, and
//! modular polynomial dumps.
//!
//! Results go to stdout, diagnostics to stderr. Exit code 0 is success, 1 a
//! failed computation or cross-check, 2 a usage error.

use clap::{Args, Parser, Subcommand, ValueEnum};
use classpoly::analytic::hilbert_analytic;
use classpoly::crt::{compute_hilbert, verify_against_oracle, ComputeOptions, HilbertJson};
use classpoly::gfpoly::PolyModP;
use classpoly::inert::{hilbert_mod_q_trivial, supersingular_j_table};
use classpoly::intpoly::IntPoly;
use classpoly::modpoly::{cache_text, ModPolyCache};
use classpoly::orbit::hilbert_mod_p_split;
use classpoly::primesel::{split_witness, PlanPolicy, SplitPrimeWitness};
use classpoly::quadform::{class_number, enumerate_reduced, Discriminant};
use classpoly::Error;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "classpoly",
    version,
    about = "Hilbert class polynomials assembled from curves over prime fields"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute the class polynomial of a discriminant
    Hilbert(HilbertArgs),
    /// List the reduced quadratic forms of a discriminant
    Classgroup(ClassgroupArgs),
    /// Print a modular polynomial in the cache file format
    Modpoly(ModpolyArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Method {
    /// Residues modulo many primes, lifted
    Crt,
    /// Floating-point product over the form class group
    Analytic,
    /// Both routes, cross-checked coefficient by coefficient
    Both,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OutputFormat {
    Text,
    Json,
}

#[derive(Args)]
struct HilbertArgs {
    /// Discriminant, a negative integer congruent to 0 or 1 mod 4
    #[arg(short = 'D', long = "discriminant", allow_hyphen_values = true)]
    d: i64,

    #[arg(long, value_enum, default_value_t = Method::Crt)]
    method: Method,

    /// Print the polynomial modulo this prime instead of over the integers
    #[arg(long)]
    modulus: Option<u64>,

    #[arg(long, value_enum, default_value_t = OutputFormat::Text)]
    output: OutputFormat,

    /// Directory for cached modular polynomials (falls back to MODPOLY_CACHE)
    #[arg(long)]
    cache_dir: Option<PathBuf>,

    /// Seed for the deterministic curve searches
    #[arg(long, default_value_t = 0)]
    seed: u64,

    /// Worker threads for the per-prime stage; 0 picks automatically
    #[arg(long, default_value_t = 0)]
    workers: usize,

    /// Largest witness cofactor v accepted when selecting primes
    #[arg(long, default_value_t = 16)]
    v_max: u64,

    /// Spend no trivial inert primes; every residue comes from curve work
    #[arg(long)]
    split_only: bool,

    /// Append residues to this file and resume from it
    #[arg(long)]
    checkpoint: Option<PathBuf>,
}

#[derive(Args)]
struct ClassgroupArgs {
    /// Discriminant, a negative integer congruent to 0 or 1 mod 4
    #[arg(short = 'D', long = "discriminant", allow_hyphen_values = true)]
    d: i64,

    #[arg(long, value_enum, default_value_t = OutputFormat::Text)]
    output: OutputFormat,
}

#[derive(Args)]
struct ModpolyArgs {
    /// Level, a prime
    #[arg(short = 'l', long = "level")]
    level: u64,

    /// Directory for cached modular polynomials (falls back to MODPOLY_CACHE)
    #[arg(long)]
    cache_dir: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::InvalidDiscriminant(_)
                | Error::NotPrime(_)
                | Error::LevelTooLarge { .. } => ExitCode::from(2),
                _ => ExitCode::from(1),
            }
        }
    }
}

fn run(cli: Cli) -> classpoly::Result<ExitCode> {
    match cli.command {
        Command::Hilbert(args) => run_hilbert(args),
        Command::Classgroup(args) => run_classgroup(args),
        Command::Modpoly(args) => run_modpoly(args),
    }
}

fn run_hilbert(args: HilbertArgs) -> classpoly::Result<ExitCode> {
    let d = Discriminant::new(args.d)?;
    let options = ComputeOptions {
        policy: if args.split_only {
            PlanPolicy::SplitOnly
        } else {
            PlanPolicy::WithTrivialInert
        },
        v_max: args.v_max,
        seed: args.seed,
        workers: args.workers,
        cache_dir: args.cache_dir.clone(),
        checkpoint: args.checkpoint.clone(),
    };
    match args.modulus {
        Some(p) => run_hilbert_mod(&d, p, &args, &options),
        None => run_hilbert_full(&d, &args, &options),
    }
}

fn run_hilbert_full(
    d: &Discriminant,
    args: &HilbertArgs,
    options: &ComputeOptions,
) -> classpoly::Result<ExitCode> {
    let (poly, code) = full_polynomial(d, args.method, options)?;
    match args.output {
        OutputFormat::Text => println!("{}", poly.render()),
        OutputFormat::Json => {
            let json = serde_json::to_string(&HilbertJson::new(d, &poly))
                .expect("string fields always serialize");
            println!("{json}");
        }
    }
    Ok(code)
}

/// The integer polynomial by the requested route. For `both` the lifted
/// polynomial is cross-checked against the analytic one; a disagreement
/// reports every mismatched coefficient index and flips the exit code.
fn full_polynomial(
    d: &Discriminant,
    method: Method,
    options: &ComputeOptions,
) -> classpoly::Result<(IntPoly, ExitCode)> {
    match method {
        Method::Crt => Ok((compute_hilbert(d, options)?, ExitCode::SUCCESS)),
        Method::Analytic => Ok((hilbert_analytic(d, 0)?, ExitCode::SUCCESS)),
        Method::Both => {
            let lifted = compute_hilbert(d, options)?;
            let report = verify_against_oracle(d, &lifted)?;
            if report.passed() {
                eprintln!("cross-check passed: both routes agree");
                Ok((lifted, ExitCode::SUCCESS))
            } else {
                eprintln!(
                    "cross-check FAILED at coefficient indices {:?}",
                    report.mismatches()
                );
                Ok((lifted, ExitCode::from(1)))
            }
        }
    }
}

fn run_hilbert_mod(
    d: &Discriminant,
    p: u64,
    args: &HilbertArgs,
    options: &ComputeOptions,
) -> classpoly::Result<ExitCode> {
    if !classpoly::primesel::is_probable_prime(p) {
        return Err(Error::NotPrime(p));
    }
    let cache = ModPolyCache::from_env_or(options.cache_dir.clone());
    let (residue, code) = match args.method {
        Method::Crt => match direct_residue(d, p, options.seed, &cache)? {
            Some(poly) => (poly, ExitCode::SUCCESS),
            None => {
                let poly = compute_hilbert(d, options)?;
                (poly.reduce_mod(p), ExitCode::SUCCESS)
            }
        },
        Method::Analytic => (hilbert_analytic(d, 0)?.reduce_mod(p), ExitCode::SUCCESS),
        Method::Both => {
            let (poly, code) = full_polynomial(d, Method::Both, options)?;
            (poly.reduce_mod(p), code)
        }
    };
    match args.output {
        OutputFormat::Text => println!("{residue}"),
        OutputFormat::Json => {
            let coeffs: Vec<String> = (0..residue.degree().map_or(1, |deg| deg + 1))
                .map(|i| residue.coeff(i).to_string())
                .collect();
            let value = serde_json::json!({
                "D": d.value().to_i64(),
                "p": p,
                "h": residue.degree().map_or(0, |deg| deg as u64),
                "coeffs": coeffs,
            });
            println!("{value}");
        }
    }
    Ok(code)
}

/// A residue straight from the per-prime machinery when p supports it: the
/// one-line table route for a trivial inert prime, the full curve walk for a
/// split prime with a witness. None means the caller must assemble the whole
/// polynomial and reduce it.
fn direct_residue(
    d: &Discriminant,
    p: u64,
    seed: u64,
    cache: &ModPolyCache,
) -> classpoly::Result<Option<PolyModP>> {
    if supersingular_j_table().iter().any(|&(q, _)| q == p) && d.symbol(p) == -1 {
        return hilbert_mod_q_trivial(d, p).map(Some);
    }
    match split_witness(d, p) {
        Ok(Some(_)) => {
            let witness = SplitPrimeWitness::allowing_small_prime(d, p)?;
            hilbert_mod_p_split(d, &witness, seed, cache).map(Some)
        }
        Ok(None) => Ok(None),
        Err(Error::DividesDiscriminant { .. }) => Ok(None),
        Err(e) => Err(e),
    }
}

fn run_classgroup(args: ClassgroupArgs) -> classpoly::Result<ExitCode> {
    let d = Discriminant::new(args.d)?;
    let forms = enumerate_reduced(&d);
    match args.output {
        OutputFormat::Text => {
            for form in &forms {
                println!("({}, {}, {})", form.a(), form.b(), form.c());
            }
        }
        OutputFormat::Json => {
            let triples: Vec<Vec<i64>> = forms
                .iter()
                .map(|f| {
                    vec![
                        f.a().to_i64().expect("reduced coefficients are small"),
                        f.b().to_i64().expect("reduced coefficients are small"),
                        f.c().to_i64().expect("reduced coefficients are small"),
                    ]
                })
                .collect();
            let value = serde_json::json!({
                "D": d.value().to_i64(),
                "h": class_number(&d),
                "forms": triples,
            });
            println!("{value}");
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn run_modpoly(args: ModpolyArgs) -> classpoly::Result<ExitCode> {
    let cache = ModPolyCache::from_env_or(args.cache_dir);
    let phi = cache.get(args.level)?;
    print!("{}", cache_text(&phi));
    Ok(ExitCode::SUCCESS)
}
