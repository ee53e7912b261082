use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};

use gmmn::error::GmmnError;
use gmmn::geom::{decimal_approx, Point, Rational};
use gmmn::io;
use gmmn::rsa::SteinerBackend;
use gmmn::solver::{solve_gmmn, Algorithm, SolverConfig};
use gmmn::svg::render_svg;
use gmmn::toolkit::{
    gen_random, gen_tight, mmn_from_points, ratio_report, GenRandomConfig, ReferenceKind,
};
use gmmn::verifier::verify_instance;

const EXIT_INFEASIBLE: u8 = 1;
const EXIT_PARSE: u8 = 2;
const EXIT_CONFIG: u8 = 3;
const EXIT_SELF_CHECK: u8 = 4;

#[derive(Parser)]
#[command(name = "gmmn", version, about = "Generalized minimum Manhattan networks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum AlgoArg {
    #[value(name = "recursive-d")]
    RecursiveD,
    #[value(name = "improved-2d")]
    Improved2d,
}

impl From<AlgoArg> for Algorithm {
    fn from(a: AlgoArg) -> Algorithm {
        match a {
            AlgoArg::RecursiveD => Algorithm::RecursiveD,
            AlgoArg::Improved2d => Algorithm::Improved2d,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum RsaArg {
    #[value(name = "mst")]
    Mst,
    #[value(name = "exact-small")]
    ExactSmall,
}

impl From<RsaArg> for SteinerBackend {
    fn from(a: RsaArg) -> SteinerBackend {
        match a {
            RsaArg::Mst => SteinerBackend::MstRectilinear,
            RsaArg::ExactSmall => SteinerBackend::ExactSmall,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FamilyArg {
    Tight,
    Random,
    Mmn,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ReferenceArg {
    Oracle,
    Certificate,
    #[value(name = "lower-bound")]
    LowerBound,
}

#[derive(Subcommand)]
enum Command {
    /// Solve an instance file and write the network
    Solve {
        input: PathBuf,
        #[arg(long, value_enum, default_value = "recursive-d")]
        algo: AlgoArg,
        #[arg(long, value_enum, default_value = "mst")]
        rsa: RsaArg,
        #[arg(long)]
        out: PathBuf,
        /// enable the solver's internal parallelism
        #[arg(long)]
        jobs: bool,
        /// skip the output feasibility self-check
        #[arg(long)]
        skip_check: bool,
    },
    /// Check a network against an instance
    Verify {
        instance: PathBuf,
        network: PathBuf,
    },
    /// Generate an instance file
    Gen(GenArgs),
    /// Measure cost ratios against a reference
    Ratio(RatioArgs),
    /// Render a 2D instance (and optional network) as SVG
    Render {
        instance: PathBuf,
        network: Option<PathBuf>,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Args)]
struct GenArgs {
    #[arg(long, value_enum)]
    family: FamilyArg,
    #[arg(long)]
    out: PathBuf,
    /// tight: recursion depth (n = 2^k - 1 pairs)
    #[arg(long, default_value_t = 3)]
    k: usize,
    /// tight: scale parameter, a rational in (0, 1/4)
    #[arg(long, default_value = "1/16")]
    eps: String,
    /// tight: where to write the certificate network
    #[arg(long)]
    cert_out: Option<PathBuf>,
    /// random: number of pairs; mmn: number of points
    #[arg(long, default_value_t = 8)]
    n: usize,
    #[arg(long, default_value_t = 2)]
    dim: usize,
    #[arg(long, default_value_t = -32)]
    lo: i64,
    #[arg(long, default_value_t = 32)]
    hi: i64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct RatioArgs {
    /// instance files to measure
    inputs: Vec<PathBuf>,
    /// comma-separated algorithms
    #[arg(long, value_enum, value_delimiter = ',', default_value = "recursive-d")]
    algos: Vec<AlgoArg>,
    #[arg(long, value_enum, default_value = "lower-bound")]
    reference: ReferenceArg,
    /// reference value when --reference=certificate
    #[arg(long)]
    certificate: Option<String>,
    #[arg(long, value_enum, default_value = "mst")]
    rsa: RsaArg,
}

fn exit_for(err: &GmmnError) -> u8 {
    match err {
        GmmnError::Parse(_) | GmmnError::Io(_) => EXIT_PARSE,
        GmmnError::SelfCheckFailed => EXIT_SELF_CHECK,
        _ => EXIT_CONFIG,
    }
}

fn fail(err: GmmnError) -> ExitCode {
    eprintln!("error: {}", err);
    ExitCode::from(exit_for(&err))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => code,
        Err(e) => fail(e),
    }
}

fn run(cmd: Command) -> gmmn::Result<ExitCode> {
    match cmd {
        Command::Solve {
            input,
            algo,
            rsa,
            out,
            jobs,
            skip_check,
        } => {
            let (inst, warnings) = io::read_instance(&input)?;
            for w in warnings {
                eprintln!("warning: {}", w);
            }
            let cfg = SolverConfig {
                algorithm: algo.into(),
                backend: rsa.into(),
                parallel: jobs,
            };
            let start = Instant::now();
            let net = solve_gmmn(&inst, &cfg)?;
            let elapsed = start.elapsed();
            if !skip_check && !verify_instance(&net, &inst).feasible() {
                return Err(GmmnError::SelfCheckFailed);
            }
            io::write_network(&out, &net)?;
            let cost = net.length();
            println!(
                "n={} d={} cost={} (~{}) time={:.3}s",
                inst.len(),
                inst.dim,
                io::format_rational(&cost),
                decimal_approx(&cost, 12),
                elapsed.as_secs_f64()
            );
            Ok(ExitCode::SUCCESS)
        }
        Command::Verify { instance, network } => {
            let (inst, warnings) = io::read_instance(&instance)?;
            for w in warnings {
                eprintln!("warning: {}", w);
            }
            let net = io::read_network(&network)?;
            let report = verify_instance(&net, &inst);
            if report.feasible() {
                println!("feasible");
                Ok(ExitCode::SUCCESS)
            } else {
                println!("infeasible ({} violated pair(s))", report.violations.len());
                for (pair, kind) in &report.violations {
                    let coords = |p: &Point| {
                        p.coords
                            .iter()
                            .map(io::format_rational)
                            .collect::<Vec<_>>()
                            .join(",")
                    };
                    println!(
                        "violated ({}) -- ({}): {:?}",
                        coords(&pair.a),
                        coords(&pair.b),
                        kind
                    );
                }
                Ok(ExitCode::from(EXIT_INFEASIBLE))
            }
        }
        Command::Gen(args) => run_gen(args),
        Command::Ratio(args) => run_ratio(args),
        Command::Render {
            instance,
            network,
            out,
        } => {
            let (inst, _) = io::read_instance(&instance)?;
            let net = network.map(|p| io::read_network(&p)).transpose()?;
            let svg = render_svg(&inst, net.as_ref())?;
            std::fs::write(&out, svg)?;
            println!("wrote {}", out.display());
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn run_gen(args: GenArgs) -> gmmn::Result<ExitCode> {
    match args.family {
        FamilyArg::Tight => {
            let eps = io::parse_rational(&args.eps)?;
            let fam = gen_tight(args.k, &eps)?;
            let meta = vec![format!("family tight k {} eps {}", args.k, args.eps)];
            io::write_instance(&args.out, &fam.instance, &meta)?;
            let cert_path = args
                .cert_out
                .unwrap_or_else(|| args.out.with_extension("cert.txt"));
            io::write_network(&cert_path, &fam.certificate)?;
            println!(
                "wrote {} ({} pairs) and certificate {} (length {})",
                args.out.display(),
                fam.instance.len(),
                cert_path.display(),
                io::format_rational(&fam.certificate_length)
            );
        }
        FamilyArg::Random => {
            let inst = gen_random(&GenRandomConfig {
                dim: args.dim,
                n_pairs: args.n,
                lo: args.lo,
                hi: args.hi,
                seed: args.seed,
            })?;
            let meta = vec![format!(
                "family random n {} dim {} range {}..{} seed {}",
                args.n, args.dim, args.lo, args.hi, args.seed
            )];
            io::write_instance(&args.out, &inst, &meta)?;
            println!("wrote {} ({} pairs)", args.out.display(), inst.len());
        }
        FamilyArg::Mmn => {
            use rand::{Rng, SeedableRng};
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(args.seed);
            if args.lo >= args.hi {
                return Err(GmmnError::EmptyRange);
            }
            let mut points = Vec::new();
            while points.len() < args.n {
                let p = Point::new(
                    (0..args.dim)
                        .map(|_| gmmn::geom::rat(rng.gen_range(args.lo..=args.hi)))
                        .collect(),
                );
                if !points.contains(&p) {
                    points.push(p);
                }
            }
            let inst = mmn_from_points(args.dim, &points)?;
            let meta = vec![format!(
                "family mmn points {} dim {} range {}..{} seed {}",
                args.n, args.dim, args.lo, args.hi, args.seed
            )];
            io::write_instance(&args.out, &inst, &meta)?;
            println!("wrote {} ({} pairs)", args.out.display(), inst.len());
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn run_ratio(args: RatioArgs) -> gmmn::Result<ExitCode> {
    let reference = match args.reference {
        ReferenceArg::Oracle => ReferenceKind::Oracle,
        ReferenceArg::LowerBound => ReferenceKind::LowerBound,
        ReferenceArg::Certificate => {
            let tok = args.certificate.ok_or_else(|| {
                GmmnError::InvalidConfig("--reference=certificate needs --certificate".into())
            })?;
            ReferenceKind::Certificate(io::parse_rational(&tok)?)
        }
    };
    let algos: Vec<(String, SolverConfig)> = args
        .algos
        .iter()
        .map(|a| {
            let name = match a {
                AlgoArg::RecursiveD => "recursive-d",
                AlgoArg::Improved2d => "improved-2d",
            };
            (
                name.to_string(),
                SolverConfig {
                    algorithm: (*a).into(),
                    backend: args.rsa.into(),
                    parallel: false,
                },
            )
        })
        .collect();
    if args.inputs.is_empty() {
        return Err(GmmnError::InvalidConfig("no instance files given".into()));
    }
    println!("instance\tn\td\talg\tcost\tref\tratio");
    for path in &args.inputs {
        let (inst, _) = io::read_instance(path)?;
        let report = ratio_report(&inst, &algos, &reference)?;
        for row in &report.rows {
            let r: Rational = row.ratio();
            println!(
                "{}\t{}\t{}\t{}\t{}\t{}\t{}",
                path.display(),
                inst.len(),
                inst.dim,
                row.label,
                decimal_approx(&row.cost, 12),
                decimal_approx(row.reference.value(), 12),
                decimal_approx(&r, 12)
            );
        }
    }
    Ok(ExitCode::SUCCESS)
}
