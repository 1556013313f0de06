mod fuzz;
mod verify;

use std::io::Read;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use dipath::diblockage::DualityCertificate;
use dipath::oracle;
use dipath::{Digraph, Error, Generator, Limits, PartialOrientation};
use serde_json::{json, Value};

/// Exit codes shared by every subcommand.
pub mod exit {
    pub const OK: u8 = 0;
    pub const REJECTED: u8 = 1;
    pub const COUNTEREXAMPLE: u8 = 2;
    pub const DIBLOCKAGE: u8 = 3;
    pub const USAGE: u8 = 4;
    pub const SIZE_GUARD: u8 = 5;
}

/// Name of the variable that overrides the size guards, e.g.
/// `DIPATH_LIMITS=enumerate_vertices=16,separations=200000` or `DIPATH_LIMITS=unbounded`.
const LIMITS_VAR: &str = "DIPATH_LIMITS";

#[derive(Parser)]
#[command(name = "dipath", version, about = "Directed path-width, diblockage certificates and arborescence minors")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write a generated digraph as an edge list
    Gen {
        #[command(subcommand)]
        kind: GenKind,
        /// Print DOT instead of an edge list
        #[arg(long)]
        dot: bool,
    },
    /// Exact directed path-width with an optimal decomposition
    Dpw {
        #[arg(short, long)]
        input: PathBuf,
    },
    /// Decide between an S_k-path of width below omega - 1 and an omega-diblockage
    Duality {
        #[arg(short, long)]
        input: PathBuf,
        #[arg(short)]
        k: usize,
        #[arg(short = 'w', long = "omega")]
        omega: usize,
    },
    /// Check any certificate produced by this tool against its digraph
    Verify {
        #[arg(short, long)]
        input: PathBuf,
        #[arg(short, long)]
        cert: PathBuf,
    },
    /// Linked S_k-path of width below omega - 1
    Linked {
        #[arg(short, long)]
        input: PathBuf,
        #[arg(short)]
        k: usize,
        #[arg(short = 'w', long = "omega")]
        omega: usize,
        /// Interleave adhesion sets as extra bags
        #[arg(long)]
        subdivide: bool,
    },
    /// Embed an arborescence as a butterfly minor
    Embed {
        #[arg(short, long)]
        input: PathBuf,
        /// Edge list of the arborescence
        #[arg(short, long)]
        forest: PathBuf,
    },
    /// Differential campaign against the brute-force oracles
    Fuzz {
        #[arg(long, default_value_t = 6)]
        n_max: usize,
        #[arg(long, default_value_t = 200)]
        iters: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 4)]
        workers: usize,
        /// Where a minimized counterexample is written
        #[arg(long, default_value = "fuzz-counterexample.el")]
        out: PathBuf,
    },
    /// Brute-force reference answers
    #[command(hide = true)]
    Oracle {
        #[command(subcommand)]
        query: OracleQuery,
    },
}

#[derive(Subcommand)]
enum GenKind {
    Cycle { n: usize },
    BidirectedComplete { n: usize },
    BidirectedPath { n: usize },
    BidirectedTree { depth: usize },
    Random {
        n: usize,
        #[arg(long, default_value_t = 0.5)]
        p: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    Tournament {
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    Arborescence {
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Subcommand)]
enum OracleQuery {
    Dpw {
        #[arg(short, long)]
        input: PathBuf,
    },
    Spath {
        #[arg(short, long)]
        input: PathBuf,
        #[arg(short)]
        k: usize,
        #[arg(short = 'w', long = "omega")]
        omega: usize,
    },
}

/// A failure reported through the stderr envelope.
#[derive(Debug)]
pub struct Failure {
    code: String,
    detail: String,
    exit: u8,
}

impl Failure {
    pub fn usage(detail: impl Into<String>) -> Self {
        Failure { code: "usage".into(), detail: detail.into(), exit: exit::USAGE }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let exit = match e {
            Error::SizeGuard { .. } => exit::SIZE_GUARD,
            Error::Internal(_) => exit::REJECTED,
            _ => exit::USAGE,
        };
        Failure { code: e.code().into(), detail: e.to_string(), exit }
    }
}

pub type Outcome = Result<u8, Failure>;

fn parse_limits(spec: Option<&str>) -> Result<Limits, Failure> {
    let Some(spec) = spec.map(str::trim).filter(|s| !s.is_empty()) else {
        return Ok(Limits::default());
    };
    if spec == "unbounded" {
        return Ok(Limits::unbounded());
    }
    let mut limits = Limits::default();
    for item in spec.split(',') {
        let (key, value) = item
            .split_once('=')
            .ok_or_else(|| Failure::usage(format!("{LIMITS_VAR}: expected key=value, got `{item}`")))?;
        let value: usize = value
            .trim()
            .parse()
            .map_err(|_| Failure::usage(format!("{LIMITS_VAR}: `{value}` is not a number")))?;
        let slot = match key.trim() {
            "enumerate_vertices" => &mut limits.enumerate_vertices,
            "dpw_vertices" => &mut limits.dpw_vertices,
            "separations" => &mut limits.separations,
            "oracle_vertices" => &mut limits.oracle_vertices,
            other => return Err(Failure::usage(format!("{LIMITS_VAR}: unknown guard `{other}`"))),
        };
        *slot = value;
    }
    Ok(limits)
}

pub fn read_text(path: &Path) -> Result<String, Failure> {
    let io = |e: std::io::Error| Failure { code: "io".into(), detail: format!("{}: {e}", path.display()), exit: exit::USAGE };
    if path == Path::new("-") {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s).map_err(io)?;
        Ok(s)
    } else {
        std::fs::read_to_string(path).map_err(io)
    }
}

pub fn read_digraph(path: &Path) -> Result<Digraph, Failure> {
    Ok(dipath::parse_digraph(&read_text(path)?)?)
}

fn print_json(value: &impl serde::Serialize) {
    println!("{}", serde_json::to_string(value).expect("certificates serialize"));
}

fn run(cli: Cli, limits: &Limits) -> Outcome {
    match cli.command {
        Command::Gen { kind, dot } => {
            let kind = match kind {
                GenKind::Cycle { n } => Generator::Cycle { n },
                GenKind::BidirectedComplete { n } => Generator::BidirectedComplete { n },
                GenKind::BidirectedPath { n } => Generator::BidirectedPath { n },
                GenKind::BidirectedTree { depth } => Generator::BidirectedTree { depth },
                GenKind::Random { n, p, seed } => Generator::RandomDigraph { n, p, seed },
                GenKind::Tournament { n, seed } => Generator::RandomTournament { n, seed },
                GenKind::Arborescence { n, seed } => Generator::RandomArborescence { n, seed },
            };
            let d = dipath::generate(&kind)?;
            print!("{}", if dot { d.to_dot() } else { d.to_edge_list() });
            Ok(exit::OK)
        }
        Command::Dpw { input } => {
            let d = read_digraph(&input)?;
            print_json(&dipath::dpw_exact(&d, limits)?);
            Ok(exit::OK)
        }
        Command::Duality { input, k, omega } => {
            let d = read_digraph(&input)?;
            let cert = dipath::duality_decide(&d, k, omega, &PartialOrientation::empty(k, omega), limits)?;
            print_json(&cert);
            Ok(match cert {
                DualityCertificate::Path { .. } => exit::OK,
                DualityCertificate::Diblockage(_) => exit::DIBLOCKAGE,
            })
        }
        Command::Verify { input, cert } => {
            let d = read_digraph(&input)?;
            let text = read_text(&cert)?;
            let value: Value = serde_json::from_str(&text)
                .map_err(|e| Failure { code: "invalid_input".into(), detail: e.to_string(), exit: exit::USAGE })?;
            let report = verify::check(&d, &value, limits)?;
            print_json(&report.to_json());
            Ok(if report.valid { exit::OK } else { exit::REJECTED })
        }
        Command::Linked { input, k, omega, subdivide } => {
            let d = read_digraph(&input)?;
            let path = dipath::make_linked(&d, k, omega, limits)?;
            if subdivide {
                let bags = dipath::subdivide_adhesion(&d, &path)?;
                print_json(&json!({"kind": "subdivided", "bags": bags.bags()}));
            } else {
                print_json(&json!({"kind": "linked", "k": k, "omega": omega, "chain": path.chain()}));
            }
            Ok(exit::OK)
        }
        Command::Embed { input, forest } => {
            let d = read_digraph(&input)?;
            let f = read_digraph(&forest)?;
            print_json(&dipath::embed_arborescence(&d, &f, limits)?);
            Ok(exit::OK)
        }
        Command::Fuzz { n_max, iters, seed, workers, out } => {
            fuzz::campaign(&fuzz::Config { n_max, iters, seed, workers, out }, limits)
        }
        Command::Oracle { query } => match query {
            OracleQuery::Dpw { input } => {
                let d = read_digraph(&input)?;
                print_json(&json!({"dpw": oracle::dpw_bruteforce(&d, limits)?}));
                Ok(exit::OK)
            }
            OracleQuery::Spath { input, k, omega } => {
                let d = read_digraph(&input)?;
                print_json(&json!({"exists": oracle::exists_spath_bruteforce(&d, k, omega, limits)?}));
                Ok(exit::OK)
            }
        },
    }
}

fn report(failure: &Failure) -> ExitCode {
    eprintln!("{}", json!({"error": failure.code, "detail": failure.detail}));
    ExitCode::from(failure.exit)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            print!("{e}");
            return ExitCode::SUCCESS;
        }
        Err(e) => return report(&Failure::usage(e.render().to_string().trim_end())),
    };
    let outcome = parse_limits(std::env::var(LIMITS_VAR).ok().as_deref()).and_then(|limits| run(cli, &limits));
    match outcome {
        Ok(code) => ExitCode::from(code),
        Err(failure) => report(&failure),
    }
}
