use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

mod commands;
mod report;

use report::{Report, Status};

/// Lattice quotients, local checks and covering maps.
#[derive(Parser, Debug)]
#[command(name = "ll", version, about)]
struct Cli {
    /// Print reports as JSON.
    #[arg(long, global = true)]
    json: bool,

    /// Worker threads for parallel checks (default: all cores).
    #[arg(long, global = true, env = "LL_THREADS")]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Build a family graph and write its edge list.
    ///
    /// Families: grid P Q, torus P Q DELTA, klein P Q T, strange P Q,
    /// gentorus A B C D, proc1 K L S, proc2 K L C, proc2r K L C,
    /// group FILE, example3, exampled D.
    Build {
        family: String,
        params: Vec<String>,
        /// Edge-list output (stdout when absent).
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Decide whether a graph is (weakly) r-locally L^d.
    Check {
        graph: PathBuf,
        #[arg(short, long)]
        dim: usize,
        #[arg(short, long, default_value_t = 2)]
        radius: usize,
        #[arg(short, long, value_enum, default_value_t = Strength::Strong)]
        strength: Strength,
    },
    /// Construct a covering map L^d -> G and recover its deck group.
    Cover {
        graph: PathBuf,
        #[arg(short, long)]
        dim: usize,
        /// Window radius (default: 4 * diameter + 4).
        #[arg(short, long)]
        radius: Option<usize>,
        #[arg(long, default_value_t = 0)]
        vertex: usize,
        /// Write the assigned cells here.
        #[arg(long)]
        dump: Option<PathBuf>,
    },
    /// Inspect a subgroup of Aut(L^d) given as a group file.
    Group {
        file: PathBuf,
        #[arg(value_enum)]
        action: GroupAction,
        /// Edge-list output for `quotient`.
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Look for a 4-cycle wheel family and classify the glued surface.
    Wheel {
        graph: PathBuf,
        #[arg(long, default_value_t = locally_lattice::surface::DEFAULT_NODE_BUDGET)]
        budget: u64,
    },
    /// The 112-vertex Cayley graph that is 2-locally L^3 but not covered by it.
    Example3 {
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Product extension of the 112-vertex group to dimension D.
    Exampled {
        d: usize,
        #[arg(long, default_value_t = locally_lattice::cayley::DEFAULT_PRODUCT_CAP)]
        cap: usize,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Strength {
    Strong,
    Weak,
    /// The locally-grid condition (ignores dim and radius).
    Grid,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum GroupAction {
    Displacement,
    Rank,
    Torsion,
    Quotient,
    Classify,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("ll: cannot configure {n} threads: {e}");
        }
    }
    let name = command_name(&cli.command);
    let outcome = commands::run(cli.command).unwrap_or_else(|f| {
        let mut r = Report::new(name);
        r.status = Status::Error;
        r.result("error", f.code()).result("message", f.to_string());
        r.into()
    });
    let report = outcome.report;
    let text = if cli.json { report.to_json() + "\n" } else { report.to_text() };
    if let Some(data) = outcome.payload {
        print!("{data}");
        eprint!("{text}");
    } else if report.status == Status::Error && !cli.json {
        eprint!("{text}");
    } else {
        print!("{text}");
    }
    ExitCode::from(report.exit_code() as u8)
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Build { .. } => "build",
        Command::Check { .. } => "check",
        Command::Cover { .. } => "cover",
        Command::Group { .. } => "group",
        Command::Wheel { .. } => "wheel",
        Command::Example3 { .. } => "example3",
        Command::Exampled { .. } => "exampled",
    }
}
