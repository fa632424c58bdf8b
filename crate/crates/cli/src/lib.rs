//! Argument parsing and command dispatch for the `algebench` binary. Every
//! command returns a [`Report`]; the process exits with 0 exactly when the
//! report passes.

use std::path::{Path, PathBuf};

use algebench_core::representation::Method;
use algebench_core::{Error, Limits};
use clap::{Args, Parser, Subcommand, ValueEnum};

pub mod commands;
pub mod gallery;
pub mod report;

pub use report::{Finding, Report, Status};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error("{0}")]
    Usage(String),
}

#[derive(Debug, Parser)]
#[command(
    name = "algebench",
    version,
    about = "Checks endomorphism representations, commutativity and dilatations of finite algebras"
)]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalOpts,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct GlobalOpts {
    /// Master seed for every sampled check.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Samples per sampled law.
    #[arg(long, global = true, default_value_t = 1000)]
    pub samples: u64,
    /// Largest carrier scanned by brute-force enumeration.
    #[arg(long, global = true, default_value_t = 8)]
    pub max_carrier: usize,
    /// Cap on the tables kept by an elementary closure.
    #[arg(long, global = true, default_value_t = 10_000)]
    pub guard_tables: usize,
    /// Emit the report as JSON.
    #[arg(long, global = true, conflicts_with = "text")]
    pub json: bool,
    /// Emit the report as text (the default).
    #[arg(long, global = true)]
    pub text: bool,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

impl Default for GlobalOpts {
    fn default() -> Self {
        GlobalOpts {
            seed: 0,
            samples: 1000,
            max_carrier: 8,
            guard_tables: 10_000,
            json: false,
            text: false,
            out: None,
        }
    }
}

impl GlobalOpts {
    pub fn limits(&self) -> Limits {
        Limits {
            max_carrier: self.max_carrier,
            max_tables: self.guard_tables,
            ..Limits::default()
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Brute,
    Backtrack,
}

impl From<MethodArg> for Method {
    fn from(m: MethodArg) -> Method {
        match m {
            MethodArg::Brute => Method::Brute,
            MethodArg::Backtrack => Method::Backtrack,
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Enumerate the endomorphisms of a tabulated algebra.
    Endos {
        algebra: PathBuf,
        #[arg(long, value_enum, default_value = "backtrack")]
        method: MethodArg,
        /// Include every endomorphism in the report.
        #[arg(long)]
        list: bool,
        /// Also run the other method and compare.
        #[arg(long)]
        cross_check: bool,
    },
    /// Decide whether a frame is a basis and check the elementary criterion.
    Basis {
        algebra: PathBuf,
        frame: PathBuf,
        #[arg(long, value_enum, default_value = "backtrack")]
        method: MethodArg,
    },
    /// Dilatations, indicators and the endowed dilatation monoid.
    Dilatations {
        algebra: PathBuf,
        frame: PathBuf,
        /// Write the endowed monoid as JSON when it exists.
        #[arg(long)]
        emit_monoid: Option<PathBuf>,
    },
    /// Medial law for operations, elementary functions and conjugates.
    Commutative {
        algebra: PathBuf,
        /// Arity of the elementary functions to check.
        #[arg(long = "y", visible_alias = "Y", default_value_t = 1)]
        y: usize,
        /// Frame for the conjugate-function check.
        #[arg(long)]
        frame: Option<PathBuf>,
    },
    /// Worked examples.
    #[command(subcommand)]
    Gallery(GalleryCommand),
}

#[derive(Debug, Subcommand)]
pub enum GalleryCommand {
    /// Powerset union semilattice on up to four points.
    Semilattice {
        #[arg(long, default_value_t = 2)]
        points: usize,
        #[arg(long)]
        export_algebra: Option<PathBuf>,
        #[arg(long)]
        export_frame: Option<PathBuf>,
    },
    /// Free Boolean algebra on one generator.
    Boolean {
        #[arg(long)]
        export_algebra: Option<PathBuf>,
        #[arg(long)]
        export_frame: Option<PathBuf>,
    },
    /// Project schedules; defaults to the four-event diamond project.
    Pert {
        project: Option<PathBuf>,
        /// Run the forward pass.
        #[arg(long)]
        forward: bool,
        /// Event started at time 0; defaults to the first event.
        #[arg(long)]
        seed_event: Option<String>,
        #[arg(long)]
        export_project: Option<PathBuf>,
    },
    /// Additive group of integers.
    Integers,
    /// Additive group of Gaussian integers.
    Gaussian,
}

pub fn run(cli: &Cli) -> Result<Report, CliError> {
    let g = &cli.global;
    match &cli.command {
        Command::Endos {
            algebra,
            method,
            list,
            cross_check,
        } => commands::cmd_endos(g, algebra, (*method).into(), *list, *cross_check),
        Command::Basis {
            algebra,
            frame,
            method,
        } => commands::cmd_basis(g, algebra, frame, (*method).into()),
        Command::Dilatations {
            algebra,
            frame,
            emit_monoid,
        } => commands::cmd_dilatations(g, algebra, frame, emit_monoid.as_deref()),
        Command::Commutative { algebra, y, frame } => {
            commands::cmd_commutative(g, algebra, *y, frame.as_deref())
        }
        Command::Gallery(example) => gallery::cmd_gallery(g, example),
    }
}

/// Writes the report in the selected format to `--out` or stdout.
pub fn emit(report: &Report, opts: &GlobalOpts) -> Result<(), CliError> {
    let text = if opts.json {
        report.to_json() + "\n"
    } else {
        report.to_text()
    };
    match &opts.out {
        Some(path) => std::fs::write(path, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

pub(crate) fn display(path: &Path) -> String {
    path.display().to_string()
}
