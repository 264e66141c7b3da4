mod cache;
mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

/// Brane complexes, simple coverings and Hurwitz algebras.
///
/// Class names: degree theories use bracketed cycle types such as `[2,1]`;
/// group theories use the names of the group's conjugacy classes, as printed
/// by `classes`. A vertex over a point takes `pt`; any class may also be
/// given as `k<i>` (its position in `classes` output) or by its raw key.
#[derive(Parser)]
#[command(name = "brane", version)]
struct Cli {
    /// Memoize canonical forms and Hurwitz tables in this directory.
    #[arg(long, global = true, value_name = "DIR")]
    cache: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
#[group(required = true, multiple = false)]
pub struct Theory {
    /// Degree of the coverings.
    #[arg(long)]
    degree: Option<usize>,
    /// Sheet group: C<n>, S<n>, V4, or a multiplication-table file.
    #[arg(long)]
    group: Option<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Check that a file describes a valid complex.
    Validate { file: PathBuf },
    /// Print the link of a vertex.
    Link { file: PathBuf, vertex: String },
    /// Print the certificate cuts of a brane complex.
    Cuts { file: PathBuf },
    /// List covering classes of a graph.
    Classes {
        #[command(flatten)]
        theory: Theory,
        file: PathBuf,
    },
    /// Hurwitz number with prescribed local invariants.
    ///
    /// Vertices without `--at` carry the trivial covering; `--at q=*` leaves
    /// a vertex free.
    Hurwitz {
        #[command(flatten)]
        theory: Theory,
        file: PathBuf,
        #[arg(long = "at", value_name = "VERTEX=CLASS")]
        at: Vec<String>,
        /// Also print the contribution of every covering class.
        #[arg(long)]
        breakdown: bool,
    },
    /// Build the Hurwitz algebra on the sectors of some files.
    ///
    /// A graph file contributes itself and its star; a brane complex
    /// contributes the sectors needed to evaluate it.
    Algebra {
        #[command(flatten)]
        theory: Theory,
        #[arg(long, num_args = 1.., required = true)]
        sectors: Vec<PathBuf>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Run every check on the brane complexes of a directory.
    Verify {
        #[command(flatten)]
        theory: Theory,
        #[arg(long)]
        catalog: PathBuf,
    },
    /// Sphere Hurwitz number from exhaustive tuple counting and, when
    /// available, from the character table.
    Oracle {
        #[command(flatten)]
        theory: Theory,
        /// One class name per branch point.
        #[arg(required = true)]
        classes: Vec<String>,
    },
    /// Write the standard catalog of brane complexes into a directory.
    Catalog { dir: PathBuf },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(cli.command, cli.cache.as_deref()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
