mod commands;
mod io;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use crate::io::UsageError;

const RENDER_HELP: &str = "\
ASCII pictures put the origin at the bottom left. The first and last rows are
the bounding-box border, with 'o' marking the origin on the bottom border.
Between them comes one row per unit band, top band first. Even columns carry
the vertical lattice lines and odd columns the cells. The upper path is drawn
with '|' for north steps and '_' for east steps (steps along the top edge merge
with the border). Cells are drawn as '#'.";

/// Sandpile operators on graphs, K_{m,n} and K_n, periodic path frames and
/// parallelogram polyominoes.
#[derive(Parser, Debug)]
#[command(name = "sandpile-lab", version, about)]
struct Cli {
    /// TOML file with `general_vertex_cap`, `enumeration_sum_cap`,
    /// `cyclic_sum_cap` and `threads`; flags override it
    #[arg(long, global = true, value_name = "PATH")]
    config_file: Option<PathBuf>,

    /// Worker threads for enumeration (capped by SANDPILE_LAB_THREADS)
    #[arg(long, global = true)]
    threads: Option<usize>,

    /// Output format; `ascii` and `svg` apply to `render` only
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,

    /// Indent JSON output
    #[arg(long, global = true)]
    pretty: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Table,
    Ascii,
    Svg,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum GeneralOp {
    Psi,
    Phi,
    Beta,
    Topple,
    Untopple,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum BipartiteOp {
    Psi,
    Phi,
    TNonsink,
    TSink,
    TNonsinkInverse,
    TSinkInverse,
    RhoBeta,
    Grade,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum KnOp {
    Phi,
    Psi,
    Embed,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum JumpArg {
    Next,
    Prev,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum TargetArg {
    Recurrent,
    Parking,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum KindArg {
    Simple,
    Double,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Report whether a configuration is stable, recurrent and G-parking
    Classify {
        /// Graph JSON ({"vertices":..,"edges":[[a,b],..],"sink":..}) or a file path
        #[arg(long)]
        graph: String,
        /// Heights of v_1..v_n as a JSON array or {"heights":[..]}, or a file path
        #[arg(long)]
        config: String,
    },
    /// Apply an operator to a general-graph or sorted K_{m,n} configuration
    Apply {
        #[arg(long, requires = "config", conflicts_with = "bipartite")]
        graph: Option<String>,
        #[arg(long)]
        config: Option<String>,
        /// Sorted K_{m,n} configuration JSON or a file path
        #[arg(long)]
        bipartite: Option<String>,
        /// psi, phi, beta, topple, untopple on graphs; psi, phi, t-nonsink,
        /// t-sink, t-nonsink-inverse, t-sink-inverse, rho-beta, grade on K_{m,n}
        #[arg(long)]
        op: String,
        /// Vertex for topple and untopple (1-based)
        #[arg(long)]
        vertex: Option<usize>,
    },
    /// Walk a class: the K_{m,n} class walk, or psi/phi iteration on a graph
    Walk {
        #[arg(long, conflicts_with_all = ["graph", "config"])]
        bipartite: Option<String>,
        #[arg(long, requires = "config")]
        graph: Option<String>,
        #[arg(long)]
        config: Option<String>,
        #[arg(long, value_enum, default_value = "recurrent")]
        target: TargetArg,
    },
    /// Inspect a framed path pair: measurement, stable intersections, part
    Frame {
        /// Upper word u'' in B_{m-1,n-1}
        #[arg(long, requires = "lower", conflicts_with_all = ["bipartite", "pair"])]
        upper: Option<String>,
        /// Lower word l' in B_{m-1,n}
        #[arg(long)]
        lower: Option<String>,
        /// Anchor as x,y
        #[arg(long, default_value = "0,0", allow_hyphen_values = true)]
        anchor: String,
        /// Framed pair JSON ({"upper","lower","anchor":[x,y]}) or a file path
        #[arg(long, conflicts_with = "bipartite")]
        pair: Option<String>,
        /// Build the pair of a sorted stable K_{m,n} configuration
        #[arg(long)]
        bipartite: Option<String>,
        /// Move the anchor to a neighbouring stable intersection first
        #[arg(long, value_enum)]
        jump: Option<JumpArg>,
        /// Report pos(E_j) for these indices
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        pos: Vec<i64>,
    },
    /// Check the cyclic lemma on B_{m-1,n-1} x B_{m-1,n}
    CyclicVerify {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        n: usize,
        /// Check this many random pairs instead of all of them
        #[arg(long)]
        sample: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// List parallelogram polyominoes, by bounding box or by lower path
    Enumerate {
        #[arg(long, requires = "n", conflicts_with = "pattern")]
        m: Option<usize>,
        #[arg(long)]
        n: Option<usize>,
        /// Lower path word, starting with E and ending with N
        #[arg(long)]
        pattern: Option<String>,
    },
    /// Closed-form polyomino counts, optionally against brute force
    Count {
        #[arg(long, requires = "n", conflicts_with_all = ["a", "b", "c", "kind"])]
        m: Option<usize>,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long, requires_all = ["b", "c"])]
        a: Option<usize>,
        #[arg(long)]
        b: Option<usize>,
        #[arg(long)]
        c: Option<usize>,
        #[arg(long, value_enum, default_value = "simple")]
        kind: KindArg,
        /// Also count by enumeration
        #[arg(long)]
        brute: bool,
    },
    /// phi and psi on K_n through the staircase embedding
    Kn {
        /// {"n":..,"heights":[..]} or a file path
        #[arg(long)]
        config: String,
        #[arg(long, value_enum, default_value = "phi")]
        op: KnOp,
    },
    /// Draw a polyomino as ASCII art or SVG
    #[command(after_help = RENDER_HELP)]
    Render {
        #[arg(long, requires = "lower", conflicts_with = "bipartite")]
        upper: Option<String>,
        #[arg(long)]
        lower: Option<String>,
        /// Draw the polyomino of the class of a sorted stable K_{m,n} configuration
        #[arg(long)]
        bipartite: Option<String>,
    },
    /// Run the acceptance suite
    Selftest,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match commands::run(cli) {
        Ok(output) => {
            print!("{}", output.text);
            ExitCode::from(output.status)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            if e.downcast_ref::<UsageError>().is_some() {
                ExitCode::from(2)
            } else {
                ExitCode::from(1)
            }
        }
    }
}
