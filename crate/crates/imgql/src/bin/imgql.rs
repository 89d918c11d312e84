//! Command-line front end.
//!
//! Exit codes: 0 success, 1 usage error, 2 session parse error,
//! 3 evaluation error, 4 I/O error.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use imgql::io::{self, SessionOptions};
use imgql::{Adjacency, Error};

#[derive(Parser)]
#[command(name = "imgql", version, about = "Spatial-logic model checking for medical images")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, Debug, ValueEnum)]
enum AdjacencyArg {
    /// Axis neighbours only (4 in 2D)
    Ortho,
    /// Full 3×3(×3) window (8 in 2D)
    Diag,
    /// Full 5×5(×5) window (24 in 2D)
    Win5,
}

impl From<AdjacencyArg> for Adjacency {
    fn from(a: AdjacencyArg) -> Adjacency {
        match a {
            AdjacencyArg::Ortho => Adjacency::Orthogonal,
            AdjacencyArg::Diag => Adjacency::Orthodiagonal,
            AdjacencyArg::Win5 => Adjacency::Window5,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a session file and write its outputs
    Check {
        /// Session file to run
        session: PathBuf,
        /// Adjacency relation for closure and chamfer distances
        #[arg(long, value_enum, default_value = "diag")]
        adjacency: AdjacencyArg,
        /// Directory to write output volumes to
        #[arg(long)]
        out_dir: Option<PathBuf>,
    },
    /// Normalize a volume by the mean intensity of its significant points
    Normalize {
        /// Input volume (.nii or .png)
        input: PathBuf,
        /// Output volume (.nii, float32)
        output: PathBuf,
        /// Background threshold override (raw intensity units)
        #[arg(long)]
        threshold: Option<f64>,
    },
    /// Dice coefficient between two label volumes
    Dice {
        a: PathBuf,
        b: PathBuf,
        /// Compare only the given label (default: any nonzero value)
        #[arg(long)]
        label: Option<f64>,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // clap's own help/version output goes to stdout with code 0
            let code = if e.exit_code() == 0 { 0 } else { 1 };
            let _ = e.print();
            return ExitCode::from(code as u8);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(match e {
                Error::Parse(_) => 2,
                Error::Eval(_) => 3,
                Error::Load(_) => 4,
            })
        }
    }
}

fn run(cli: Cli) -> Result<(), Error> {
    match cli.command {
        Command::Check {
            session,
            adjacency,
            out_dir,
        } => {
            let opts = SessionOptions {
                adjacency: adjacency.into(),
                out_dir,
            };
            let report = io::run_session(&session, &opts)?;
            for o in &report.outcomes {
                println!(
                    "Check \"{}\" {} -> {} points ({:.1} ms)",
                    o.label, o.source, o.points, o.millis
                );
            }
            if let Some(p) = &report.label_volume {
                println!("wrote {}", p.display());
            }
            if let Some(p) = &report.overlay {
                println!("wrote {}", p.display());
            }
            Ok(())
        }
        Command::Normalize {
            input,
            output,
            threshold,
        } => {
            let vol = io::read_volume(&input)?;
            let (out, report) = io::normalize(&vol, threshold)?;
            io::write_nifti(&output, &out)?;
            println!(
                "threshold {:.6}, mean {:.6} over {} significant points; wrote {}",
                report.threshold,
                report.mean,
                report.significant_points,
                output.display()
            );
            Ok(())
        }
        Command::Dice { a, b, label } => {
            let va = io::read_volume(&a)?;
            let vb = io::read_volume(&b)?;
            let to_set = |v: &imgql::io::Volume| -> Result<imgql::PointSet, Error> {
                let space = std::sync::Arc::new(imgql::GridSpace::new(
                    &v.dims,
                    &v.spacing,
                    Adjacency::Orthodiagonal,
                )?);
                let values = v.attribute_values();
                Ok(imgql::PointSet::from_fn(space, |i| match label {
                    Some(l) => values[i] == l,
                    None => values[i] != 0.0,
                }))
            };
            let sa = to_set(&va)?;
            let sb = to_set(&vb)?;
            let d = io::dice(&sa, &sb)?;
            println!("{d:.6}");
            Ok(())
        }
    }
}
