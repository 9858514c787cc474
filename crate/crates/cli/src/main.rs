use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};
use qposes_core::{
    build_unified, count_configurations, decode_state, dense_check, encode_state, enumerate_poses,
    parse_atoms, rasterize, resource_counts, run, verify, verify_against, Circuit, GridSpec,
    OccupancyGrid, PoseSet, RegisterLayout, SparseState, StageOptions,
};

/// Superposed ligand poses on a voxel grid.
///
/// Per-axis values are comma separated in z,y,x order.
#[derive(Parser)]
#[command(name = "qposes", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Bin an atom list (`element x y z [weight]`) into a grid file.
    Rasterize {
        #[arg(long)]
        atoms: PathBuf,
        /// Qubits per axis, z,y,x.
        #[arg(long, value_parser = per_axis)]
        bits: [u32; 3],
        #[arg(long, default_value_t = 1.0)]
        cell: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Emit the unified pose circuit.
    Build {
        /// Lattice taken from this grid file.
        #[arg(long, required_unless_present = "bits", conflicts_with = "bits")]
        grid: Option<PathBuf>,
        /// Qubits per axis, z,y,x.
        #[arg(long, value_parser = per_axis)]
        bits: Option<[u32; 3]>,
        #[command(flatten)]
        stages: Stages,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Encode a grid, run a circuit on it and write the final state.
    Simulate {
        #[arg(long)]
        circuit: PathBuf,
        #[arg(long)]
        grid: PathBuf,
        /// Use the dense state-vector simulator (at most 20 qubits).
        #[arg(long)]
        dense: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Split a simulated state into one grid per control setting.
    Decode {
        #[arg(long)]
        state: PathBuf,
        /// Source grid; fixes the lattice and the weight scale.
        #[arg(long)]
        grid: PathBuf,
        #[command(flatten)]
        stages: Stages,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Classically transform a grid under every control setting.
    Enumerate {
        #[arg(long)]
        grid: PathBuf,
        #[command(flatten)]
        stages: Stages,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compare the simulated superposition with the classical poses.
    Verify {
        #[arg(long)]
        grid: PathBuf,
        #[command(flatten)]
        stages: Stages,
        /// Expected poses; enumerated from the grid when absent.
        #[arg(long)]
        poses: Option<PathBuf>,
    },
    /// Exact number of configurations for the given per-DOF value counts.
    Count {
        #[arg(long, value_delimiter = ',', required = true)]
        dof: Vec<u64>,
    },
    /// Gate and qubit tallies of a circuit file.
    Stats {
        #[arg(long)]
        circuit: PathBuf,
    },
}

#[derive(Args)]
struct Stages {
    /// Translation qubits per axis, z,y,x.
    #[arg(long, value_parser = per_axis, default_value = "0,0,0")]
    t_bits: [u32; 3],
    /// Enable the (x,y), (y,z) and (z,x) coordinate swaps.
    #[arg(long)]
    swaps: bool,
    /// Enable the z, y and x quarter turns.
    #[arg(long)]
    rots: bool,
    /// One control qubit per swap/rotation pair.
    #[arg(long)]
    shared: bool,
}

impl Stages {
    fn options(&self) -> StageOptions {
        StageOptions {
            t_bits: self.t_bits,
            swaps: [self.swaps; 3],
            rots: [self.rots; 3],
            shared_controls: self.shared,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Qasm,
}

fn per_axis(s: &str) -> std::result::Result<[u32; 3], String> {
    let v: Vec<u32> = s
        .split(',')
        .map(|p| p.trim().parse::<u32>().map_err(|e| format!("`{p}`: {e}")))
        .collect::<std::result::Result<_, _>>()?;
    v.try_into()
        .map_err(|v: Vec<u32>| format!("expected three values z,y,x, got {}", v.len()))
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn read_grid(path: &Path) -> Result<OccupancyGrid> {
    OccupancyGrid::parse(&read(path)?).with_context(|| format!("parsing grid {}", path.display()))
}

fn read_circuit(path: &Path) -> Result<Circuit> {
    Circuit::parse(&read(path)?).with_context(|| format!("parsing circuit {}", path.display()))
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => {
            std::io::stdout().write_all(text.as_bytes())?;
            Ok(())
        }
    }
}

/// Returns the process exit status on success (2 for a failed verification).
fn execute(command: Command) -> Result<u8> {
    match command {
        Command::Rasterize { atoms, bits, cell, out } => {
            let atoms = parse_atoms(&read(&atoms)?)?;
            let spec = GridSpec::new(bits[0], bits[1], bits[2], cell)?;
            emit(out.as_deref(), &rasterize(&atoms, &spec)?.to_text())?;
        }
        Command::Build { grid, bits, stages, format, out } => {
            let spec = match (grid, bits) {
                (Some(path), _) => *read_grid(&path)?.spec(),
                (None, Some(b)) => GridSpec::new(b[0], b[1], b[2], 1.0)?,
                (None, None) => bail!("one of --grid or --bits is required"),
            };
            let opts = stages.options();
            let circuit = build_unified(&RegisterLayout::new(spec, &opts)?, &opts)?;
            let text = match format {
                Format::Text => circuit.to_text(),
                Format::Qasm => circuit.to_qasm(),
            };
            emit(out.as_deref(), &text)?;
        }
        Command::Simulate { circuit, grid, dense, out } => {
            let circuit = read_circuit(&circuit)?;
            let grid = read_grid(&grid)?;
            let layout = RegisterLayout::padded(*grid.spec(), circuit.num_qubits())?;
            let initial = encode_state(&grid, &layout)?;
            let state = if dense {
                dense_check(&circuit, &initial)?
            } else {
                run(&circuit, &initial)?
            };
            emit(out.as_deref(), &state.to_text())?;
        }
        Command::Decode { state, grid, stages, out } => {
            let state = SparseState::parse(&read(&state)?).context("parsing state")?;
            let grid = read_grid(&grid)?;
            let layout = RegisterLayout::new(*grid.spec(), &stages.options())?;
            let poses = decode_state(&state, &layout, grid.max_abs_weight())?;
            emit(out.as_deref(), &PoseSet::new(*grid.spec(), poses).to_text())?;
        }
        Command::Enumerate { grid, stages, out } => {
            let grid = read_grid(&grid)?;
            emit(out.as_deref(), &enumerate_poses(&grid, &stages.options())?.to_text())?;
        }
        Command::Verify { grid, stages, poses } => {
            let grid = read_grid(&grid)?;
            let opts = stages.options();
            let layout = RegisterLayout::new(*grid.spec(), &opts)?;
            let report = match poses {
                Some(path) => {
                    let expected = PoseSet::parse(&read(&path)?).context("parsing poses")?;
                    if !expected.source().same_lattice(grid.spec()) {
                        bail!("pose file and grid describe different lattices");
                    }
                    verify_against(&grid, &layout, &opts, &expected)?
                }
                None => verify(&grid, &layout, &opts)?,
            };
            print!("{report}");
            if !report.passed {
                return Ok(2);
            }
        }
        Command::Count { dof } => println!("{}", count_configurations(&dof)?),
        Command::Stats { circuit } => print!("{}", resource_counts(&read_circuit(&circuit)?)),
    }
    Ok(0)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(1),
            };
        }
    };
    match execute(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
