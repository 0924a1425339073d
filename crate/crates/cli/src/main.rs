//! Command-line front end: exact bounds, visibility sweeps, Bell-diagonal
//! scans, CHSH curves, Monte Carlo emulation, visibility fitting, and the
//! verification suite.

mod output;
mod verify;

use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};

use output::{emit, Field, Format, Table};
use steersd::protocols::{
    alice_directions, single_qubit_bound, single_qubit_bound_grid_oracle,
};
use steersd::steering::{lhs_bound, sweep_werner};
use steersd::{
    bell_diagonal_bound, bell_diagonal_success, build_family, chsh_optimal_settings,
    chsh_parameter, estimate_eta_by_fidelity, simulate_run, two_qubit_success, werner_state,
    ComplexMatrix, DensityMatrix, SUPPORTED_SETTINGS,
};

#[derive(Parser)]
#[command(name = "steersd", version, about = "Subchannel-discrimination steering toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Debug)]
enum SettingsArg {
    All,
    One(usize),
}

fn parse_settings(s: &str) -> Result<SettingsArg, String> {
    if s.eq_ignore_ascii_case("all") {
        return Ok(SettingsArg::All);
    }
    let n: usize = s.parse().map_err(|_| format!("invalid setting count '{s}'"))?;
    if SUPPORTED_SETTINGS.contains(&n) {
        Ok(SettingsArg::One(n))
    } else {
        Err(format!(
            "unsupported setting count {n}; supported: 2, 3, 4, 6, 10 or 'all'"
        ))
    }
}

/// A parsed visibility grid.
#[derive(Clone, Debug)]
struct Grid(Vec<f64>);

/// `start:end:step` (endpoints inclusive within 1e-12) or a single value.
fn parse_grid(s: &str) -> Result<Grid, String> {
    let parts: Vec<&str> = s.split(':').collect();
    match parts.as_slice() {
        [single] => single
            .parse()
            .map(|v| Grid(vec![v]))
            .map_err(|_| format!("invalid value '{s}'")),
        [start, end, step] => {
            let (a, b, h): (f64, f64, f64) = (
                start.parse().map_err(|_| format!("invalid start '{start}'"))?,
                end.parse().map_err(|_| format!("invalid end '{end}'"))?,
                step.parse().map_err(|_| format!("invalid step '{step}'"))?,
            );
            if !h.is_finite() || h <= 0.0 || b < a {
                return Err("grid requires step > 0 and end >= start".into());
            }
            let mut values = Vec::new();
            let mut k = 0usize;
            loop {
                let v = a + k as f64 * h;
                if v > b + 1e-12 {
                    break;
                }
                values.push(v.min(b));
                k += 1;
            }
            Ok(Grid(values))
        }
        _ => Err(format!("expected VALUE or START:END:STEP, got '{s}'")),
    }
}

#[derive(Subcommand)]
enum Command {
    /// Exact single-qubit bounds with grid-oracle cross-checks.
    Bounds {
        /// Setting count (2, 3, 4, 6, 10) or 'all'.
        #[arg(long, value_parser = parse_settings, default_value = "all")]
        settings: SettingsArg,
        /// Bloch-sphere grid size of the oracle.
        #[arg(long, default_value_t = 10_000)]
        grid: usize,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Two-qubit success probability and classification across a visibility grid.
    WernerSweep {
        /// Visibility grid: VALUE or START:END:STEP.
        #[arg(long, value_parser = parse_grid)]
        eta: Grid,
        #[arg(long, value_parser = parse_settings_one)]
        settings: usize,
        /// Append Monte Carlo estimates with this many photon pairs.
        #[arg(long)]
        pairs: Option<u64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Bell-diagonal protocol at one (tx, tz) point (ty = tx).
    BellDiagonal {
        #[arg(long, allow_hyphen_values = true)]
        tx: f64,
        #[arg(long, allow_hyphen_values = true)]
        tz: f64,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// CHSH parameter against the discrimination success probability.
    Chsh {
        /// Visibility grid: VALUE or START:END:STEP.
        #[arg(long, value_parser = parse_grid)]
        eta: Grid,
        #[arg(long, value_parser = parse_settings_one, default_value = "10")]
        settings: usize,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Runs the verification suite; nonzero exit on any failure.
    Verify {
        /// Run every group (the default when no filter is given).
        #[arg(long)]
        all: bool,
        /// Restrict the per-setting groups to one count.
        #[arg(long, value_parser = parse_settings_one, conflicts_with = "all")]
        settings: Option<usize>,
        /// Check only the plate recipes of one setting count.
        #[arg(long, value_parser = parse_settings_one, conflicts_with_all = ["all", "settings"])]
        waveplates: Option<usize>,
    },
    /// Monte Carlo emulation of the coincidence experiment.
    Montecarlo {
        /// Visibility grid: VALUE or START:END:STEP.
        #[arg(long, value_parser = parse_grid)]
        eta: Grid,
        #[arg(long, value_parser = parse_settings_one)]
        settings: usize,
        #[arg(long, default_value_t = 62_500)]
        pairs: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Fits a Werner visibility to a density matrix by maximizing fidelity.
    FitEta {
        /// JSON file holding {"rows":4,"cols":4,"entries":[[re,im],..]}.
        #[arg(long)]
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn parse_settings_one(s: &str) -> Result<usize, String> {
    match parse_settings(s)? {
        SettingsArg::One(n) => Ok(n),
        SettingsArg::All => Err("a single setting count is required here".into()),
    }
}

fn cmd_bounds(settings: &SettingsArg, grid: usize) -> Result<Table> {
    let counts: Vec<usize> = match settings {
        SettingsArg::All => SUPPORTED_SETTINGS.to_vec(),
        SettingsArg::One(n) => vec![*n],
    };
    let mut rows = Vec::new();
    for n in counts {
        let family = build_family(n)?;
        let bound = single_qubit_bound(&family);
        let oracle = single_qubit_bound_grid_oracle(&family, grid);
        let witness = bound.witness.expect("bound always carries a witness");
        rows.push(vec![
            Field::U64(n as u64),
            Field::F64(bound.success_probability),
            Field::F64(oracle),
            Field::F64(lhs_bound(n)?),
            Field::Str(witness.strategy.label()),
            Field::F64(witness.probe.x),
            Field::F64(witness.probe.y),
            Field::F64(witness.probe.z),
        ]);
    }
    Ok(Table {
        columns: vec![
            "n",
            "p_exact",
            "p_oracle",
            "eta_star",
            "strategy",
            "probe_x",
            "probe_y",
            "probe_z",
        ],
        rows,
    })
}

fn cmd_werner_sweep(
    eta: &[f64],
    n: usize,
    pairs: Option<u64>,
    seed: u64,
) -> Result<Table> {
    let records = sweep_werner(eta, n)?;
    let mut columns = vec![
        "eta",
        "n",
        "p_two_qubit",
        "p_single_bound",
        "entangled",
        "steerable",
        "chsh_violating",
        "bell_local",
    ];
    if pairs.is_some() {
        columns.push("p_hat");
        columns.push("std_error");
    }
    let family = build_family(n)?;
    let table = alice_directions(n)?;
    let mut rows = Vec::new();
    for (idx, record) in records.iter().enumerate() {
        let mut row = vec![
            Field::F64(record.eta),
            Field::U64(record.n as u64),
            Field::F64(record.p_two_qubit),
            Field::F64(record.p_single_bound),
            Field::Bool(record.class.entangled),
            Field::Bool(record.class.steerable_at_n),
            Field::Bool(record.class.chsh_violating),
            Field::Bool(record.class.known_bell_local),
        ];
        if let Some(total_pairs) = pairs {
            let estimate = simulate_run(
                &werner_state(record.eta)?,
                &family,
                &table,
                total_pairs,
                seed.wrapping_add(idx as u64),
            )?;
            row.push(Field::F64(estimate.p_hat));
            row.push(Field::F64(estimate.std_error));
        }
        rows.push(row);
    }
    Ok(Table { columns, rows })
}

fn cmd_bell_diagonal(tx: f64, tz: f64) -> Result<Table> {
    let result = bell_diagonal_success(tx, tz)?;
    let bound = bell_diagonal_bound().success_probability;
    let steerable = tx - tz > std::f64::consts::SQRT_2;
    Ok(Table {
        columns: vec!["tx", "tz", "p_success", "p_single_bound", "steerable"],
        rows: vec![vec![
            Field::F64(tx),
            Field::F64(tz),
            Field::F64(result.success_probability),
            Field::F64(bound),
            Field::Bool(steerable),
        ]],
    })
}

fn cmd_chsh(eta: &[f64], n: usize) -> Result<Table> {
    let family = build_family(n)?;
    let table = alice_directions(n)?;
    let settings = chsh_optimal_settings();
    let mut rows = Vec::new();
    for &e in eta {
        let rho = werner_state(e)?;
        let p = two_qubit_success(&rho, &family, &table)?.success_probability;
        let s = chsh_parameter(&rho, &settings)?;
        rows.push(vec![Field::F64(e), Field::F64(p), Field::F64(s)]);
    }
    Ok(Table {
        columns: vec!["eta", "p_two_qubit", "s"],
        rows,
    })
}

fn cmd_montecarlo(eta: &[f64], n: usize, pairs: u64, seed: u64) -> Result<Table> {
    let family = build_family(n)?;
    let table = alice_directions(n)?;
    let mut rows = Vec::new();
    for (idx, &e) in eta.iter().enumerate() {
        let estimate = simulate_run(
            &werner_state(e)?,
            &family,
            &table,
            pairs,
            seed.wrapping_add(idx as u64),
        )?;
        rows.push(vec![
            Field::F64(e),
            Field::U64(n as u64),
            Field::U64(pairs),
            Field::U64(seed.wrapping_add(idx as u64)),
            Field::F64(estimate.p_hat),
            Field::F64(estimate.std_error),
        ]);
    }
    Ok(Table {
        columns: vec!["eta", "n", "total_pairs", "seed", "p_hat", "std_error"],
        rows,
    })
}

fn cmd_fit_eta(input: &PathBuf) -> Result<Table> {
    let text = std::fs::read_to_string(input)
        .with_context(|| format!("reading {}", input.display()))?;
    let matrix: ComplexMatrix = serde_json::from_str(&text)
        .with_context(|| format!("parsing {} as a complex matrix", input.display()))?;
    let rho = DensityMatrix::new(matrix)?;
    let (eta, fidelity) = estimate_eta_by_fidelity(&rho)?;
    Ok(Table {
        columns: vec!["eta", "fidelity"],
        rows: vec![vec![Field::F64(eta), Field::F64(fidelity)]],
    })
}

fn cmd_verify(settings: Option<usize>, waveplates: Option<usize>) -> Result<()> {
    let selection = verify::Selection {
        settings,
        waveplates_only: waveplates,
    };
    let checks = verify::run_selection(&selection)?;
    let mut failures = 0usize;
    for check in &checks {
        let status = if check.pass { "PASS" } else { "FAIL" };
        println!("{status} {}: {}", check.name, check.detail);
        if !check.pass {
            failures += 1;
        }
    }
    println!("{} checks, {} failed", checks.len(), failures);
    if failures > 0 {
        bail!("{failures} verification checks failed");
    }
    Ok(())
}

fn main() {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Bounds {
            settings,
            grid,
            format,
            out,
        } => cmd_bounds(settings, *grid).and_then(|t| emit(&t, *format, out.as_ref())),
        Command::WernerSweep {
            eta,
            settings,
            pairs,
            seed,
            format,
            out,
        } => cmd_werner_sweep(&eta.0, *settings, *pairs, *seed)
            .and_then(|t| emit(&t, *format, out.as_ref())),
        Command::BellDiagonal { tx, tz, format, out } => {
            cmd_bell_diagonal(*tx, *tz).and_then(|t| emit(&t, *format, out.as_ref()))
        }
        Command::Chsh {
            eta,
            settings,
            format,
            out,
        } => cmd_chsh(&eta.0, *settings).and_then(|t| emit(&t, *format, out.as_ref())),
        Command::Verify {
            all: _,
            settings,
            waveplates,
        } => cmd_verify(*settings, *waveplates),
        Command::Montecarlo {
            eta,
            settings,
            pairs,
            seed,
            format,
            out,
        } => cmd_montecarlo(&eta.0, *settings, *pairs, *seed)
            .and_then(|t| emit(&t, *format, out.as_ref())),
        Command::FitEta { input, format, out } => {
            cmd_fit_eta(input).and_then(|t| emit(&t, *format, out.as_ref()))
        }
    };
    if let Err(err) = result {
        eprintln!("error: {err:#}");
        std::process::exit(1);
    }
}
