//! Command-line entry point: experiment runs, parser checks, and scripting
//! access to the projection / LP / slope utilities.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use oofl_cli::emit::{
    plot_rows, write_ledger_csv, write_plot_csv, write_summary_json, write_svg, PlotRow,
    SummaryDocument,
};
use oofl_cli::experiments::{run_replicated, slope_of_avg_series};
use oofl_cli::formats::{parse_tntp, parse_tsplib_lite};
use oofl_cli::{ExperimentConfig, HarnessError};
use oofl_core::lp::{solve_lp, DenseLp, LpStatus};
use oofl_core::projections::{project, FeasibleObjectiveSet};

#[derive(Parser)]
#[command(name = "oofl", version, about = "Learn linear objectives from observed optimal decisions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum FileFormat {
    Tntp,
    Tsplib,
}

#[derive(Clone, Copy, ValueEnum)]
enum SetKind {
    Simplex,
    Box,
    Ball,
}

#[derive(Subcommand)]
enum Command {
    /// Run a configured experiment and write ledgers, summary, and plot data.
    Run {
        #[arg(long)]
        config: PathBuf,
    },
    /// Parse an instance file and report what it contains.
    ParseCheck {
        #[arg(long, value_enum)]
        format: FileFormat,
        path: PathBuf,
        /// Node ids at or below this are treated as zones (network files).
        #[arg(long)]
        zone_id_threshold: Option<usize>,
    },
    /// Project a vector onto a feasible objective set.
    Project {
        #[arg(long, value_enum)]
        set: SetKind,
        /// Comma-separated coordinates, e.g. "1.2,0.4".
        #[arg(long)]
        vector: String,
        /// Box lower corner (comma-separated).
        #[arg(long)]
        lo: Option<String>,
        /// Box upper corner (comma-separated).
        #[arg(long)]
        hi: Option<String>,
        /// Ball center (comma-separated).
        #[arg(long)]
        center: Option<String>,
        /// Ball radius.
        #[arg(long)]
        radius: Option<f64>,
    },
    /// Solve a dense LP described by a JSON file.
    LpSolve {
        #[arg(long)]
        file: PathBuf,
    },
    /// Fit the log-log slope of the average total error in a ledger CSV.
    Slope {
        #[arg(long)]
        csv: PathBuf,
        #[arg(long)]
        from: usize,
        #[arg(long)]
        to: usize,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            // Usage problems exit with 1; --help/--version print and exit 0.
            let code = if err.use_stderr() { 1 } else { 0 };
            let _ = err.print();
            return ExitCode::from(code);
        }
    };
    match dispatch(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(err.exit_code() as u8)
        }
    }
}

fn dispatch(cli: Cli) -> Result<(), HarnessError> {
    match cli.command {
        Command::Run { config } => run_experiment(&config),
        Command::ParseCheck { format, path, zone_id_threshold } => parse_check(format, &path, zone_id_threshold),
        Command::Project { set, vector, lo, hi, center, radius } => project_cmd(set, &vector, lo, hi, center, radius),
        Command::LpSolve { file } => lp_solve_cmd(&file),
        Command::Slope { csv, from, to } => slope_cmd(&csv, from, to),
    }
}

fn run_experiment(config_path: &Path) -> Result<(), HarnessError> {
    let config = ExperimentConfig::load(config_path)?;
    let output = run_replicated(&config)?;
    let out_dir = PathBuf::from(&config.output_dir);
    std::fs::create_dir_all(&out_dir).map_err(|e| HarnessError::io(out_dir.display().to_string(), e))?;

    for (rep, ledger) in output.ledgers.iter().enumerate() {
        write_ledger_csv(ledger, &out_dir.join(format!("ledger_{rep}.csv")))?;
    }
    let doc = SummaryDocument { seed: config.seed, config: config.clone(), table: output.summary.clone() };
    write_summary_json(&doc, &out_dir.join("summary.json"))?;

    // Plot data: the mean average-total-error curve with the active bound.
    let rounds = output.ledgers[0].rounds();
    let per_rep: Vec<Vec<PlotRow>> = output
        .ledgers
        .iter()
        .zip(&output.bounds)
        .map(|(ledger, bounds)| plot_rows(ledger, config.learner, bounds))
        .collect::<Result<_, _>>()?;
    let mean_rows: Vec<PlotRow> = (0..rounds)
        .map(|i| PlotRow {
            round: i + 1,
            avg_total_error: per_rep.iter().map(|rows| rows[i].avg_total_error).sum::<f64>()
                / per_rep.len() as f64,
            bound_value: per_rep[0][i].bound_value,
        })
        .collect();
    write_plot_csv(&mean_rows, &out_dir.join("plot_data.csv"))?;

    if config.emit_svg {
        let avg_series: Vec<(f64, f64)> =
            mean_rows.iter().map(|r| (r.round as f64, r.avg_total_error)).collect();
        let mut series = vec![("mean avg total error", avg_series)];
        let bound_series: Vec<(f64, f64)> = mean_rows
            .iter()
            .filter_map(|r| r.bound_value.map(|b| (r.round as f64, b)))
            .collect();
        if !bound_series.is_empty() {
            series.push(("bound", bound_series));
        }
        write_svg(&series, "average total error", &out_dir.join("plot.svg"))?;
    }

    println!(
        "wrote {} ledger(s), summary.json and plot_data.csv to {}",
        output.ledgers.len(),
        out_dir.display()
    );
    for (cp, mean) in doc.table.checkpoints.iter().zip(&doc.table.mean_avg_total) {
        println!("checkpoint {cp}: mean avg total error {mean:.6}");
    }
    Ok(())
}

fn parse_check(format: FileFormat, path: &Path, zone_id_threshold: Option<usize>) -> Result<(), HarnessError> {
    let text = std::fs::read_to_string(path).map_err(|e| HarnessError::io(path.display().to_string(), e))?;
    match format {
        FileFormat::Tntp => {
            let network = parse_tntp(&text, zone_id_threshold)?;
            println!(
                "network: {} nodes, {} arcs after zone exclusion",
                network.node_count,
                network.arcs.len()
            );
        }
        FileFormat::Tsplib => {
            let instance = parse_tsplib_lite(&text)?;
            println!(
                "tour instance: dimension {}, depot {}, {} prize entries",
                instance.dimension,
                instance.depot,
                instance.prizes.len()
            );
        }
    }
    Ok(())
}

fn parse_vector(text: &str, what: &str) -> Result<Vec<f64>, HarnessError> {
    text.split(',')
        .map(|part| {
            part.trim()
                .parse::<f64>()
                .map_err(|_| HarnessError::Config(format!("{what}: `{part}` is not a number")))
        })
        .collect()
}

fn project_cmd(
    set: SetKind,
    vector: &str,
    lo: Option<String>,
    hi: Option<String>,
    center: Option<String>,
    radius: Option<f64>,
) -> Result<(), HarnessError> {
    let v = parse_vector(vector, "--vector")?;
    let set = match set {
        SetKind::Simplex => FeasibleObjectiveSet::UnitSimplex(v.len()),
        SetKind::Box => {
            let lo = parse_vector(&lo.ok_or_else(|| HarnessError::Config("--set box needs --lo".into()))?, "--lo")?;
            let hi = parse_vector(&hi.ok_or_else(|| HarnessError::Config("--set box needs --hi".into()))?, "--hi")?;
            FeasibleObjectiveSet::Box { lo, hi }
        }
        SetKind::Ball => {
            let center = parse_vector(
                &center.ok_or_else(|| HarnessError::Config("--set ball needs --center".into()))?,
                "--center",
            )?;
            let radius = radius.ok_or_else(|| HarnessError::Config("--set ball needs --radius".into()))?;
            FeasibleObjectiveSet::L2Ball { center, radius }
        }
    };
    let projected = project(&v, &set)?;
    let rendered: Vec<String> = projected.iter().map(|x| format!("{x}")).collect();
    println!("{}", rendered.join(","));
    Ok(())
}

/// JSON schema of the `lp-solve` input.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct LpFile {
    objective: Vec<f64>,
    #[serde(default)]
    equalities: Vec<LpRowFile>,
    #[serde(default)]
    inequalities: Vec<LpRowFile>,
    /// Per-variable lower bounds; null entries mean unbounded below.
    #[serde(default)]
    lower_bounds: Option<Vec<Option<f64>>>,
    /// Per-variable upper bounds; null entries mean unbounded above.
    #[serde(default)]
    upper_bounds: Option<Vec<Option<f64>>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct LpRowFile {
    coeffs: Vec<f64>,
    rhs: f64,
}

#[derive(Debug, Serialize)]
struct LpResultFile {
    status: &'static str,
    point: Vec<f64>,
    value: Option<f64>,
}

fn lp_solve_cmd(path: &Path) -> Result<(), HarnessError> {
    let text = std::fs::read_to_string(path).map_err(|e| HarnessError::io(path.display().to_string(), e))?;
    let file: LpFile =
        serde_json::from_str(&text).map_err(|e| HarnessError::Config(format!("{}: {e}", path.display())))?;
    let mut lp = DenseLp::new(file.objective);
    for row in file.equalities {
        lp.push_eq(row.coeffs, row.rhs);
    }
    for row in file.inequalities {
        lp.push_ub(row.coeffs, row.rhs);
    }
    if let Some(lower) = file.lower_bounds {
        if lower.len() != lp.num_vars() {
            return Err(HarnessError::Config("lower_bounds length mismatch".into()));
        }
        lp.var_lower = lower.into_iter().map(|b| b.unwrap_or(f64::NEG_INFINITY)).collect();
    }
    if let Some(upper) = file.upper_bounds {
        if upper.len() != lp.num_vars() {
            return Err(HarnessError::Config("upper_bounds length mismatch".into()));
        }
        lp.var_upper = upper.into_iter().map(|b| b.unwrap_or(f64::INFINITY)).collect();
    }
    let solution = solve_lp(&lp)?;
    let result = LpResultFile {
        status: match solution.status {
            LpStatus::Optimal => "optimal",
            LpStatus::Infeasible => "infeasible",
            LpStatus::Unbounded => "unbounded",
        },
        point: solution.point,
        value: match solution.status {
            LpStatus::Optimal => Some(solution.value),
            _ => None,
        },
    };
    println!("{}", serde_json::to_string_pretty(&result)?);
    Ok(())
}

fn slope_cmd(csv: &Path, from: usize, to: usize) -> Result<(), HarnessError> {
    let rows = oofl_cli::emit::read_ledger_csv(csv)?;
    let series: Vec<f64> = rows
        .iter()
        .map(|row| {
            row.avg_total_error.ok_or_else(|| {
                HarnessError::Config("ledger has no average total error column values".into())
            })
        })
        .collect::<Result<_, _>>()?;
    let slope = slope_of_avg_series(&series, (from, to))?;
    println!("{slope}");
    Ok(())
}
