//! Command-line front end: loads scenario files, dispatches to the
//! market solvers, sweeps, and threshold searches, and emits
//! deterministic CSV or human-readable summaries.
//!
//! Exit codes: 0 success, 1 write failure or failed verification, 2
//! scenario parse error, 3 solver error, 4 threshold bracket without a
//! sign change.

mod csv;
mod figures;
mod scenario;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use lteu_market::{
    effective_bands, find_threshold, solve, verify_nash, welfare_report, Bandwidth, Comparison,
    MarketConfig, SweepResult, ThresholdQuery,
};
use scenario::{CliError, Scenario};

#[derive(Parser)]
#[command(
    name = "lteu-market",
    version,
    about = "Equilibrium solver for duty-cycle spectrum-sharing markets"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Solve one scenario; print summaries with the carrier off and on.
    Solve { scenario: PathBuf },
    /// Sweep a parameter per the scenario's [run] table; write CSV.
    Sweep { scenario: PathBuf },
    /// Find where a metric difference (carrier on minus off) crosses zero.
    Threshold { scenario: PathBuf },
    /// Write a named preset curve as CSV (fig2, fig3a, ..., fig8).
    Figure {
        name: String,
        /// Output path; defaults to <name>.csv.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Grid-scan a solved scenario for profitable unilateral deviations.
    Verify {
        scenario: PathBuf,
        /// Prices tried per strategic coordinate.
        #[arg(long, default_value_t = 2000)]
        grid: usize,
        /// Largest tolerated revenue improvement.
        #[arg(long, default_value_t = 1e-4)]
        eps: f64,
    },
}

fn main() -> ExitCode {
    match dispatch(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(err.exit_code())
        }
    }
}

fn dispatch(cli: Cli) -> Result<(), CliError> {
    match cli.cmd {
        Cmd::Solve { scenario } => cmd_solve(&scenario),
        Cmd::Sweep { scenario } => cmd_sweep(&scenario),
        Cmd::Threshold { scenario } => cmd_threshold(&scenario),
        Cmd::Figure { name, out } => cmd_figure(&name, out),
        Cmd::Verify {
            scenario,
            grid,
            eps,
        } => cmd_verify(&scenario, grid, eps),
    }
}

fn cmd_solve(path: &Path) -> Result<(), CliError> {
    let sc = scenario::load(path)?;
    let cfg = &sc.cfg;
    println!("scenario: {}", path.display());
    println!(
        "regime: {} ({} entrants), B = {}, W = {}, alpha = {}, beta = {}, gamma = {}",
        cfg.regime.name(),
        cfg.n_entrants,
        cfg.licensed_bw,
        match cfg.unlicensed_bw {
            Bandwidth::Finite(w) => w.to_string(),
            Bandwidth::Asymptotic => "inf".into(),
        },
        cfg.duty_cycle,
        cfg.lteu_share,
        cfg.efficiency,
    );

    print_block("without carrier", &cfg.clone().without_lteu(), &sc)?;
    let mut on = cfg.clone();
    on.lteu_enabled = true;
    let title = format!(
        "with carrier (alpha = {}, beta = {})",
        on.duty_cycle, on.lteu_share
    );
    print_block(&title, &on, &sc)
}

fn print_block(title: &str, cfg: &MarketConfig, sc: &Scenario) -> Result<(), CliError> {
    let bands = effective_bands(cfg)?;
    let out = solve(cfg, &sc.congestion, &sc.demand)?;
    let report = welfare_report(&out, &sc.demand);
    println!();
    println!("{title}:");
    match bands.unlicensed {
        Bandwidth::Finite(w) => {
            println!(
                "  effective bands: licensed {:.6}, open {:.6}",
                bands.licensed, w
            )
        }
        Bandwidth::Asymptotic => {
            println!(
                "  effective bands: licensed {:.6}, open unbounded",
                bands.licensed
            )
        }
    }
    println!(
        "  p1 = {:.6}   x1 = {:.6}   p_ent = {:.6}   w_t = {:.6}",
        out.incumbent_price, out.incumbent_mass, out.open_band_price, out.open_band_mass
    );
    println!(
        "  revenue_inc = {:.6}   revenue_ent = {:.6}",
        out.incumbent_revenue, out.entrant_revenue
    );
    println!(
        "  delivered_price = {:.6}   total_mass = {:.6}",
        out.delivered_price,
        out.total_mass()
    );
    println!(
        "  cs = {:.6}   sw = {:.6}",
        report.consumer_surplus, report.social_welfare
    );
    Ok(())
}

fn cmd_sweep(path: &Path) -> Result<(), CliError> {
    let sc = scenario::load(path)?;
    let grid = sc.run.grid(path)?;
    let result = if let Some(k) = sc.run.fixed_k {
        lteu_market::fixed_k_sweep(&sc.cfg, k, &grid, &sc.congestion, &sc.demand)?
    } else {
        let axis = sc.run.axis(path)?;
        lteu_market::sweep(&sc.cfg, axis, &grid, &sc.congestion, &sc.demand)?
    };
    emit_csv(&result, sc.run.out.as_deref())
}

fn cmd_threshold(path: &Path) -> Result<(), CliError> {
    let sc = scenario::load(path)?;
    let query = ThresholdQuery {
        metric: sc.run.metric(path)?,
        comparison: Comparison::LteuVsOff,
        axis: sc.run.axis(path)?,
        bracket: sc.run.bracket(path)?,
        base: sc.cfg.clone(),
    };
    let found = find_threshold(&query, &sc.congestion, &sc.demand)?;
    println!("metric: {}", query.metric.name());
    println!("axis: {}", query.axis.name());
    println!("bracket: [{:e}, {:e}]", query.bracket.0, query.bracket.1);
    println!("difference at bracket lo = {:.11e}", found.diff_lo);
    println!("difference at bracket hi = {:.11e}", found.diff_hi);
    println!("crossing: {} = {:.11e}", query.axis.name(), found.value);
    Ok(())
}

fn cmd_figure(name: &str, out: Option<PathBuf>) -> Result<(), CliError> {
    let Some(result) = figures::run(name) else {
        return Err(CliError::Parse(format!(
            "unknown figure preset `{name}` (expected one of {})",
            figures::NAMES.join(", ")
        )));
    };
    let result: SweepResult = result?;
    let path = out.unwrap_or_else(|| PathBuf::from(format!("{name}.csv")));
    emit_csv(&result, Some(&path))?;
    eprintln!(
        "{name}: {} -> {}",
        figures::describe(name).unwrap(),
        path.display()
    );
    Ok(())
}

fn cmd_verify(path: &Path, grid: usize, eps: f64) -> Result<(), CliError> {
    let sc = scenario::load(path)?;
    let out = solve(&sc.cfg, &sc.congestion, &sc.demand)?;
    let report = verify_nash(&out, &sc.cfg, &sc.congestion, &sc.demand, grid, eps)?;
    println!("deviation scan: grid {grid}, eps {eps:e}");
    for scan in &report.scans {
        println!(
            "  {:<30} base {:.9}  best {:.9} at price {:.9}  improvement {:+.3e}",
            scan.actor, scan.base_revenue, scan.best_revenue, scan.best_price, scan.improvement
        );
    }
    if report.passed {
        println!(
            "result: pass (max improvement {:+.3e} <= eps)",
            report.max_improvement
        );
        Ok(())
    } else {
        println!(
            "result: FAIL (max improvement {:+.3e} > eps)",
            report.max_improvement
        );
        Err(CliError::VerifyFailed(format!(
            "profitable deviation of {:+.3e} found (eps {eps:e})",
            report.max_improvement
        )))
    }
}

fn emit_csv(result: &SweepResult, out: Option<&Path>) -> Result<(), CliError> {
    let text = csv::render(result);
    match out {
        Some(path) => fs::write(path, text)
            .map_err(|e| CliError::Io(format!("{}: cannot write: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}
