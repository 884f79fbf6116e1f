use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};
use log::{error, info};

use relaxlab::harness::checkpoint::{read_checkpoint, write_checkpoint};
use relaxlab::harness::oracle::oracle_checks;
use relaxlab::harness::sweep::{run_relaxing, SweepResult, TauOutcome};
use relaxlab::harness::{emit_csv, run_sweep, run_unreferenced, Config, Scenario};

#[derive(Parser)]
#[command(name = "relaxlab", version, about = "Relaxing vs relaxed Euler experiments on the periodic torus")]
struct Cli {
    /// Output directory.
    #[arg(long, global = true, default_value = "out")]
    out: PathBuf,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Relaxing runs for every tau; writes eta/energy/layer CSVs and a checkpoint per tau.
    Run { config: PathBuf },
    /// Relaxed reference plus relaxing runs; writes errors/eta/energy/layer CSVs.
    Sweep { config: PathBuf },
    /// Compares the solvers with the linear acoustic and heat-mode oracles.
    OracleCheck { config: PathBuf },
    /// Continues a checkpoint to `--t-end`.
    Resume {
        checkpoint: PathBuf,
        #[arg(long)]
        t_end: f64,
        /// Constants, sampling and step settings; defaults to the built-in scenario.
        #[arg(long)]
        config: Option<PathBuf>,
    },
}

fn load_scenario(path: &Path) -> Result<Scenario> {
    let cfg = Config::load(path).with_context(|| format!("loading {}", path.display()))?;
    Ok(Scenario::from_config(&cfg)?)
}

fn checkpoint_name(tau: f64) -> String {
    format!("tau_{tau:.6}.rlxc")
}

fn report(result: &SweepResult) -> bool {
    for r in &result.runs {
        match &r.result {
            Ok(run) => info!(
                "tau = {}: t = {}, |xi| = {:.3e}, t_star = {:?}",
                r.tau.value(),
                run.summary.t,
                run.summary.xi_l2,
                run.layer.t_star
            ),
            Err(e) => error!("tau = {}: {e}", r.tau.value()),
        }
    }
    result.all_succeeded()
}

fn run(cli: &Cli) -> Result<bool> {
    match &cli.command {
        Command::Sweep { config } => {
            let sc = load_scenario(config)?;
            let result = run_sweep(&sc)?;
            emit_csv(&result, &cli.out)?;
            Ok(report(&result))
        }
        Command::Run { config } => {
            let sc = load_scenario(config)?;
            let result = run_unreferenced(&sc);
            emit_csv(&result, &cli.out)?;
            for r in &result.runs {
                if let Ok(run) = &r.result {
                    write_checkpoint(&run.final_state, r.tau, &cli.out.join(checkpoint_name(r.tau.value())))?;
                }
            }
            Ok(report(&result))
        }
        Command::OracleCheck { config } => {
            let sc = load_scenario(config)?;
            let mut ok = true;
            for c in oracle_checks(&sc)? {
                let verdict = if c.passed() { "PASS" } else { "FAIL" };
                println!("{verdict} {}: error {:.3e} (tolerance {:.1e})", c.name, c.error, c.tolerance);
                ok &= c.passed();
            }
            Ok(ok)
        }
        Command::Resume {
            checkpoint,
            t_end,
            config,
        } => {
            let ck = read_checkpoint(checkpoint, None)?;
            let mut cfg = match config {
                Some(p) => Config::load(p)?,
                None => Config::default_ill_prepared(),
            };
            let g = ck.state.grid();
            if config.is_some() && (cfg.grid.dim, cfg.grid.n_per_dim, cfg.grid.length) != (g.dim(), g.n_per_dim(), g.length()) {
                bail!("checkpoint grid {g:?} does not match the config grid");
            }
            cfg.grid.dim = g.dim();
            cfg.grid.n_per_dim = g.n_per_dim();
            cfg.grid.length = g.length();
            if config.is_none() {
                // modes of the default scenario are 1-d; keep only the settings
                cfg.scenario.xi0.clear();
                cfg.scenario.phi0.clear();
                cfg.scenario.offset.clear();
                cfg.scenario.preparation = relaxlab::harness::config::PreparationKind::Well;
            }
            cfg.sweep.tau_list = vec![ck.tau.value()];
            cfg.sweep.t_end = t_end.max(cfg.sweep.sample_dt);
            let sc = Scenario::from_config(&cfg)?;
            if t_end.is_nan() || *t_end <= ck.state.t {
                bail!("--t-end {t_end} must exceed the checkpoint time {}", ck.state.t);
            }
            let outcome = TauOutcome {
                tau: ck.tau,
                config_hash: sc.config_hash.clone(),
                result: run_relaxing(&sc, ck.tau, &ck.state, *t_end, None),
            };
            if let Ok(run) = &outcome.result {
                std::fs::create_dir_all(&cli.out).with_context(|| format!("creating {}", cli.out.display()))?;
                write_checkpoint(&run.final_state, ck.tau, &cli.out.join("resumed.rlxc"))?;
            }
            let result = SweepResult {
                scenario: format!("resume:{}", checkpoint.display()),
                config_hash: sc.config_hash.clone(),
                sample_times: Vec::new(),
                runs: vec![outcome],
            };
            emit_csv(&result, &cli.out)?;
            Ok(report(&result))
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info")).init();
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            error!("{e:#}");
            ExitCode::from(2)
        }
    }
}
