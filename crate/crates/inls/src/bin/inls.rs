use clap::{Parser, Subcommand};
use std::path::PathBuf;
use std::process::ExitCode;

use inls::classifier::VerdictKind;
use inls::coefficient::{check_conditions, make_coefficient};
use inls::config::RunConfig;
use inls::groundstate::{build_ground_state, compute_h, shoot, v_boundary};
use inls::harness::{self, parse_family};
use inls::params::ProblemParams;
use inls::Result;

#[derive(Parser)]
#[command(
    name = "inls",
    about = "Numerical laboratory for the 3D radial focusing energy-critical \
             inhomogeneous NLS",
    version
)]
struct Cli {
    /// Run-configuration file (sectioned key=value text or JSON)
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Emit machine-readable JSON instead of key=value text
    #[arg(long, global = true)]
    json: bool,

    /// Output directory (overrides config and INLS_OUT_DIR)
    #[arg(long, global = true)]
    out: Option<String>,

    /// Worker threads for sweeps (default: all cores)
    #[arg(long, global = true)]
    threads: Option<usize>,

    /// Run a doubled-resolution companion for verdict cross-checking
    #[arg(long, global = true)]
    refine: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate the coefficient conditions and print the report
    CheckCoefficient,
    /// Print the ground-state invariants for the configured b
    GroundState,
    /// Integrate the radial profile ODE and emit the trajectory as CSV
    Shoot {
        /// Height at the origin
        #[arg(long, default_value_t = 1.0)]
        q0: f64,
        /// Integration endpoint
        #[arg(long, default_value_t = 100.0)]
        r_max: f64,
    },
    /// Run the configured scenario: evolve, classify, and persist
    Evolve,
    /// Execute the configured parameter sweep and emit the phase table
    Sweep,
    /// Run the built-in acceptance suite
    Verify,
}

fn load_config(cli: &Cli) -> Result<RunConfig> {
    match &cli.config {
        Some(path) => RunConfig::parse(&std::fs::read_to_string(path)?),
        None => Ok(RunConfig::default()),
    }
}

fn out_dir(cli: &Cli, cfg: &RunConfig) -> PathBuf {
    PathBuf::from(cfg.resolve_out_dir(cli.out.as_deref()))
}

fn run(cli: &Cli) -> Result<u8> {
    if let Some(threads) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
            .map_err(|e| inls::Error::Config(format!("thread pool: {e}")))?;
    }
    let cfg = load_config(cli)?;
    match &cli.command {
        Command::CheckCoefficient => {
            let params = ProblemParams::new(cfg.params.b)?;
            let coeff = make_coefficient(parse_family(&cfg)?, params, None)?;
            let report = check_conditions(&coeff, &params, 0.0)?;
            if cli.json {
                println!("{}", serde_json::to_string_pretty(&report)?);
            } else {
                print!("{}", report.to_key_values());
            }
            Ok(0)
        }
        Command::GroundState => {
            let gs = build_ground_state(ProblemParams::new(cfg.params.b)?)?;
            if cli.json {
                println!(
                    "{}",
                    serde_json::to_string_pretty(&harness::GroundStateSummary::from(&gs))?
                );
            } else {
                println!("b = {}", cfg.params.b);
                println!("grad_norm_sq = {:.12e}", gs.grad_norm_sq);
                println!("potential_integral = {:.12e}", gs.potential_integral);
                println!("threshold_energy = {:.12e}", gs.threshold_energy);
                println!("best_constant = {:.12e}", gs.best_constant);
            }
            Ok(0)
        }
        Command::Shoot { q0, r_max } => {
            let params = ProblemParams::new(cfg.params.b)?;
            let coeff = make_coefficient(parse_family(&cfg)?, params, None)?;
            let result = shoot(&coeff, *q0, *r_max, &params)?;
            println!("r,Q,Qprime,H,V_int,V_bdry");
            for s in &result.samples {
                let h = compute_h(&coeff, s.r, &params)?;
                let bdry = v_boundary(&coeff, &params, s.r, s.q, s.qp)?;
                println!(
                    "{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e}",
                    s.r, s.q, s.qp, h, s.v, bdry
                );
            }
            if let Some(z) = result.first_zero {
                eprintln!("first zero at r = {z:.10e}");
            }
            Ok(0)
        }
        Command::Evolve => {
            let dir = out_dir(cli, &cfg);
            let record = harness::run_scenario(&cfg, Some(&dir), cli.refine)?;
            let doc = harness::verdict_json(&record);
            if cli.json {
                println!("{}", serde_json::to_string_pretty(&doc)?);
            } else {
                println!("region = {:?}", record.assessment.region);
                println!("verdict = {:?}", record.verdict.kind);
                println!("stop_reason = {:?}", record.stop_reason);
                println!("stop_time = {:.6}", record.stop_time);
                for e in &record.verdict.evidence {
                    println!(
                        "evidence {} = {:?} (margin {:.3e})",
                        e.name, e.status, e.margin
                    );
                }
                if let Some(refined) = &record.refined {
                    println!(
                        "refined verdict = {:?} at t = {:.6} (agrees = {})",
                        refined.verdict, refined.stop_time, refined.agrees
                    );
                }
                println!("outputs in {}", dir.display());
            }
            let truncated =
                record.boundary_reflection || record.initial.truncation_flagged;
            if record.verdict.kind == VerdictKind::Inconclusive && truncated {
                Ok(2)
            } else {
                Ok(0)
            }
        }
        Command::Sweep => {
            let dir = out_dir(cli, &cfg);
            let table = harness::sweep(&cfg, Some(&dir))?;
            print!("{table}");
            Ok(0)
        }
        Command::Verify => {
            let results = harness::verify();
            let all_pass = results.iter().all(|r| r.pass);
            if cli.json {
                println!("{}", serde_json::to_string_pretty(&results)?);
            } else {
                for r in &results {
                    println!("{}", r.line());
                }
            }
            Ok(if all_pass { 0 } else { 1 })
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
