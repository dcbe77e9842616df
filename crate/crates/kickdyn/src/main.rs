use std::process::ExitCode;

use kickdyn::cli::emit::{emit, Emittable};
use kickdyn::cli::verify::run_verify;
use kickdyn::cli::{parse_config, CommandKind, RunConfig};
use kickdyn::experiments::{compare_methods, run_contour, run_timeseries, Method};

fn main() -> ExitCode {
    let config = match parse_config(std::env::args()) {
        Ok(config) => config,
        Err(e) => {
            eprintln!("{e}");
            return ExitCode::from(2);
        }
    };
    match run(&config) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}

fn run(config: &RunConfig) -> Result<ExitCode, kickdyn::Error> {
    match config.command {
        CommandKind::Timeseries => {
            let run = run_timeseries(&config.scenario()?)?;
            warn_health(run.meta.health_warnings);
            emit(&Emittable::Timeseries(&run), config.format, config.out.as_deref())?;
        }
        CommandKind::Contour => {
            let grid = run_contour(&config.sweep_spec()?)?;
            emit(&Emittable::Contour(&grid), config.format, config.out.as_deref())?;
        }
        CommandKind::Compare => {
            let scenario = config.scenario()?;
            let report = compare_methods(&scenario, &[scenario.method, Method::NoOrdering])?;
            emit(&Emittable::Comparison(&report), config.format, config.out.as_deref())?;
        }
        CommandKind::Verify => {
            let report = run_verify();
            for check in &report.checks {
                // Timing goes to stderr so the report itself is reproducible
                // byte for byte across invocations.
                println!(
                    "{} {:<32} {}",
                    if check.passed { "PASS" } else { "FAIL" },
                    check.name,
                    check.detail
                );
                eprintln!("# {} took {:.2} s", check.name, check.seconds);
            }
            let failed = report.checks.iter().filter(|c| !c.passed).count();
            if failed > 0 {
                println!("{failed} of {} checks failed", report.checks.len());
                return Ok(ExitCode::from(1));
            }
            println!("all {} checks passed", report.checks.len());
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn warn_health(warnings: usize) {
    if warnings > 0 {
        eprintln!("warning: {warnings} samples exceeded the concurrence clamp budget");
    }
}
