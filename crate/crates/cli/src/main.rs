mod args;
mod commands;

use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;
use landmark_core::Error;
use serde_json::json;

use args::Cli;

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Parameter(_) | Error::BudgetExhausted { .. } => 2,
        Error::Data(_) | Error::Domain(_) | Error::Parse { .. } | Error::Io(_) | Error::Json(_) => {
            3
        }
        Error::SweepFailed(_) => 4,
        Error::Invariant(_) => 1,
    }
}

fn kind(e: &Error) -> &'static str {
    match e {
        Error::Parameter(_) => "parameter",
        Error::BudgetExhausted { .. } => "budget_exhausted",
        Error::Data(_) => "data",
        Error::Domain(_) => "domain",
        Error::Parse { .. } => "parse",
        Error::Io(_) => "io",
        Error::Json(_) => "json",
        Error::SweepFailed(_) => "sweep_failed",
        Error::Invariant(_) => "invariant",
    }
}

fn report(kind: &str, message: String, code: u8, details: serde_json::Value) {
    let body = json!({ "error": { "kind": kind, "message": message, "exit_code": code, "details": details } });
    eprintln!("{body}");
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();

    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            report(
                "usage",
                e.render().to_string().trim_end().to_string(),
                2,
                json!(null),
            );
            return ExitCode::from(2);
        }
    };

    match commands::run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let code = exit_code(&e);
            let details = match &e {
                Error::SweepFailed(f) => json!({
                    "required": f.required,
                    "best_coverage": f.best_coverage,
                    "best_threshold": f.best_threshold,
                    "runs_executed": f.runs_executed,
                }),
                Error::Parse { line, .. } => json!({ "line": line }),
                _ => json!(null),
            };
            report(kind(&e), e.to_string(), code, details);
            ExitCode::from(code)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::CommandFactory;

    #[test]
    fn argument_definitions_are_consistent() {
        Cli::command().debug_assert();
    }

    #[test]
    fn exit_codes_by_error_class() {
        assert_eq!(exit_code(&Error::Parameter("x".into())), 2);
        assert_eq!(
            exit_code(&Error::BudgetExhausted {
                issued: 1,
                budget: 1
            }),
            2
        );
        assert_eq!(exit_code(&Error::Data("x".into())), 3);
        assert_eq!(
            exit_code(&Error::Parse {
                line: 1,
                msg: "x".into()
            }),
            3
        );
        assert_eq!(exit_code(&Error::Domain("x".into())), 3);
    }
}
