use std::process::ExitCode;

use clap::Parser;

use reflsos::cli::Cli;
use reflsos::commands::run;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            let body = if cli.global.text {
                out.text
            } else {
                serde_json::to_string_pretty(&out.json).unwrap_or_default() + "\n"
            };
            let written = match &cli.global.output {
                Some(p) => std::fs::write(p, &body).map_err(|e| e.to_string()),
                None => {
                    print!("{}", body);
                    Ok(())
                }
            };
            if let Err(e) = written {
                eprintln!("error: {}", e);
                return ExitCode::from(2);
            }
            if out.ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {}", e);
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
