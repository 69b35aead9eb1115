use std::io::Write;
use std::process::ExitCode;

fn main() -> ExitCode {
    let argv: Vec<String> = std::env::args().collect();
    let outcome = horncode_cli::run(&argv);
    let text = outcome.stdout();
    // Errors and usage problems go to stderr; results to stdout.
    if outcome.exit_code >= horncode_cli::EXIT_USAGE {
        eprint!("{text}");
    } else {
        print!("{text}");
        std::io::stdout().flush().ok();
    }
    if let Some(path) = &outcome.report_path {
        if let Err(e) = std::fs::write(path, outcome.report.to_json_lines()) {
            eprintln!("error: {}: {e}", path.display());
            return ExitCode::from(horncode_cli::EXIT_INPUT as u8);
        }
    }
    ExitCode::from(outcome.exit_code as u8)
}
