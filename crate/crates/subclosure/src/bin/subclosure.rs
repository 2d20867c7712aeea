use std::io::Write;
use std::process::ExitCode;

fn main() -> ExitCode {
    let outcome = subclosure::run(std::env::args_os());
    eprint!("{}", outcome.diagnostics);
    let written = match &outcome.out {
        Some(path) => std::fs::write(path, &outcome.output),
        None => std::io::stdout().lock().write_all(outcome.output.as_bytes()),
    };
    if let Err(e) = written {
        eprintln!("error: cannot write report: {e}");
        return ExitCode::from(subclosure::app::EXIT_IO as u8);
    }
    ExitCode::from(outcome.code as u8)
}
