use std::io::{self, Write};
use std::process::ExitCode;

use clap::Parser;
use hammock_cli::{run, Cli, CliError, USAGE_EXIT};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let stdout = io::stdout();
    let stderr = io::stderr();
    let mut out = stdout.lock();
    let mut err = stderr.lock();
    let code = match run(&cli, &mut out, &mut err) {
        Ok(status) => status.exit_code(),
        // A closed downstream pipe (e.g. `| head`) is not a failure.
        Err(CliError::Io(e)) if e.kind() == io::ErrorKind::BrokenPipe => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            USAGE_EXIT
        }
    };
    let _ = out.flush();
    ExitCode::from(code)
}
