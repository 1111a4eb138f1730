use std::process::ExitCode;

use qchd::Error;

fn main() -> ExitCode {
    let result = qchd::cli::configure_threads().and_then(|()| {
        let stdout = std::io::stdout();
        let mut lock = stdout.lock();
        qchd::cli::run(std::env::args_os(), &mut lock)
    });
    match result {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if matches!(e, Error::Usage(_)) { 2 } else { 1 })
        }
    }
}
