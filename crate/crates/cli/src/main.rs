use std::io;
use std::process::ExitCode;

use steerkit_cli::config::TOLERANCE_LP_ENV;

fn main() -> ExitCode {
    let env = std::env::var(TOLERANCE_LP_ENV).ok();
    let code = steerkit_cli::main_with(
        std::env::args_os(),
        env.as_deref(),
        &mut io::stdout(),
        &mut io::stderr(),
    );
    ExitCode::from(code as u8)
}
