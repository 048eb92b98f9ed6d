use std::io;
use std::process::ExitCode;

use dca::cli::{run, Io};

fn main() -> ExitCode {
    let mut stdin = io::stdin().lock();
    let mut stdout = io::stdout().lock();
    let mut stderr = io::stderr();
    let code = run(
        std::env::args_os(),
        &mut Io { stdin: &mut stdin, stdout: &mut stdout, stderr: &mut stderr },
    );
    ExitCode::from(code as u8)
}
