use std::io::Write;
use std::process::ExitCode;

fn main() -> ExitCode {
    let o = pfg_cli::run_args(std::env::args_os());
    let mut stdout = std::io::stdout().lock();
    let _ = stdout.write_all(o.stdout.as_bytes());
    let _ = stdout.flush();
    let _ = std::io::stderr().write_all(o.stderr.as_bytes());
    ExitCode::from(o.code as u8)
}
