use std::io::Write;
use std::process::ExitCode;

fn main() -> ExitCode {
    let r = pdsa::run(std::env::args_os());
    let _ = std::io::stdout().write_all(&r.stdout);
    eprint!("{}", r.stderr);
    ExitCode::from(r.code)
}
