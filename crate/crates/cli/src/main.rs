use std::io::Write;
use std::process::ExitCode;

fn main() -> ExitCode {
    let (out, err) = dquiver_cli::run_from(std::env::args_os());
    print!("{}", out.stdout);
    let _ = std::io::stdout().flush();
    eprint!("{err}");
    ExitCode::from(out.code)
}
