use std::process::ExitCode;

fn main() -> ExitCode {
    graphlink::cli::run(std::env::args_os())
}
