use std::process::ExitCode;

fn main() -> ExitCode {
    fansub::cli::run(std::env::args_os())
}
