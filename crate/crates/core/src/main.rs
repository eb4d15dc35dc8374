use std::process::ExitCode;

fn main() -> ExitCode {
    trajsim::cli::main_with_args(std::env::args_os())
}
