use std::process::ExitCode;

fn main() -> ExitCode {
    packscope::cli::run(std::env::args_os())
}
