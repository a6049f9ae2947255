use std::process::ExitCode;

fn main() -> ExitCode {
    hyperdisk::cli::main()
}
