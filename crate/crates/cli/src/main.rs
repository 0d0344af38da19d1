fn main() -> std::process::ExitCode {
    orbipoisson_cli::main_entry()
}
