fn main() -> std::process::ExitCode {
    korobov::cli::run(std::env::args_os())
}
