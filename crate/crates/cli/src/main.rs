fn main() {
    std::process::exit(crows_cli::run(std::env::args_os()));
}
