fn main() {
    std::process::exit(lsystems::cli::run(std::env::args_os()));
}
