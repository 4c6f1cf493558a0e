fn main() {
    std::process::exit(cahiers::cli::run(std::env::args_os()));
}
