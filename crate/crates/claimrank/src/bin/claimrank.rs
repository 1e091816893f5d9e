fn main() {
    std::process::exit(claimrank::cli::run(std::env::args_os()));
}
