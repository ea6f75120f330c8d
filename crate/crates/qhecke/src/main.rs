fn main() {
    std::process::exit(qhecke::cli::run_from_args(std::env::args_os()));
}
