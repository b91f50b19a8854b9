fn main() {
    std::process::exit(fracmech::cli::main_with_args(std::env::args_os()));
}
