fn main() {
    std::process::exit(diagcat::cli::main_with_args(std::env::args_os()));
}
