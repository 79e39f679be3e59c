fn main() {
    std::process::exit(phwo::cli::main_with_args(std::env::args_os()));
}
