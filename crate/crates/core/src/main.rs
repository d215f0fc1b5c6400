fn main() {
    std::process::exit(raag_atlas::cli::main_with_args(std::env::args_os()));
}
