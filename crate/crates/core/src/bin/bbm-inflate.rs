fn main() {
    std::process::exit(bbm_inflation::cli::run(std::env::args_os()));
}
