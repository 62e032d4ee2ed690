fn main() {
    std::process::exit(prar::cli::run(std::env::args_os()));
}
