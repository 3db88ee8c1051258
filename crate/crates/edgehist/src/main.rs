fn main() {
    std::process::exit(edgehist::cli::run(std::env::args_os()));
}
