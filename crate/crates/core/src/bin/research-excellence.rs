fn main() {
    std::process::exit(research_excellence::cli::run(std::env::args_os()));
}
