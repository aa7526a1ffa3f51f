fn main() {
    std::process::exit(qdt::cli::run(std::env::args()));
}
