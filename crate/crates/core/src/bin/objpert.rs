fn main() {
    std::process::exit(objpert::harness::cli::run(std::env::args()));
}
