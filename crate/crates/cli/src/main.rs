fn main() {
    std::process::exit(qmlab_cli::run(std::env::args()));
}
