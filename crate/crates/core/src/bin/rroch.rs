fn main() {
    std::process::exit(rroch::cli::run());
}
