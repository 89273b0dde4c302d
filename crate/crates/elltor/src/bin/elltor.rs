fn main() {
    std::process::exit(elltor::cli::run());
}
