fn main() {
    std::process::exit(zimin::cli::run());
}
