fn main() {
    std::process::exit(grval::cli::run());
}
