fn main() {
    std::process::exit(commuting_ops::cli::run());
}
