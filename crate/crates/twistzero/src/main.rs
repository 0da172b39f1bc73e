fn main() {
    std::process::exit(twistzero::cli::run());
}
