fn main() {
    std::process::exit(stormscope::cli::run());
}
