fn main() {
    std::process::exit(otinf_cli::run());
}
