fn main() {
    std::process::exit(expsum_lab::cli::run(std::env::args_os()));
}
