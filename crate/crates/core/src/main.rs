fn main() {
    std::process::exit(dcc::cli::run(std::env::args_os()));
}
