fn main() {
    std::process::exit(xxchain_cli::run(std::env::args_os()));
}
