fn main() {
    std::process::exit(decohere_cli::run(std::env::args_os()));
}
