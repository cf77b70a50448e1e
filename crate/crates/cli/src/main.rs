fn main() {
    std::process::exit(optomech_cli::run(std::env::args_os()));
}
