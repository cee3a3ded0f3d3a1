fn main() {
    std::process::exit(lorheis_cli::execute(std::env::args_os()));
}
