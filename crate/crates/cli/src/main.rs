fn main() {
    std::process::exit(satotate_cli::run_cli(std::env::args_os()));
}
