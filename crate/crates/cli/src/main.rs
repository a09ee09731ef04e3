fn main() {
    std::process::exit(httool::run_cli(std::env::args_os()));
}
