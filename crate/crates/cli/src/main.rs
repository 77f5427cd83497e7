fn main() {
    std::process::exit(tentlab_cli::run_command(std::env::args_os().skip(1)));
}
