fn main() {
    std::process::exit(bellsim_cli::run(std::env::args_os()));
}
