fn main() {
    std::process::exit(gravity_toolkit::cli::run(std::env::args_os()));
}
