fn main() {
    std::process::exit(bowmonad::cli::run(std::env::args_os()));
}
