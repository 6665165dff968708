fn main() {
    std::process::exit(checkerboard::cli::run(std::env::args_os()));
}
