fn main() {
    std::process::exit(gifaffect::cli::run(std::env::args_os()));
}
