fn main() {
    std::process::exit(zetalab::cli::run(std::env::args_os()));
}
