fn main() {
    std::process::exit(entcap::cli::run(std::env::args_os()));
}
