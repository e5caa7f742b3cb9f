fn main() {
    std::process::exit(eulerstack::cli::run(std::env::args_os()));
}
