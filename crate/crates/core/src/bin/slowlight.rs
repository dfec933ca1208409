fn main() {
    std::process::exit(slowlight::cli::run(std::env::args_os()));
}
