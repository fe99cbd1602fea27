fn main() {
    std::process::exit(qpiston::cli::run(std::env::args_os()));
}
