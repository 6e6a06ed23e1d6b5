fn main() {
    std::process::exit(qltc::cli::run(std::env::args_os()));
}
