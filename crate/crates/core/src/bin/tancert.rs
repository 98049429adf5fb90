fn main() {
    std::process::exit(tancert::cli::run(std::env::args_os()));
}
