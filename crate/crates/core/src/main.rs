fn main() {
    std::process::exit(fedsat::cli::run(std::env::args_os()));
}
