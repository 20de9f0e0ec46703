fn main() {
    std::process::exit(fglat::cli::run(std::env::args_os()));
}
