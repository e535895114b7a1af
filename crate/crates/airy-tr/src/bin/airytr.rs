fn main() {
    std::process::exit(airy_tr::cli::run(std::env::args().collect()));
}
