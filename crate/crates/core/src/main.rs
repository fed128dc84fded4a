fn main() {
    std::process::exit(colored_tensor::cli::run(std::env::args()));
}
