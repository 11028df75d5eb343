fn main() {
    std::process::exit(fourier_qsp::cli::run(std::env::args_os()));
}
