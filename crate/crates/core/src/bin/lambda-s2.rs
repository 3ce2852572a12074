fn main() {
    std::process::exit(lambda_s2::cli::run(std::env::args_os()));
}
