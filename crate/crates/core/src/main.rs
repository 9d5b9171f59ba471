fn main() {
    let code = ordinary_primes::cli::run(std::env::args_os());
    std::process::exit(code);
}
