fn main() {
    let code = heisenberg_lab::cli::main_with_args(std::env::args().collect());
    std::process::exit(code);
}
