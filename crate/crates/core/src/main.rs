fn main() {
    let code = itl::cli::run(std::env::args_os());
    std::process::exit(code);
}
