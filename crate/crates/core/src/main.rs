fn main() {
    let status = mbsd::cli::run(std::env::args_os());
    std::process::exit(status.code());
}
