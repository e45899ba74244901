fn main() {
    std::process::exit(honeycut::cli::run(std::env::args_os()));
}
