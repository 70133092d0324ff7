fn main() {
    std::process::exit(vi_cli::run(std::env::args_os()));
}
