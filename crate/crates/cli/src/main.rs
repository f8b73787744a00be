fn main() {
    std::process::exit(gradenorm_cli::run(std::env::args_os()));
}
