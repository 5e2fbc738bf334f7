fn main() {
    std::process::exit(ellprim_cli::run(std::env::args_os()));
}
