fn main() {
    std::process::exit(floquet_ladder::cli::main_with_args(std::env::args_os()));
}
