fn main() {
    std::process::exit(exact_wkb::cli::main_with_args(std::env::args_os()));
}
