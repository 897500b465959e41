fn main() {
    std::process::exit(qtoda::cli::main_with_args(std::env::args_os()));
}
