fn main() {
    std::process::exit(folksonomy::cli::main_with_args(std::env::args_os()));
}
