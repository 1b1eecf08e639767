fn main() {
    std::process::exit(bergerkit::cli::main_with_args(std::env::args_os()));
}
