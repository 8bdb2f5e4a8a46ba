fn main() {
    std::process::exit(mopfact::cli::main_with_args(std::env::args_os()));
}
