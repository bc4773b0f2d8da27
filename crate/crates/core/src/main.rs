fn main() {
    std::process::exit(kovtop::cli::run(std::env::args_os()));
}
