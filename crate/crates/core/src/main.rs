fn main() {
    std::process::exit(delaycas::cli::run(std::env::args_os()));
}
