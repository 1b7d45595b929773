fn main() {
    std::process::exit(darboux::cli::run(std::env::args_os()));
}
