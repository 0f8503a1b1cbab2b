fn main() {
    std::process::exit(svdwbc::cli::run(std::env::args_os()));
}
