fn main() {
    std::process::exit(solvsoliton::cli::run(std::env::args_os()));
}
