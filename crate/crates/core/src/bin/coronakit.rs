fn main() {
    std::process::exit(coronakit::cli::run(std::env::args_os()));
}
