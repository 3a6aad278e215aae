fn main() {
    std::process::exit(hazsim::cli::run(std::env::args_os()));
}
