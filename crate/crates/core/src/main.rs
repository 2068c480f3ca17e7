fn main() {
    std::process::exit(chebosc::cli::run(std::env::args_os()));
}
