fn main() {
    std::process::exit(parkfx::cli::run(std::env::args_os()));
}
