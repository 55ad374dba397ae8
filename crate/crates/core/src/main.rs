fn main() {
    std::process::exit(spin_tomo::cli::run(std::env::args_os()));
}
