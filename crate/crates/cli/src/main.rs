fn main() {
    std::process::exit(helixlab_cli::run(std::env::args_os()));
}
