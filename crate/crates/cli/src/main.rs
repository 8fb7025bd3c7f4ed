fn main() {
    std::process::exit(hardedge_cli::parse_and_dispatch(std::env::args_os()));
}
