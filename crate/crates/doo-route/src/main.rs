fn main() {
    std::process::exit(doo_route::cli::run(std::env::args_os()));
}
