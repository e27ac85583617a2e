fn main() {
    std::process::exit(sphere_facets::cli::run(std::env::args_os()));
}
