fn main() {
    std::process::exit(lemmaclust::cli::run(std::env::args_os()));
}
