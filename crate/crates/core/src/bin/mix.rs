fn main() {
    std::process::exit(avgmix::cli::run(std::env::args_os()));
}
