fn main() {
    siteopt::cli::init_logging();
    std::process::exit(siteopt::cli::run(std::env::args_os()));
}
