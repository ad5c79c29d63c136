fn main() {
    std::process::exit(solitrend::cli::run(std::env::args_os()));
}
