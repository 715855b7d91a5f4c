use majorana::cli;

fn main() {
    if let Err(e) = cli::configure_threads() {
        eprintln!("error: {e}");
        std::process::exit(cli::EXIT_INPUT);
    }
    std::process::exit(cli::run(std::env::args_os()));
}
