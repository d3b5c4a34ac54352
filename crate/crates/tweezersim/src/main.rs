use std::process;

fn main() {
    let argv: Vec<String> = std::env::args().collect();
    process::exit(tweezersim::harness::cli::cli_main(&argv));
}
