fn main() {
    let code = coherent_risk::cli::run(std::env::args_os(), &mut std::io::stdout().lock());
    std::process::exit(code);
}
