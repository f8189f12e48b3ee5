fn main() {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let code = spbw::shell::run_command(&args, &mut std::io::stdout());
    std::process::exit(code);
}
