fn main() {
    let args: Vec<_> = std::env::args_os().collect();
    let code = cycone::cli::run(args, &mut std::io::stdout().lock(), &mut std::io::stderr().lock());
    std::process::exit(code);
}
