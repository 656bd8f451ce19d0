fn main() {
    let out = std::io::stdout();
    let err = std::io::stderr();
    let code = qmrc::run(std::env::args_os(), &mut out.lock(), &mut err.lock());
    std::process::exit(code);
}
