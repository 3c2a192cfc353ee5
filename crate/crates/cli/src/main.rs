use std::io::Write;

fn main() {
    let (out, err) = (std::io::stdout(), std::io::stderr());
    let code = tseries_cli::main_with(std::env::args_os(), &mut out.lock(), &mut err.lock());
    let _ = std::io::stdout().flush();
    std::process::exit(code);
}
