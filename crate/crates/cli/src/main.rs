use std::io::Write;

fn main() {
    let out = crystalkit_cli::run_command(std::env::args());
    std::io::stdout().write_all(out.stdout.as_bytes()).expect("write stdout");
    std::io::stderr().write_all(out.stderr.as_bytes()).expect("write stderr");
    std::process::exit(out.code);
}
