use std::io::Write;

fn main() {
    let outcome = picard_core::cli::execute(std::env::args());
    if !outcome.stdout.is_empty() {
        let mut out = std::io::stdout().lock();
        let _ = out.write_all(outcome.stdout.as_bytes());
    }
    if !outcome.stderr.is_empty() {
        let _ = std::io::stderr().lock().write_all(outcome.stderr.as_bytes());
    }
    std::process::exit(outcome.code);
}
