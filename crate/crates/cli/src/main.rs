use std::io::Write;

fn main() -> anyhow::Result<()> {
    let out = gclh_cli::run(std::env::args_os());
    std::io::stdout().write_all(out.stdout.as_bytes())?;
    std::io::stderr().write_all(out.stderr.as_bytes())?;
    std::process::exit(out.code);
}
