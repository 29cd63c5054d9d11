use clap::Parser;

fn main() {
    let cli = match ftt_cli::Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // usage errors count as configuration errors; help and version are not errors
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            std::process::exit(code);
        }
    };
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    if let Err(e) = ftt_cli::execute(cli, &mut out) {
        eprintln!("ftt: {e}");
        std::process::exit(e.exit_code());
    }
}
