use clap::Parser;
use statex_cli::{configure_threads, run, Cli, EXIT_FAILURE, EXIT_OK};

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // Exit code 2 is reserved for decision errors.
            let code = if e.use_stderr() { EXIT_FAILURE } else { EXIT_OK };
            let _ = e.print();
            std::process::exit(code);
        }
    };
    if let Err(e) = configure_threads() {
        eprintln!("error: {e:#}");
        std::process::exit(EXIT_FAILURE);
    }
    let stdout = std::io::stdout();
    let mut out = std::io::BufWriter::new(stdout.lock());
    let code = run(cli, &mut std::io::stdin().lock(), &mut out, &mut std::io::stderr());
    drop(out);
    std::process::exit(code);
}
