use clap::Parser;

use millscale_cli::{run, Cli, RunError};

fn main() {
    // clap exits with code 2 on its own for parse failures.
    let cli = Cli::parse();
    let stdout = std::io::stdout();
    let mut handle = stdout.lock();
    match run(&cli, &mut handle) {
        Ok(()) => {}
        Err(err @ RunError::Usage(_)) => {
            eprintln!("{err}");
            std::process::exit(2);
        }
        Err(err @ RunError::Domain(_)) => {
            eprintln!("{err}");
            std::process::exit(1);
        }
    }
}
