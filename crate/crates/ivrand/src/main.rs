use clap::Parser;
use ivrand::cli::{run, Cli};

fn main() {
    let cli = Cli::parse();
    let stdout = std::io::stdout();
    if let Err(e) = run(cli, &mut stdout.lock()) {
        eprintln!("ivrand: {e}");
        std::process::exit(e.exit_code() as i32);
    }
}
