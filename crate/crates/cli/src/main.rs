use clap::Parser;

fn main() {
    let cli = biclab_cli::Cli::parse();
    if let Err(e) = biclab_cli::run(&cli) {
        eprintln!("error: {e}");
        std::process::exit(e.exit_code());
    }
}
