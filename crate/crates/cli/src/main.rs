use clap::Parser;
use crowdcast_cli::commands::{run, Cli};

fn main() {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or("CROWDCAST_LOG", "warn")).init();
    let cli = Cli::parse();
    let mut stdout = std::io::stdout().lock();
    if let Err(err) = run(cli, &mut stdout) {
        eprintln!("error: {err:#}");
        std::process::exit(crowdcast_cli::exit_code(&err));
    }
}
