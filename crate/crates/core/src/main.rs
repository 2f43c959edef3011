use clap::Parser;

use beamwidth::cli::{self, RunConfig};

fn main() {
    env_logger::init();
    let cfg = RunConfig::parse();
    if let Err(e) = cli::run(&cfg) {
        eprintln!("error: {e}");
        std::process::exit(1);
    }
}
