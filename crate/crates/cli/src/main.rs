use clap::Parser;

use scatterlab_cli::{run, RunConfig};

fn main() {
    let config = RunConfig::parse();
    std::process::exit(run(&config));
}
