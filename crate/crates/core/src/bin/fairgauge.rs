use clap::Parser;
use fairgauge::cli::{run, Cli};

fn main() {
    std::process::exit(run(Cli::parse()));
}
