use clap::Parser;
use pinch_cli::{run, Cli};

fn main() {
    std::process::exit(run(Cli::parse()));
}
