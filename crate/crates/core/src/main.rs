use clap::Parser;

use iterfix::cli::{execute, RunConfig};

fn main() {
    let cfg = RunConfig::parse();
    std::process::exit(execute(&cfg));
}
