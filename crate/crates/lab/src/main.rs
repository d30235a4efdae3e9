use clap::Parser;

use gauss_psh_lab::commands::{run, Cli};

fn main() {
    let cli = Cli::parse();
    std::process::exit(run(cli));
}
