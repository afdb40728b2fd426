use clap::Parser;

use ttolab::cli::{execute, Args};

fn main() {
    let out = execute(&Args::parse());
    print!("{}", out.stdout);
    eprint!("{}", out.stderr);
    std::process::exit(out.code);
}
