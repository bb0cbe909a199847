use clap::Parser;
use samelson::cli::{main_with, RunConfig, THREADS_ENV};

fn main() {
    if let Some(n) = std::env::var(THREADS_ENV).ok().and_then(|v| v.parse::<usize>().ok()) {
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global().ok();
    }
    let cfg = RunConfig::parse();
    std::process::exit(main_with(&cfg));
}
