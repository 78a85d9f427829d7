//! Builds the data files shipped with `bandsim-core`.

mod corpus;
mod seeds;
mod table;

use std::path::PathBuf;

use clap::{Parser, Subcommand};

#[derive(Parser)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Knot table and reference PD codes from the KnotInfo extract.
    Table {
        #[arg(long, default_value = "crates/core/data/knotinfo_source.tsv")]
        source: PathBuf,
        #[arg(long, default_value = "crates/core/data")]
        out: PathBuf,
    },
    /// Compact seed conformations for every knot type up to 8 crossings.
    Seeds {
        #[arg(long, default_value = "crates/core/data/knotinfo_source.tsv")]
        source: PathBuf,
        #[arg(long, default_value = "crates/core/data/seeds.txt")]
        out: PathBuf,
    },
    /// Searches for lattice conformations realizing the corpus bandings.
    Corpus {
        #[arg(long, default_value = "crates/core/data/seeds.txt")]
        seeds: PathBuf,
        #[arg(long, default_value = "crates/core/data/banding_corpus.txt")]
        out: PathBuf,
        #[arg(long, default_value_t = 1)]
        rng_seed: u64,
    },
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    env_logger::init();
    match Cli::parse().cmd {
        Cmd::Table { source, out } => table::run(&source, &out),
        Cmd::Seeds { source, out } => seeds::run(&source, &out),
        Cmd::Corpus { seeds, out, rng_seed } => corpus::run(&seeds, &out, rng_seed),
    }
}

/// Rows of the KnotInfo extract as `(column name, value)` maps.
pub(crate) fn source_rows(text: &str) -> Vec<std::collections::HashMap<String, String>> {
    let mut lines = text.lines().filter(|l| !l.starts_with('#'));
    let header: Vec<String> = lines.next().expect("header").split('\t').map(str::to_string).collect();
    lines
        .map(|l| header.iter().cloned().zip(l.split('\t').map(str::to_string)).collect())
        .collect()
}
