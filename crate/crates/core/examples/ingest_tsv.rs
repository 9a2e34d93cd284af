//! Reads a TSV bookmark file, strips the GoodReads reading-state tags and
//! prints the availability table.
//!
//!     cargo run --example ingest_tsv -- crates/core/tests/fixtures/shelves_100.tsv

use std::fs::File;
use std::io::BufReader;

use folksonomy::ingest::{ingest, Format, IngestOptions};
use folksonomy::stats::availability_report;

fn main() -> folksonomy::Result<()> {
    let path = std::env::args()
        .nth(1)
        .unwrap_or_else(|| concat!(env!("CARGO_MANIFEST_DIR"), "/tests/fixtures/shelves_100.tsv").into());
    let (f, report) = ingest(BufReader::new(File::open(&path)?), Format::Tsv, &IngestOptions::goodreads())?;
    println!("{}", availability_report(&report));
    println!("auto tags stripped: {}", report.auto_tags_stripped);
    for line in &report.malformed {
        eprintln!("{path}: line {}: {}", line.line, line.reason);
    }
    let top = f.used_tags().max_by_key(|&t| (f.frequencies(t).bf, std::cmp::Reverse(t))).unwrap();
    println!("most used tag: {} ({} bookmarks)", f.tag_name(top), f.frequencies(top).bf);
    Ok(())
}
