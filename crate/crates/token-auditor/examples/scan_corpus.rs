//! Scan a whole manifest of contracts in parallel and aggregate the
//! results, exactly as the `scan` subcommand does.
//!
//! Run with: cargo run --example scan_corpus

use std::error::Error;
use std::path::Path;

use token_auditor::corpus::{aggregate, ingest, load_manifest, scan_corpus, AnalysisOptions};

fn main() -> Result<(), Box<dyn Error>> {
    let manifest = Path::new(concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/fixtures/corpus.manifest"
    ));
    let entries = load_manifest(manifest)?;
    let corpus = ingest(manifest, entries, None);
    let labels: Vec<_> = corpus.iter().map(|e| e.entry.label).collect();

    let reports = scan_corpus(&corpus, &AnalysisOptions::default(), Some(4));
    for report in &reports {
        println!(
            "{:<20} {:<24} {} finding(s)",
            report.id,
            report.verdict_str(),
            report.findings.len()
        );
    }

    let stats = aggregate(&reports, &labels);
    println!(
        "\nadministrated {} of {} classified (fraction {}), unanalyzable {}",
        stats.administrated, stats.total, stats.fraction, stats.unanalyzable
    );
    if let Some(labels) = &stats.labels {
        println!(
            "label agreement: {} match(es), {} mismatch(es), accuracy {}",
            labels.matches, labels.mismatches, labels.accuracy
        );
    }
    Ok(())
}
